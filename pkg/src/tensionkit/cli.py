"""Command-line harness around the library.

Subcommands: ``conform``, ``comm``, ``team``, ``cardinality``, ``bench``,
``gen-profiles``, ``sample-seeds``.  Exit codes: 0 success, 1 input error,
2 infeasible request, 3 non-convergence.

Disconnected input graphs are restricted to their largest component (with a
logged warning) for every command except ``conform``, which is well-defined
on disconnected graphs and must keep its row-per-node alignment.  All
randomness derives from the single ``--seed`` through named streams, and
with ``--no-timing`` the CSV outputs are byte-identical across repeated
runs of the same configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fileio
from .community import (PEEL_VARIANTS, TREE_VARIANTS, WEIGHT_NORMS,
                        peel_community, proxy_weights, tree_community)
from .conformation import conform, social_tension
from .errors import ConvergenceError, InfeasibleError, InputError
from .evaluation import (PROFILE_SCHEMES, generate_profiles,
                         sample_seed_groups, standardized_metrics)
from .graph import Graph, induced_subgraph, largest_component
from .rng import derive_rng, derive_seed
from .teams import SkillMap, community_solver, form_team, greedy_fixed_size

log = logging.getLogger("tensionkit")

VARIANT_TAGS = ("tree-hops", "tree-weights", "peel-random", "peel-sum", "peel-max")
METRIC_COLUMNS = ("run_id", "algorithm", "variant", "group", "tau", "mpe", "mpc",
                  "raw_tension", "nodes", "edges", "seconds", "status")
TEAM_COLUMNS = METRIC_COLUMNS + ("step2_noop",)
BENCH_COLUMNS = ("graph", "nodes", "edges", "algorithm", "variant", "runs",
                 "mean_seconds", "std_seconds")


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _split_tag(tag: str) -> tuple[str, str]:
    if tag not in VARIANT_TAGS:
        raise InputError(f"unknown variant {tag!r} (expected one of {VARIANT_TAGS})")
    algorithm, variant = tag.split("-", 1)
    return algorithm, variant


@dataclass
class RunConfig:
    """One experiment configuration; built from flags plus an optional
    JSON config file (flags win)."""

    mode: str
    graph_path: str | None = None
    profiles_path: str | None = None
    scheme: str | None = None
    attrs: int = 1
    lam: float = 6.0
    alpha: float = 0.6
    incidence_path: str | None = None
    seeds_path: str | None = None
    seed_size: int = 7
    n_candidates: int = 1000
    per_group: int = 30
    skills_path: str | None = None
    project_path: str | None = None
    n_projects: int = 80
    k: int | None = None
    variants: tuple[str, ...] = VARIANT_TAGS
    tol: float = 1e-9
    max_iter: int | None = None
    weight_norm: str = "l2"
    skill_threshold: int = 4
    rng_seed: int = 0
    out: str | None = None
    timing: bool = True
    repeats: int = 3
    graph_paths: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.tol <= 0:
            raise InputError("tol must be positive")
        if self.weight_norm not in WEIGHT_NORMS:
            raise InputError(f"unknown weight norm {self.weight_norm!r}")
        for tag in self.variants:
            _split_tag(tag)
        if self.profiles_path is not None and self.scheme is not None:
            raise InputError("give either a profiles file or a generation scheme, not both")


# -- shared loading steps ----------------------------------------------------

def _load_graph(path) -> Graph:
    if path is None:
        raise InputError("a graph file is required (--graph)")
    try:
        return fileio.read_edge_list(path)
    except OSError as e:
        raise InputError(f"cannot read graph file {path}: {e}") from None


def _restrict(g: Graph) -> tuple[Graph, list[int]]:
    """Largest-component working graph plus the original id of each node."""
    comp = largest_component(g)
    if len(comp) == g.node_count:
        return g, list(range(g.node_count))
    log.warning("graph is disconnected: restricting to its largest component "
                "(%d of %d nodes)", len(comp), g.node_count)
    return induced_subgraph(g, comp)


def _load_working_profiles(cfg: RunConfig, g_full: Graph, olds: list[int]) -> np.ndarray:
    """Profiles aligned with the working (possibly restricted) graph."""
    if cfg.profiles_path is not None:
        X = fileio.read_profiles(cfg.profiles_path, g_full.node_count)
        return X[olds]
    scheme = cfg.scheme or "uniform"
    incidence = None
    if scheme == "eigenvector":
        if cfg.incidence_path is None:
            raise InputError("the eigenvector scheme needs --incidence")
        M, _ = fileio.read_incidence(cfg.incidence_path, g_full.node_count)
        incidence = M[olds]
    return generate_profiles(len(olds), cfg.attrs, scheme,
                             rng_seed=derive_seed(cfg.rng_seed, "profiles"),
                             lam=cfg.lam, alpha=cfg.alpha, incidence=incidence)


def _solve_tag(tag: str, g, latent, seeds, weights, run_id: str, master_seed: int):
    algorithm, variant = _split_tag(tag)
    if algorithm == "tree":
        return tree_community(g, latent, seeds, variant=variant, weights=weights)
    rng_seed = derive_seed(master_seed, f"peel-random:{run_id}")
    return peel_community(g, latent, seeds, variant=variant,
                          rng_seed=rng_seed, weights=weights)


def _write_rows(out, columns, rows) -> None:
    if out is None:
        w = sys.stdout
        print(",".join(columns))
        for r in rows:
            print(",".join(str(x) for x in r))
        return
    fileio.ensure_parent(out)
    fileio.write_csv(out, columns, rows)


# -- conform -----------------------------------------------------------------

def run_conform(cfg: RunConfig) -> tuple[np.ndarray, float, int]:
    g = _load_graph(cfg.graph_path)  # no component restriction here
    if cfg.profiles_path is None:
        raise InputError("conform needs a profiles file (--profiles)")
    X = fileio.read_profiles(cfg.profiles_path, g.node_count)
    res = conform(g, X, tol=cfg.tol, max_iter=cfg.max_iter)
    tension = social_tension(g, X, res.conformed)
    return res.conformed, tension, res.iterations


def cmd_conform(cfg: RunConfig) -> int:
    conformed, tension, iterations = run_conform(cfg)
    if cfg.out:
        fileio.ensure_parent(cfg.out)
        fileio.write_profiles(cfg.out, conformed, tension=tension)
    print(f"converged in {iterations} iterations; social tension {tension:.12f}")
    return 0


# -- comm --------------------------------------------------------------------

def run_comm(cfg: RunConfig) -> tuple[tuple[str, ...], list[list[str]]]:
    g_full = _load_graph(cfg.graph_path)
    g, olds = _restrict(g_full)
    new_of = {old: new for new, old in enumerate(olds)}
    X = _load_working_profiles(cfg, g_full, olds)
    weights = proxy_weights(g, X, cfg.weight_norm)

    if cfg.seeds_path is not None:
        raw_sets = fileio.read_seed_sets(cfg.seeds_path, g_full.node_count)
        groups = [("file", raw_sets)]
    else:
        sampled = sample_seed_groups(g, cfg.seed_size, cfg.n_candidates,
                                     cfg.per_group,
                                     rng_seed=derive_seed(cfg.rng_seed, "seed-sampling"))
        # sampled sets live in working-graph ids; report original ids upstream
        groups = [(grp.label, [tuple(olds[v] for v in s) for s in grp.sets])
                  for grp in sampled]

    rows: list[list[str]] = []
    for label, sets in groups:
        for idx, seed_set in enumerate(sets):
            run_id = f"{label}-{idx:03d}"
            mapped = [new_of[v] for v in seed_set if v in new_of]
            missing = len(mapped) != len(seed_set)
            for tag in cfg.variants:
                algorithm, variant = _split_tag(tag)
                base = [run_id, algorithm, variant, label]
                if missing:
                    rows.append(base + ["", "", "", "", "", "", "",
                                        "disconnected seeds"])
                    continue
                t0 = time.perf_counter()
                try:
                    sol = _solve_tag(tag, g, X, mapped, weights, run_id, cfg.rng_seed)
                    met = standardized_metrics(g, weights, sol, mapped)
                except (InfeasibleError, InputError) as e:
                    rows.append(base + ["", "", "", "", "", "", "", str(e)])
                    continue
                seconds = f"{time.perf_counter() - t0:.4f}" if cfg.timing else ""
                rows.append(base + [_fmt(met.tau), _fmt(met.mpe), _fmt(met.mpc),
                                    _fmt(met.raw_tension), str(len(sol.nodes)),
                                    str(sol.edges_induced), seconds, "ok"])
    return METRIC_COLUMNS, rows


def cmd_comm(cfg: RunConfig) -> int:
    columns, rows = run_comm(cfg)
    _write_rows(cfg.out, columns, rows)
    return 0


# -- team --------------------------------------------------------------------

def run_team(cfg: RunConfig) -> tuple[tuple[str, ...], list[list[str]]]:
    g_full = _load_graph(cfg.graph_path)
    g, olds = _restrict(g_full)
    new_of = {old: new for new, old in enumerate(olds)}
    X = _load_working_profiles(cfg, g_full, olds)
    weights = proxy_weights(g, X, cfg.weight_norm)

    if cfg.skills_path is None:
        raise InputError("team mode needs a skills file (--skills)")
    entries_full = fileio.read_skill_counts(cfg.skills_path)
    dropped = sum(1 for node, _, _ in entries_full if node not in new_of)
    if dropped:
        log.warning("%d skill entries reference nodes outside the working component", dropped)
    entries = [(new_of[node], label, count) for node, label, count in entries_full
               if node in new_of]
    skills = SkillMap.from_counts(g.node_count, entries, threshold=cfg.skill_threshold)

    if cfg.project_path is not None:
        projects = [fileio.read_project(cfg.project_path)]
    else:
        rng = derive_rng(cfg.rng_seed, "projects")
        available = [lab for lab, holders in zip(skills.labels, skills.holders) if holders]
        if len(available) < 3:
            raise InfeasibleError("fewer than three coverable skills: cannot sample projects")
        projects = []
        for _ in range(cfg.n_projects):
            size = min(int(rng.integers(3, 14)), len(available))
            picks = rng.choice(len(available), size=size, replace=False)
            projects.append([available[i] for i in sorted(picks)])

    rows: list[list[str]] = []
    for p_idx, labels in enumerate(projects):
        for tag in cfg.variants:
            algorithm, variant = _split_tag(tag)
            run_id = f"P{p_idx:03d}"
            base = [run_id, algorithm, variant, "team"]
            t0 = time.perf_counter()
            try:
                solver = community_solver(
                    algorithm, variant,
                    rng_seed=derive_seed(cfg.rng_seed, f"peel-random:{run_id}"))
                team = form_team(g, X, skills, labels, solver,
                                 weights=weights, weight_norm=cfg.weight_norm)
                met = standardized_metrics(g, weights, team.solution,
                                           sorted(team.step1_individuals))
            except (InfeasibleError, InputError) as e:
                rows.append(base + ["", "", "", "", "", "", "", str(e), ""])
                continue
            seconds = f"{time.perf_counter() - t0:.4f}" if cfg.timing else ""
            sol = team.solution
            rows.append(base + [_fmt(met.tau), _fmt(met.mpe), _fmt(met.mpc),
                                _fmt(met.raw_tension), str(len(sol.nodes)),
                                str(sol.edges_induced), seconds, "ok",
                                "1" if team.step2_noop else "0"])
    return TEAM_COLUMNS, rows


def cmd_team(cfg: RunConfig) -> int:
    columns, rows = run_team(cfg)
    _write_rows(cfg.out, columns, rows)
    return 0


# -- cardinality -------------------------------------------------------------

def run_cardinality(cfg: RunConfig) -> tuple[tuple[str, ...], list[list[str]]]:
    if cfg.k is None:
        raise InputError("cardinality mode needs a team size (--k)")
    g_full = _load_graph(cfg.graph_path)
    g, olds = _restrict(g_full)
    X = _load_working_profiles(cfg, g_full, olds)
    weights = proxy_weights(g, X, cfg.weight_norm)
    t0 = time.perf_counter()
    sol = greedy_fixed_size(g, X, cfg.k, weights=weights,
                            rng_seed=derive_seed(cfg.rng_seed, "cardinality-starts"))
    seconds = f"{time.perf_counter() - t0:.4f}" if cfg.timing else ""
    row = [f"k{cfg.k}", "greedy", "-", "-", "", "", "", _fmt(sol.tension),
           str(len(sol.nodes)), str(sol.edges_induced), seconds, "ok"]
    return METRIC_COLUMNS, [row]


def cmd_cardinality(cfg: RunConfig) -> int:
    columns, rows = run_cardinality(cfg)
    _write_rows(cfg.out, columns, rows)
    return 0


# -- bench -------------------------------------------------------------------

def run_bench(cfg: RunConfig) -> tuple[tuple[str, ...], list[list[str]]]:
    paths = cfg.graph_paths or ((cfg.graph_path,) if cfg.graph_path else ())
    if not paths:
        raise InputError("bench mode needs at least one graph file (--graph)")
    rows: list[list[str]] = []
    for path in paths:
        name = Path(path).name
        g, _ = _restrict(_load_graph(path))
        X = generate_profiles(g.node_count, cfg.attrs, cfg.scheme or "uniform",
                              rng_seed=derive_seed(cfg.rng_seed, f"bench-profiles:{name}"),
                              lam=cfg.lam, alpha=cfg.alpha)
        weights = proxy_weights(g, X, cfg.weight_norm)
        groups = sample_seed_groups(g, cfg.seed_size, cfg.n_candidates, cfg.per_group,
                                    rng_seed=derive_seed(cfg.rng_seed, f"bench-seeds:{name}"))
        pool = [s for grp in groups for s in grp.sets][:cfg.repeats]
        if not pool:
            raise InfeasibleError(f"no seed sets could be sampled for {name}")
        for tag in cfg.variants:
            algorithm, variant = _split_tag(tag)
            times = []
            for ridx, seeds in enumerate(pool):
                t0 = time.perf_counter()
                _solve_tag(tag, g, X, list(seeds), weights,
                           f"bench-{name}-{ridx:03d}", cfg.rng_seed)
                times.append(time.perf_counter() - t0)
            rows.append([name, str(g.node_count), str(g.edge_count), algorithm,
                         variant, str(len(times)), f"{np.mean(times):.6f}",
                         f"{np.std(times):.6f}"])
    return BENCH_COLUMNS, rows


def cmd_bench(cfg: RunConfig) -> int:
    columns, rows = run_bench(cfg)
    _write_rows(cfg.out, columns, rows)
    return 0


# -- gen-profiles & sample-seeds ----------------------------------------------

def cmd_gen_profiles(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise InputError("gen-profiles needs an output path (--out)")
    scheme = cfg.scheme or "uniform"
    if cfg.graph_path is not None:
        n = _load_graph(cfg.graph_path).node_count
    else:
        raise InputError("gen-profiles needs --graph to size the matrix")
    incidence = None
    if scheme == "eigenvector":
        if cfg.incidence_path is None:
            raise InputError("the eigenvector scheme needs --incidence")
        incidence, _ = fileio.read_incidence(cfg.incidence_path, n)
    X = generate_profiles(n, cfg.attrs, scheme,
                          rng_seed=derive_seed(cfg.rng_seed, "profiles"),
                          lam=cfg.lam, alpha=cfg.alpha, incidence=incidence)
    fileio.ensure_parent(cfg.out)
    fileio.write_profiles(cfg.out, X)
    print(f"wrote {X.shape[0]}x{X.shape[1]} profile matrix to {cfg.out}")
    return 0


def cmd_sample_seeds(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise InputError("sample-seeds needs an output prefix (--out)")
    g_full = _load_graph(cfg.graph_path)
    g, olds = _restrict(g_full)
    groups = sample_seed_groups(g, cfg.seed_size, cfg.n_candidates, cfg.per_group,
                                rng_seed=derive_seed(cfg.rng_seed, "seed-sampling"))
    fileio.ensure_parent(cfg.out)
    for grp in groups:
        path = f"{cfg.out}.{grp.label}"
        fileio.write_seed_sets(path, [tuple(olds[v] for v in s) for s in grp.sets])
        print(f"wrote {len(grp.sets)} seed sets to {path}")
    return 0


# -- argument parsing ----------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensionkit",
        description="Low-tension community search and team formation in attributed networks")
    sub = parser.add_subparsers(dest="mode", required=True)

    def add_common(p, *, graph_repeatable=False):
        if graph_repeatable:
            p.add_argument("--graph", action="append", dest="graph",
                           help="edge list file (repeatable)")
        else:
            p.add_argument("--graph", help="edge list file")
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--profiles", dest="profiles", help="latent profile matrix file")
        p.add_argument("--scheme", choices=PROFILE_SCHEMES,
                       help="generate profiles instead of reading them")
        p.add_argument("--attrs", type=int, help="attribute count for generated profiles")
        p.add_argument("--lam", type=float, help="rate of the exponential scheme")
        p.add_argument("--alpha", type=float, help="zeroed fraction of the thresholded scheme")
        p.add_argument("--incidence", dest="incidence",
                       help="incidence file for the eigenvector scheme")
        p.add_argument("--variant", action="append", dest="variant",
                       choices=VARIANT_TAGS, help="algorithm variant (repeatable)")
        p.add_argument("--tol", type=float, help="conformation tolerance")
        p.add_argument("--max-iter", type=int, dest="max_iter",
                       help="conformation iteration budget")
        p.add_argument("--weight-norm", dest="weight_norm", choices=WEIGHT_NORMS,
                       help="norm for multi-attribute edge weights")
        p.add_argument("--skill-threshold", type=int, dest="skill_threshold",
                       help="count needed to hold a skill")
        p.add_argument("--seed", type=int, dest="seed", help="master random seed")
        p.add_argument("--out", help="output path")
        p.add_argument("--timing", action=argparse.BooleanOptionalAction, default=None,
                       help="record wall-clock seconds in CSV rows (--no-timing for "
                            "byte-reproducible outputs)")
        p.add_argument("--seeds", dest="seeds", help="seed sets file")
        p.add_argument("--seed-size", type=int, dest="seed_size",
                       help="size of sampled seed sets")
        p.add_argument("--n-candidates", type=int, dest="n_candidates",
                       help="candidate pool for seed sampling")
        p.add_argument("--per-group", type=int, dest="per_group",
                       help="max seed sets kept per dispersion group")
        p.add_argument("--skills", dest="skills", help="skill counts file")
        p.add_argument("--project", dest="project", help="project file (one line of skills)")
        p.add_argument("--n-projects", type=int, dest="n_projects",
                       help="number of sampled projects")
        p.add_argument("--k", type=int, help="team size for cardinality mode")
        p.add_argument("--repeats", type=int, help="timed repetitions per bench cell")

    for mode in ("conform", "comm", "team", "cardinality", "gen-profiles", "sample-seeds"):
        add_common(sub.add_parser(mode))
    add_common(sub.add_parser("bench"), graph_repeatable=True)
    return parser


_DEFAULTS = dict(attrs=1, lam=6.0, alpha=0.6, tol=1e-9, max_iter=None,
                 weight_norm="l2", skill_threshold=4, seed=0, timing=True,
                 seed_size=7, n_candidates=1000, per_group=30, n_projects=80,
                 repeats=3, variant=list(VARIANT_TAGS))


def _merge_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k not in ("mode", "config")}
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                overrides = json.load(fh)
        except OSError as e:
            raise InputError(f"cannot read config file {args.config}: {e}") from None
        except json.JSONDecodeError as e:
            raise InputError(f"config file {args.config} is not valid JSON: {e}") from None
        if not isinstance(overrides, dict):
            raise InputError("the config file must hold a JSON object")
        for key, val in overrides.items():
            key = key.replace("-", "_")
            if key not in values:
                raise InputError(f"unknown config key {key!r}")
            if values[key] is None:
                values[key] = val
    for key, default in _DEFAULTS.items():
        if values.get(key) is None:
            values[key] = default

    graph = values.get("graph")
    graph_paths: tuple[str, ...] = ()
    if isinstance(graph, list):
        graph_paths = tuple(graph)
        graph = graph[0] if graph else None
    return RunConfig(
        mode=args.mode,
        graph_path=graph,
        profiles_path=values.get("profiles"),
        scheme=values.get("scheme"),
        attrs=values["attrs"],
        lam=values["lam"],
        alpha=values["alpha"],
        incidence_path=values.get("incidence"),
        seeds_path=values.get("seeds"),
        seed_size=values["seed_size"],
        n_candidates=values["n_candidates"],
        per_group=values["per_group"],
        skills_path=values.get("skills"),
        project_path=values.get("project"),
        n_projects=values["n_projects"],
        k=values.get("k"),
        variants=tuple(values["variant"]),
        tol=values["tol"],
        max_iter=values["max_iter"],
        weight_norm=values["weight_norm"],
        skill_threshold=values["skill_threshold"],
        rng_seed=values["seed"],
        out=values.get("out"),
        timing=values["timing"],
        repeats=values["repeats"],
        graph_paths=graph_paths,
    )


_COMMANDS = {
    "conform": cmd_conform,
    "comm": cmd_comm,
    "team": cmd_team,
    "cardinality": cmd_cardinality,
    "bench": cmd_bench,
    "gen-profiles": cmd_gen_profiles,
    "sample-seeds": cmd_sample_seeds,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        return _COMMANDS[args.mode](cfg)
    except InputError as e:
        log.error("input error: %s", e)
        return 1
    except InfeasibleError as e:
        log.error("infeasible: %s", e)
        return 2
    except ConvergenceError as e:
        log.error("non-convergence: %s (residual %.3e after %d iterations)",
                  e, e.residual, e.iterations)
        return 3
    except OSError as e:
        log.error("i/o error: %s", e)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
