"""Seed-centered low-tension community search.

Two strategies over an attributed graph:

* ``tree_community`` (bottom-up): connect the seeds by a minimum spanning
  tree of their metric closure — path lengths counted either in hops
  (``"hops"``) or in summed profile-difference weights (``"weights"``) — and
  expand the tree edges back into their graph paths.
* ``peel_community`` (top-down): start from the whole graph and repeatedly
  remove the highest-scoring node whose removal keeps the seeds connected,
  pruning nodes that become isolated along the way.  Scores are either
  static random draws (``"random"``), the sum of the node's surviving
  incident weights (``"sum"``), or their maximum (``"max"``).

Returned node sets are scored by exact conformation on the induced
subgraph, induced non-tree edges included.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .conformation import conform, social_tension
from .errors import InfeasibleError, InputError
from .graph import (EdgeWeights, Graph, induced_subgraph,
                    minimum_spanning_tree, path_distances, _reconstruct_path)

TREE_VARIANTS = ("hops", "weights")
PEEL_VARIANTS = ("random", "sum", "max")

WEIGHT_NORMS = ("l2", "l1", "max")


@dataclass(frozen=True)
class Solution:
    """A connected node set with its induced-subgraph tension."""

    nodes: frozenset[int]
    edges_induced: int
    tension: float
    algorithm_tag: str

    def sorted_nodes(self) -> list[int]:
        return sorted(self.nodes)


def proxy_weights(g: Graph, latent, norm: str = "l2") -> EdgeWeights:
    """Per-edge profile difference: ``|x_u - x_v|`` for a single attribute,
    a vector norm of the difference for several (``l2`` by default)."""
    X = np.asarray(latent, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] != g.node_count:
        raise InputError("profile matrix does not match the graph's node count")
    if norm not in WEIGHT_NORMS:
        raise InputError(f"unknown weight norm {norm!r} (expected one of {WEIGHT_NORMS})")
    ea = g.edge_array()
    diffs = X[ea[:, 0]] - X[ea[:, 1]]
    if norm == "l2":
        vals = np.linalg.norm(diffs, axis=1)
    elif norm == "l1":
        vals = np.abs(diffs).sum(axis=1)
    else:
        vals = np.abs(diffs).max(axis=1) if len(diffs) else np.zeros(0)
    return EdgeWeights(g, vals)


def _check_seeds(g: Graph, seeds) -> list[int]:
    uniq = sorted(set(seeds))
    if not uniq:
        raise InputError("empty node set: at least one seed is required")
    if uniq[0] < 0 or uniq[-1] >= g.node_count:
        raise InputError("seed outside the graph's node range")
    return uniq


def evaluate_solution(g: Graph, latent, nodes, algorithm_tag: str = "custom",
                      tol: float = 1e-9) -> Solution:
    """Score a node set: conform the induced subgraph and total its tension.

    The node set must induce a connected subgraph.
    """
    sub, olds = induced_subgraph(g, nodes)
    if len(olds) > 1:
        # connectivity via BFS over the induced subgraph
        dist = [False] * sub.node_count
        dist[0] = True
        queue = deque([0])
        count = 1
        while queue:
            u = queue.popleft()
            for v in sub.neighbors(u):
                if not dist[v]:
                    dist[v] = True
                    count += 1
                    queue.append(v)
        if count != sub.node_count:
            raise InfeasibleError("disconnected node set cannot be scored as a community")
    X = np.asarray(latent, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    sub_latent = X[olds]
    res = conform(sub, sub_latent, tol=tol)
    tension = social_tension(sub, sub_latent, res.conformed)
    return Solution(frozenset(olds), sub.edge_count, tension, algorithm_tag)


# -- bottom-up: metric-closure spanning tree --------------------------------

def seed_connector(g: Graph, seeds, weights: EdgeWeights | None = None
                   ) -> tuple[set[int], set[tuple[int, int]]]:
    """Connect the seeds through a metric-closure MST expanded into paths.

    Path lengths are hop counts when ``weights`` is None, else summed edge
    weights (ties: fewest hops, then lexicographically smallest sequence).
    Returns the union of path nodes and the union of path edges.
    """
    seeds = _check_seeds(g, seeds)
    if len(seeds) == 1:
        return {seeds[0]}, set()
    dists = {s: path_distances(g, s, weights) for s in seeds}
    closure: dict[tuple[int, int], float] = {}
    for ia, a in enumerate(seeds):
        dist_a = dists[a][0]
        for b in seeds[ia + 1:]:
            closure[(a, b)] = float(dist_a[b])
    tree = minimum_spanning_tree(seeds, closure)
    nodes: set[int] = set(seeds)
    edges: set[tuple[int, int]] = set()
    for a, b in tree:
        dw, dh = dists[b]
        path = _reconstruct_path(g, a, b, dw, dh, weights)
        nodes.update(path)
        for u, v in zip(path, path[1:]):
            edges.add((u, v) if u < v else (v, u))
    return nodes, edges


def tree_community(g: Graph, latent, seeds, variant: str = "hops",
                   weights: EdgeWeights | None = None) -> Solution:
    """Bottom-up community search; see the module docstring."""
    if variant not in TREE_VARIANTS:
        raise InputError(f"unknown tree variant {variant!r} (expected one of {TREE_VARIANTS})")
    lengths = None
    if variant == "weights":
        lengths = weights if weights is not None else proxy_weights(g, latent)
    nodes, _ = seed_connector(g, seeds, lengths)
    return evaluate_solution(g, latent, nodes, algorithm_tag=f"tree-{variant}")


# -- top-down: score-guided peeling -----------------------------------------

def _seeds_reachable(g: Graph, alive: list[bool], start: int,
                     targets: set[int]) -> bool:
    """BFS over the surviving nodes; True once every target is reached."""
    missing = len(targets) - 1  # start is itself a target
    if missing == 0:
        return True
    seen = [False] * g.node_count
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if alive[v] and not seen[v]:
                seen[v] = True
                if v in targets:
                    missing -= 1
                    if missing == 0:
                        return True
                queue.append(v)
    return False


def peel_community(g: Graph, latent, seeds, variant: str = "sum",
                   rng_seed: int = 0, weights: EdgeWeights | None = None) -> Solution:
    """Top-down community search; see the module docstring.

    Every pick rescans the remaining candidates, scoring each against the
    current survivors (ties: lowest node id), then checks with a fresh
    breadth-first search whether the seeds stay connected without the pick.
    Seeds are never candidates for removal; nodes isolated by a removal are
    pruned away.  ``rng_seed`` fixes the draws of the ``"random"`` variant.
    """
    if variant not in PEEL_VARIANTS:
        raise InputError(f"unknown peel variant {variant!r} (expected one of {PEEL_VARIANTS})")
    seeds = _check_seeds(g, seeds)
    seed_set = set(seeds)
    n = g.node_count

    static = wadj = by_weight = None
    if variant == "random":
        static = np.random.default_rng(rng_seed).random(n).tolist()
    else:
        if weights is None:
            weights = proxy_weights(g, latent)
        wadj = weights.weighted_adjacency()
        if variant == "max":
            # descending weight order lets the max score stop at the first
            # surviving neighbor
            by_weight = [sorted(pairs, key=lambda t: -t[1]) for pairs in wadj]

    alive = [True] * n
    everyone = _seeds_reachable(g, alive, seeds[0], seed_set)
    if not everyone:
        raise InfeasibleError("seeds in different components")

    pool = [v for v in range(n) if v not in seed_set]  # K, ascending id
    deg = g.degrees().tolist()
    kept: list[int] = []  # V': nodes whose removal would split the seeds

    while pool:
        # argmax score over the surviving candidates, rescored per pick
        best_v = -1
        best_s = -math.inf
        survivors: list[int] = []
        for v in pool:
            if not alive[v]:
                continue  # pruned since the last pick
            survivors.append(v)
            if static is not None:
                s = static[v]
            elif by_weight is not None:
                s = 0.0
                for u, w in by_weight[v]:
                    if alive[u]:
                        s = w
                        break
            else:
                s = 0.0
                for u, w in wadj[v]:
                    if alive[u]:
                        s += w
            if s > best_s:
                best_s = s
                best_v = v
        if best_v < 0:
            break
        v = best_v
        survivors.remove(v)
        pool = survivors
        alive[v] = False
        if _seeds_reachable(g, alive, seeds[0], seed_set):
            # committed; prune candidates the removal isolated (they have no
            # surviving neighbors left, so pruning them isolates nobody else)
            for u in g.neighbors(v):
                if alive[u]:
                    deg[u] -= 1
                    if deg[u] == 0 and u not in seed_set:
                        alive[u] = False
        else:
            alive[v] = True
            kept.append(v)  # essential: stays in the survivors, leaves K

    result = set(kept) | seed_set
    return evaluate_solution(g, latent, result, algorithm_tag=f"peel-{variant}")
