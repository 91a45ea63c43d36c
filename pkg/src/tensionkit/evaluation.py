"""Standardized measures, seed-set sampling, and latent profile generators.

The three solution measures are normalized against the working graph so
they compare across datasets and seed sets:

* ``tau``: tension divided by ``2 * tree_edges * avgC(V)``, where
  ``tree_edges`` counts the edges of the hop-metric spanning tree
  connecting the seeds and ``avgC`` is the mean squared edge weight.
* ``mpe``: induced edge count over ``tree_edges``.
* ``mpc``: mean squared edge weight inside the solution over ``avgC(V)``.

Seed-set sampling buckets uniformly drawn candidate sets into three groups
(D1/D2/D3) by the 10-33, 33-66 and 66-90 percentile bands of their maximum
pairwise hop distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .community import Solution, seed_connector
from .errors import InfeasibleError, InputError
from .graph import EdgeWeights, Graph, hop_distance_matrix, largest_component

PROFILE_SCHEMES = ("uniform", "exponential", "thresholded", "eigenvector")


@dataclass(frozen=True)
class Metrics:
    """Normalized measures of one solution (see module docstring).

    ``edgeless`` flags a solution without induced edges, whose ``mpc`` is
    reported as 0 rather than left undefined.
    """

    tau: float
    mpe: float
    mpc: float
    raw_tension: float
    tree_edges: int
    edgeless: bool = False


@dataclass(frozen=True)
class SeedGroup:
    label: str
    sets: tuple[tuple[int, ...], ...]


def mean_squared_weight(g: Graph, weights: EdgeWeights,
                        nodes: Iterable[int] | None = None) -> float:
    """Average squared edge weight, over the whole graph or over the edges
    induced by ``nodes``.  Raises :class:`InputError` when no edges apply."""
    vals = weights.values
    if nodes is None:
        if not len(vals):
            raise InputError("no edges to average over")
        return float(np.mean(vals ** 2))
    keep = set(nodes)
    sq = [w * w for (u, v), w in zip(g.edges(), vals)
          if u in keep and v in keep]
    if not sq:
        raise InputError("no edges to average over")
    return float(np.mean(sq))


def seed_tree_edge_count(g: Graph, seeds) -> int:
    """Edge count of the hop-metric spanning tree connecting the seeds."""
    _, edges = seed_connector(g, seeds, weights=None)
    return len(edges)


def standardized_metrics(g: Graph, weights: EdgeWeights, solution: Solution,
                         seeds) -> Metrics:
    """Score one solution against its working graph and seed set."""
    base = mean_squared_weight(g, weights)
    if base == 0.0:
        raise InputError("degenerate profile distribution: every edge weight is zero")
    tree_edges = seed_tree_edge_count(g, seeds)
    if solution.edges_induced:
        mpc = mean_squared_weight(g, weights, solution.nodes) / base
        edgeless = False
    else:
        mpc = 0.0
        edgeless = True
    if tree_edges:
        tau = solution.tension / (2.0 * tree_edges * base)
        mpe = solution.edges_induced / tree_edges
    else:
        # single-seed degenerate case: the seed tree has no edges
        tau = 0.0 if solution.tension == 0.0 else math.inf
        mpe = 1.0 if solution.edges_induced == 0 else math.inf
    return Metrics(tau=tau, mpe=mpe, mpc=mpc, raw_tension=solution.tension,
                   tree_edges=tree_edges, edgeless=edgeless)


# -- seed-set sampling -------------------------------------------------------

def sample_seed_groups(g: Graph, set_size: int, n_candidates: int = 1000,
                       per_group: int = 30, rng_seed: int = 0
                       ) -> tuple[SeedGroup, SeedGroup, SeedGroup]:
    """Sample candidate seed sets and bucket them by dispersion.

    Candidates are uniform ``set_size``-subsets of the largest component.
    Their maximum pairwise hop distances define the 10-33 / 33-66 / 66-90
    percentile bands; the first ``per_group`` candidates falling in each
    band become groups D1, D2 and D3.
    """
    if set_size < 1:
        raise InputError("seed set size must be at least 1")
    if n_candidates < 1:
        raise InputError("need at least one candidate seed set")
    comp = largest_component(g)
    if set_size > len(comp):
        raise InfeasibleError(
            f"seed set size {set_size} exceeds the largest component ({len(comp)} nodes)")
    rng = np.random.default_rng(rng_seed)
    comp_arr = np.array(comp, dtype=np.int64)
    candidates = [tuple(sorted(comp_arr[rng.choice(len(comp_arr), size=set_size,
                                                   replace=False)].tolist()))
                  for _ in range(n_candidates)]
    used = sorted({v for cand in candidates for v in cand})
    row_of = {v: i for i, v in enumerate(used)}
    dist = hop_distance_matrix(g, used)
    spreads = np.empty(len(candidates))
    for i, cand in enumerate(candidates):
        best = 0.0
        for a in cand:
            da = dist[row_of[a]]
            for b in cand:
                if b > a and da[b] > best:
                    best = da[b]
        spreads[i] = best
    p10, p33, p66, p90 = np.percentile(spreads, [10, 33, 66, 90])
    bounds = [("D1", p10, p33), ("D2", p33, p66), ("D3", p66, p90)]
    groups = []
    for label, lo, hi in bounds:
        picked = [cand for cand, s in zip(candidates, spreads) if lo <= s <= hi]
        groups.append(SeedGroup(label, tuple(picked[:per_group])))
    return tuple(groups)


# -- profile generators ------------------------------------------------------

def _exponential_raw(rng: np.random.Generator, n: int, m: int, lam: float) -> np.ndarray:
    if lam <= 0:
        raise InputError("exponential rate must be positive")
    return rng.exponential(scale=1.0 / lam, size=(n, m))


def _top_left_singular_vectors(M, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-k left singular vectors (columns) and singular values of M."""
    n, f = M.shape
    if k > min(n, f):
        raise InputError(
            f"requested {k} attribute columns but the incidence matrix only supports {min(n, f)}")
    if n * f <= 4_000_000:
        dense = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=np.float64)
        U, S, _ = np.linalg.svd(dense, full_matrices=False)
        U, S = U[:, :k], S[:k]
    else:
        U, S = _power_iteration_svd(M, k)
    # deterministic sign: the largest-magnitude entry of each vector is nonnegative
    for j in range(k):
        col = U[:, j]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0:
            U[:, j] = -col
    # verify the eigen-residual of M M^T on each returned vector
    for j in range(k):
        sigma2 = S[j] ** 2
        if sigma2 <= 0:
            continue
        u = U[:, j]
        resid = np.linalg.norm(M @ (M.T @ u) - sigma2 * u) / sigma2
        if resid >= 1e-6:
            raise RuntimeError(f"singular vector {j} failed the residual check ({resid:.2e})")
    return U, S


def _power_iteration_svd(M, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Power iteration with deflation on M M^T (matrix-free products)."""
    n = M.shape[0]
    rng = np.random.default_rng(0x5EED)
    found_u: list[np.ndarray] = []
    found_s2: list[float] = []
    for _ in range(k):
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        prev = v
        for _ in range(10_000):
            y = M @ (M.T @ v)
            for u in found_u:
                y -= (u @ y) * u
            norm = np.linalg.norm(y)
            if norm == 0:
                break
            v = y / norm
            if np.linalg.norm(v - prev) < 1e-13:
                break
            prev = v
        s2 = float(v @ (M @ (M.T @ v)))
        found_u.append(v)
        found_s2.append(max(s2, 0.0))
    U = np.column_stack(found_u)
    return U, np.sqrt(np.array(found_s2))


def generate_profiles(n: int, m: int, scheme: str, rng_seed: int = 0,
                      lam: float = 6.0, alpha: float = 0.6,
                      incidence=None) -> np.ndarray:
    """Generate an (n, m) latent profile matrix with entries in [0, 1].

    Schemes: ``uniform`` draws; ``exponential`` draws with rate ``lam``
    clamped to 1; ``thresholded`` zeroes the profiles of a fraction
    ``alpha`` of the nodes and draws the rest uniformly; ``eigenvector``
    rescales the top-``m`` left singular vectors of a node-by-feature
    ``incidence`` matrix into the unit interval.
    """
    if n < 1 or m < 1:
        raise InputError("profile generation needs n >= 1 and m >= 1")
    if scheme not in PROFILE_SCHEMES:
        raise InputError(f"unknown profile scheme {scheme!r} (expected one of {PROFILE_SCHEMES})")
    rng = np.random.default_rng(rng_seed)
    if scheme == "uniform":
        return rng.random((n, m))
    if scheme == "exponential":
        return np.minimum(_exponential_raw(rng, n, m, lam), 1.0)
    if scheme == "thresholded":
        if not 0.0 <= alpha <= 1.0:
            raise InputError("thresholded fraction alpha must lie in [0, 1]")
        X = rng.random((n, m))
        zeroed = rng.choice(n, size=round(alpha * n), replace=False)
        X[zeroed] = 0.0
        return X
    if incidence is None:
        raise InputError("eigenvector scheme needs an incidence matrix")
    if incidence.shape[0] != n:
        raise InputError("incidence matrix row count does not match n")
    U, _ = _top_left_singular_vectors(incidence, m)
    X = np.empty((n, m))
    for j in range(m):
        col = U[:, j]
        lo, hi = float(col.min()), float(col.max())
        span = hi - lo
        X[:, j] = (col - lo) / span if span > 0 else 0.0
    return X
