"""Numerical vertex extremal length on finite annuli.

For vertex sets A, B in a finite graph, the quantity optimized is
``sup_m dist_m(A, B)^2 / area(m)`` where a path's length is the sum of the
weights of every vertex it visits (endpoints included) and the area is the
sum of squared weights.  The solver is a cutting-plane scheme: minimize the
area subject to unit length on a growing family of shortest paths, where the
inner quadratic program is solved by projected coordinate ascent on its dual
(each multiplier update is a clipped step, so the metric stays a nonnegative
combination of path indicators).

Lower bounds are certified by the returned metric, upper bounds by a greedy
maximal family of vertex-disjoint A-B paths.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import FrontierError, GraphError
from .graph_core import LayerDecomposition, RotationGraph
from .refinement import VMetric
from .trend import (
    HYPERBOLIC,
    INCONCLUSIVE,
    PARABOLIC,
    classify_cumulative_sums,
)


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("SPEISER_LAB_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class SolverOptions:
    tol: float = 1e-6
    max_paths: int = 200
    qp_iterations: int = 2000


@dataclass
class VelEstimate:
    lower: float
    upper: float
    metric: VMetric
    paths: list[tuple[int, ...]]
    iterations: dict = field(default_factory=dict)
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "converged": self.converged,
            "iterations": self.iterations,
            "n_disjoint_paths": len(self.paths),
        }


def metric_objective(
    g: RotationGraph, A: set[int], B: set[int], m: VMetric
) -> dict:
    """dist = min total vertex weight over A-B paths; area = sum m^2."""
    if not A or not B or A & B:
        raise GraphError("A and B must be nonempty and disjoint")
    dist = _shortest_weighted(g, A, B, m)
    area = m.area()
    ratio = (dist * dist / area) if area > 0 and math.isfinite(dist) else (
        math.inf if not math.isfinite(dist) else 0.0
    )
    if area == 0:
        ratio = 0.0
    return {"dist": dist, "area": area, "ratio": ratio}


def _shortest_weighted(g, A, B, m) -> float:
    import heapq

    dist = {a: m[a] for a in A}
    heap = [(m[a], a) for a in sorted(A)]
    heapq.heapify(heap)
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v in B:
            return d
        for dart in g.rotations[v]:
            w = g.dart_vertex[dart ^ 1]
            nd = d + m[w]
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return math.inf


class _Subproblem:
    """Support-restricted instance with scipy adjacency and path machinery."""

    def __init__(self, g: RotationGraph, A, B, support=None):
        if support is None:
            support = range(g.n_vertices)
        self.nodes = sorted(set(support))
        self.local = {v: i for i, v in enumerate(self.nodes)}
        self.A = sorted(self.local[a] for a in A if a in self.local)
        self.B = sorted(self.local[b] for b in B if b in self.local)
        if not self.A or not self.B:
            raise GraphError("A and B must meet the support")
        self.n = len(self.nodes)
        rows, cols = [], []
        local = self.local
        for v in self.nodes:
            lv = local[v]
            for d in g.rotations[v]:
                w = g.dart_vertex[d ^ 1]
                lw = local.get(w)
                if lw is not None:
                    rows.append(lv)
                    cols.append(lw)
        # one extra row: the virtual source feeding all of A
        src = self.n
        for a in self.A:
            rows.append(src)
            cols.append(a)
        self.rows = np.asarray(rows, dtype=np.int32)
        self.cols = np.asarray(cols, dtype=np.int32)
        self.src = src
        self.b_mask = np.zeros(self.n + 1, dtype=bool)
        self.b_mask[self.B] = True

    def shortest_path(self, m: np.ndarray) -> tuple[float, np.ndarray] | None:
        """Min vertex-weight A-B path; returns (length, local vertex indices)."""
        data = m[self.cols].astype(float)
        graph = csr_matrix(
            (data, (self.rows, self.cols)), shape=(self.n + 1, self.n + 1)
        )
        dist, pred = dijkstra(
            graph, directed=True, indices=self.src, return_predecessors=True
        )
        dist_b = np.where(self.b_mask, dist, np.inf)
        best = int(np.argmin(dist_b))
        if not np.isfinite(dist_b[best]):
            return None
        path = []
        v = best
        while v != self.src and v >= 0:
            path.append(v)
            v = pred[v]
        path.reverse()
        return float(dist_b[best]), np.asarray(path, dtype=np.int64)

    def disjoint_path_family(self) -> list[np.ndarray]:
        """Greedy maximal family of vertex-disjoint A-B paths (fewest vertices)."""
        alive = np.ones(self.n, dtype=bool)
        family = []
        adj = csr_matrix(
            (np.ones(len(self.rows)), (self.rows, self.cols)),
            shape=(self.n + 1, self.n + 1),
        )
        indptr, indices = adj.indptr, adj.indices
        while True:
            path = self._bfs_path(alive, indptr, indices)
            if path is None:
                break
            family.append(path)
            alive[path] = False
        return family

    def _bfs_path(self, alive, indptr, indices):
        pred = np.full(self.n, -1, dtype=np.int64)
        seen = np.zeros(self.n, dtype=bool)
        frontier = [a for a in self.A if alive[a]]
        for a in frontier:
            seen[a] = True
            pred[a] = -2
        while frontier:
            nxt = []
            for v in frontier:
                if self.b_mask[v]:
                    path = []
                    while v >= 0:
                        path.append(v)
                        v = pred[v] if pred[v] != -2 else -1
                    path.reverse()
                    return np.asarray(path, dtype=np.int64)
                for w in indices[indptr[v] : indptr[v + 1]]:
                    if w < self.n and alive[w] and not seen[w]:
                        seen[w] = True
                        pred[w] = v
                        nxt.append(int(w))
            frontier = nxt
        return None


def solve_vel(
    g: RotationGraph,
    A: set[int],
    B: set[int],
    opts: SolverOptions | None = None,
    support=None,
) -> VelEstimate:
    """Bracket the vertex extremal length between A and B.

    ``support`` optionally restricts both the paths and the metric to a vertex
    subset (the annulus).  The returned ``lower`` is recomputed from the
    stored metric, so it is a certificate independent of the solver run.
    """
    opts = opts or SolverOptions()
    A, B = set(A), set(B)
    if not A or not B or A & B:
        raise GraphError("A and B must be nonempty and disjoint")
    sub = _Subproblem(g, A, B, support=support)

    family = sub.disjoint_path_family()
    if not family:
        return VelEstimate(
            lower=math.inf,
            upper=math.inf,
            metric=VMetric({}),
            paths=[],
            iterations={"note": "A and B are disconnected"},
            converged=True,
        )
    upper = max(len(p) for p in family) / len(family)

    m = np.zeros(sub.n)
    paths: list[np.ndarray] = []
    n_iter = 0
    converged = False
    while n_iter < opts.max_paths:
        n_iter += 1
        found = sub.shortest_path(m)
        if found is None:
            raise GraphError("separation failed on a connected instance")
        length, path = found
        if length >= 1.0 - opts.tol:
            converged = True
            break
        paths.append(path)
        m = _solve_qp(paths, sub.n, opts)

    found = sub.shortest_path(m)
    dist = found[0] if found else math.inf
    area = float(m @ m)
    lower = dist * dist / area if area > 0 else 0.0

    metric = VMetric({sub.nodes[i]: float(m[i]) for i in range(sub.n) if m[i] > 0})
    family_paths = [tuple(sub.nodes[i] for i in p) for p in family]
    est = VelEstimate(
        lower=lower,
        upper=upper,
        metric=metric,
        paths=family_paths,
        iterations={"outer": n_iter, "n_constraints": len(paths)},
        converged=converged,
    )
    if est.lower > est.upper + 1e-9:
        raise GraphError("certified bounds crossed; solver bug")
    return est


def _solve_qp(paths: list[np.ndarray], n: int, opts: SolverOptions) -> np.ndarray:
    """Exact solve of: min ||m||^2, m >= 0, sum of m over each path >= 1.

    Works on the dual: m = sum lam_p * indicator(p) with lam >= 0, where the
    active multipliers satisfy the Gram system G lam = 1 (G counts pairwise
    path overlaps).  An active-set loop drops negative multipliers and adds
    violated constraints; the Gram matrix stays small (one row per path).
    """
    k = len(paths)
    gram = np.empty((k, k))
    for i, p in enumerate(paths):
        ind = np.zeros(n)
        ind[p] = 1.0
        for j in range(i + 1):
            gram[i, j] = gram[j, i] = float(ind[paths[j]].sum())
    active = np.ones(k, dtype=bool)
    lam = np.zeros(k)
    for _ in range(opts.qp_iterations):
        idx = np.flatnonzero(active)
        G = gram[np.ix_(idx, idx)]
        try:
            sol = np.linalg.solve(G, np.ones(len(idx)))
        except np.linalg.LinAlgError:
            sol, *_ = np.linalg.lstsq(G, np.ones(len(idx)), rcond=None)
        if len(sol) and sol.min() < -1e-12:
            active[idx[int(np.argmin(sol))]] = False
            continue
        lam[:] = 0.0
        lam[idx] = np.maximum(sol, 0.0)
        lengths = gram @ lam
        slack = 1.0 - lengths
        slack[idx] = 0.0
        worst = int(np.argmax(slack))
        if slack[worst] > 1e-12:
            active[worst] = True
            continue
        break
    m = np.zeros(n)
    for i, p in enumerate(paths):
        if lam[i] > 0:
            m[p] += lam[i]
    return m


@dataclass
class TypeTrendReport:
    annuli: list[tuple[int, int]]
    estimates: list[VelEstimate]
    skipped: list[tuple[int, int]]
    cumulative_lower: list[float]
    fit: dict
    verdict: str

    def to_dict(self) -> dict:
        return {
            "annuli": [list(a) for a in self.annuli],
            "per_annulus": [e.to_dict() for e in self.estimates],
            "skipped": [list(a) for a in self.skipped],
            "cumulative_lower": self.cumulative_lower,
            "fit": {k: v for k, v in self.fit.items()},
            "verdict": self.verdict,
        }


def vel_type_trend(
    g: RotationGraph,
    root: int,
    radii: list[tuple[int, int]],
    layers: LayerDecomposition | None = None,
    opts: SolverOptions | None = None,
) -> TypeTrendReport:
    """Per-annulus extremal-length estimates and a growth-trend verdict.

    Each annulus (n_inner, n_outer) uses A = S(n_inner), B = S(n_outer) and
    support B(n_outer) - B(n_inner - 1); annuli touching the frontier are
    excluded and reported.
    """
    from .graph_core import bfs_layers

    layers = layers or bfs_layers(g, root)
    usable: list[tuple[int, int]] = []
    skipped: list[tuple[int, int]] = []
    for (ni, no) in radii:
        if ni < 0 or no <= ni:
            raise GraphError(f"bad annulus ({ni}, {no})")
        if no > layers.reliable_depth:
            skipped.append((ni, no))
        else:
            usable.append((ni, no))

    def solve_one(ann):
        ni, no = ann
        support = [
            v for v in range(g.n_vertices) if ni <= layers.dist[v] <= no
        ]
        A = set(layers.spheres[ni])
        B = set(layers.spheres[no])
        return solve_vel(g, A, B, opts=opts, support=support)

    workers = max_workers()
    if workers > 1 and len(usable) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            estimates = list(pool.map(solve_one, usable))
    else:
        estimates = [solve_one(a) for a in usable]

    cumulative = []
    acc = 0.0
    for est in estimates:
        acc += est.lower if math.isfinite(est.lower) else 0.0
        cumulative.append(acc)
    fit = classify_cumulative_sums(range(1, len(cumulative) + 1), cumulative)
    verdict = fit["verdict"]
    if verdict not in (PARABOLIC, HYPERBOLIC):
        verdict = INCONCLUSIVE
    return TypeTrendReport(
        annuli=usable,
        estimates=estimates,
        skipped=skipped,
        cumulative_lower=cumulative,
        fit=fit,
        verdict=verdict,
    )
