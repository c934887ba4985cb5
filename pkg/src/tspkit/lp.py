"""Approximate 2-edge-connected spanning subgraph LP with a dual certificate.

The covering LP is ``min c.x  s.t.  x(delta(S)) >= 2  for every cut S, x >= 0``.
Its dual packs cuts: ``max 2 * sum_S y_S  s.t.  sum_{S: e in delta(S)} y_S <= c_e``.

The solver runs Garg-Koenemann multiplicative weights on the packing side.
Edge lengths start at ``init_length / c_e``; each iteration routes the
bottleneck capacity through a near-minimum cut under the lengths and
inflates the lengths of the cut edges. Any length vector gives a feasible
primal point ``2 * lengths / mincut(lengths)``, and any packing scaled by its
worst edge congestion is dual feasible, so both bounds are valid whenever
the loop stops.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import CheckFailure, PreconditionError
from .graph import FractionalSolution, Graph, UnionFind
from .mincut import stoer_wagner, weight_matrix

log = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class SolverParams:
    epsilon: float = 0.25
    max_iterations: int | None = None
    init_length: float | None = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise PreconditionError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.init_length is not None and not self.init_length > 0:
            raise PreconditionError("init_length must be positive")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise PreconditionError("max_iterations must be nonnegative")


@dataclass(frozen=True)
class LpResult:
    x: FractionalSolution
    lower_bound: float
    gap: float
    iterations: int
    certified: bool
    min_cut: float
    packing: Mapping[frozenset, float]


def default_init_length(n: int, eps_inner: float) -> float:
    return (1 + eps_inner) * ((1 + eps_inner) * n) ** (-1 / eps_inner)


def default_max_iterations(n: int, m: int, epsilon: float) -> int:
    return int(math.ceil(50 * m * math.ceil(math.log2(max(n, 2))) / epsilon ** 2))


def certify_lower_bound(g: Graph, packing: Mapping[frozenset, float]) -> float:
    """Lower bound on the LP optimum from a cut packing.

    ``packing`` maps a vertex side ``S`` to its amount ``y_S``. Dividing the
    packing by its largest load-to-cost ratio makes it dual feasible, so the
    result is valid for any nonnegative packing. An empty packing gives 0.
    """
    total = math.fsum(packing.values())
    if total <= 0:
        return 0.0
    load = np.zeros(g.m)
    for side, amount in packing.items():
        if amount < 0:
            raise PreconditionError("packing amounts must be nonnegative")
        load += amount * _cut_indicator(g, side)
    costs = g.costs
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(load > 0, load / costs, 0.0)
    congestion = float(np.max(ratio))
    if not math.isfinite(congestion):
        return 0.0
    return 2 * total / congestion


def _cut_indicator(g: Graph, side) -> np.ndarray:
    inside = np.zeros(g.n, dtype=bool)
    inside[list(side)] = True
    us = np.fromiter((u for u, _, _ in g.edges), dtype=np.intp, count=g.m)
    vs = np.fromiter((v for _, v, _ in g.edges), dtype=np.intp, count=g.m)
    return (inside[us] != inside[vs]).astype(float)


def solve_2ecss_lp(g: Graph, params: SolverParams | None = None) -> LpResult:
    """Feasible point within a certified factor of the 2ECSS LP optimum.

    Zero-cost edges are fixed at value 2 and contracted before solving. If
    the iteration cap is hit first, the result carries ``certified=False``
    and the gap actually achieved.
    """
    params = params or SolverParams()
    g.require_connected()
    eps = params.epsilon
    values = np.zeros(g.m)
    if g.n < 2:
        x = FractionalSolution.from_values(g, values)
        return LpResult(x, 0.0, 0.0, 0, True, math.inf, {})

    free = g.costs == 0
    values[free] = 2.0
    uf = UnionFind(g.n)
    for e in np.flatnonzero(free):
        uf.union(*g.endpoints(int(e)))
    roots = sorted({uf.find(v) for v in range(g.n)})
    label = {r: i for i, r in enumerate(roots)}
    members: list[list[int]] = [[] for _ in roots]
    for v in range(g.n):
        members[label[uf.find(v)]].append(v)
    kept = [e for e in range(g.m)
            if not free[e] and uf.find(g.edges[e][0]) != uf.find(g.edges[e][1])]
    contracted = Graph(len(roots), [(label[uf.find(g.edges[e][0])],
                                     label[uf.find(g.edges[e][1])], g.edges[e][2])
                                    for e in kept])

    if contracted.n < 2:
        x = FractionalSolution.from_values(g, values)
        return LpResult(x, 0.0, 0.0, 0, True, _min_cut(g, values), {})

    lengths, packing, iterations = _garg_koenemann(contracted, params)
    lam, _ = stoer_wagner(weight_matrix(contracted, lengths))
    values[kept] = 2 * lengths / lam
    x = FractionalSolution.from_values(g, values)

    cut = _min_cut(g, x.values)
    if cut < 2 * (1 - FEASIBILITY_TOL):
        raise CheckFailure(f"LP point violates a cut: min cut {cut}", {"min_cut": cut})

    # Packed amounts come back in normalised cost units.
    cmax = float(np.max(contracted.costs))
    expanded = {}
    for side, amount in packing.items():
        key = frozenset(v for c in side for v in members[c])
        expanded[key] = expanded.get(key, 0.0) + amount * cmax
    lower = certify_lower_bound(g, expanded)
    gap = x.objective / lower - 1 if lower > 0 else (0.0 if x.objective == 0 else math.inf)
    certified = gap <= eps
    if not certified:
        log.warning("2ECSS LP stopped after %d iterations with gap %.4g > %.4g",
                    iterations, gap, eps)
    return LpResult(x, lower, max(gap, 0.0), iterations, certified, cut, expanded)


def _min_cut(g: Graph, weights: np.ndarray) -> float:
    return stoer_wagner(weight_matrix(g, weights))[0]


def _garg_koenemann(g: Graph, params: SolverParams):
    """Run the packing loop on a graph with positive costs.

    Returns the best length vector found (by primal objective), the cut
    packing realizing the best dual bound, and the iteration count.
    """
    n, m = g.n, g.m
    eps = params.epsilon
    eps_inner = eps / 3
    max_iter = (params.max_iterations if params.max_iterations is not None
                else default_max_iterations(n, m, eps))
    init = params.init_length if params.init_length is not None else default_init_length(n, eps_inner)
    # Costs are normalised so the iterates do not depend on the cost scale.
    cost = g.costs / np.max(g.costs)
    us = np.array([u for u, _, _ in g.edges], dtype=np.intp)
    vs = np.array([v for _, v, _ in g.edges], dtype=np.intp)
    lengths = init / cost
    load = np.zeros(m)
    packed = 0.0

    # Cuts found so far, as rows of an edge-incidence matrix, with their
    # vertex sides and packed amounts.
    pool = np.zeros((0, m))
    sides: list[frozenset] = []
    amounts: list[float] = []
    index: dict[bytes, int] = {}

    def exact_cut():
        lam, side = stoer_wagner(weight_matrix(g, lengths))
        inside = np.zeros(n, dtype=bool)
        inside[side] = True
        row = (inside[us] != inside[vs])
        key = row.tobytes()
        if key not in index:
            nonlocal pool
            index[key] = len(sides)
            pool = np.vstack([pool, row.astype(float)])
            sides.append(frozenset(side))
            amounts.append(0.0)
        return lam, index[key]

    # Lengths only grow, so the last exact min cut stays a lower bound on the
    # current one; pooled cuts within ``slack`` of it are near-minimum.
    slack = 1 + eps_inner
    lam_lb, j = exact_cut()
    best_primal = math.inf
    best_lengths = lengths.copy()
    best_dual = 0.0
    best_amounts: list[float] = []
    it = 0
    while it < max_iter:
        vals = pool @ lengths
        j = int(np.argmin(vals))
        if vals[j] > slack * lam_lb:
            lam_lb, j = exact_cut()
            vals = pool @ lengths
        primal = 2 * float(np.dot(cost, lengths)) / lam_lb
        if primal < best_primal:
            best_primal = primal
            best_lengths = lengths.copy()
        if best_dual > 0 and best_primal <= (1 + eps) * (1 - 1e-12) * best_dual:
            break

        row = pool[j] > 0
        bottleneck = float(np.min(cost[row]))
        packed += bottleneck
        amounts[j] += bottleneck
        load[row] += bottleneck
        lengths[row] *= 1 + eps_inner * bottleneck / cost[row]
        it += 1

        dual = 2 * packed / float(np.max(load / cost))
        if dual > best_dual:
            best_dual = dual
            best_amounts = list(amounts)

        top = float(np.max(lengths))
        if top > 1e100:
            shift = 2.0 ** -math.floor(math.log2(top))
            lengths *= shift
            lam_lb *= shift

    packing = {sides[i]: a for i, a in enumerate(best_amounts) if a > 0}
    return best_lengths, packing, it
