"""End-to-end tour construction and the run report."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Sequence

from . import __version__
from .errors import CheckFailure, PreconditionError
from .graph import (EdgeMultiset, Graph, Tour, euler_tour, mst, multiset_cost,
                    odd_vertices, shortest_paths)
from .lp import SolverParams, solve_2ecss_lp
from .sparsify import SparsifyParams, sparsify_solution
from .tjoin import min_cost_tjoin

DEFAULT_EPSILON = 0.25
DEFAULT_SEED = 20171
REL_TOL = 1e-9

ALGORITHMS = ("sparsified-christofides", "classic-christofides", "double-tree")


@dataclass
class TourReport:
    n: int
    m: int
    algorithm: str
    seed: int | None = None
    epsilon: float | None = None
    lp_objective: float | None = None
    lp_lower_bound: float | None = None
    lp_gap: float | None = None
    lp_iterations: int | None = None
    lp_certified: bool | None = None
    sparsifier: dict | None = None
    mst_cost: float = 0.0
    join_cost: float = 0.0
    walk_cost: float = 0.0
    shortcut_tour_cost: float = 0.0
    ratio_to_lower_bound: float | None = None
    stage_times: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PipelineResult:
    tour: Tour
    report: TourReport
    walk: list[int]
    multigraph: EdgeMultiset


class _Stopwatch:
    def __init__(self):
        self.times: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.times[name] = time.perf_counter() - start


def shortcut_tour(g: Graph, walk: Sequence[int]) -> Tour:
    """Keep the first visit of each vertex along ``walk``.

    The cost is measured in the shortest-path metric of ``g``, closing the
    cycle back to the first vertex.
    """
    seen = set()
    order = []
    for v in walk:
        if v not in seen:
            seen.add(v)
            order.append(v)
    missing = [v for v in range(g.n) if v not in seen]
    if missing:
        raise PreconditionError(f"walk misses vertex {missing[0]} ({len(missing)} missing)")
    if len(order) == 1:
        return Tour(tuple(order), 0.0)
    legs = []
    for a, b in zip(order, order[1:] + order[:1]):
        legs.append(shortest_paths(g, a)[0][b])
    return Tour(tuple(order), math.fsum(legs))


def _finish(g: Graph, tree: EdgeMultiset, join: EdgeMultiset, report: TourReport,
            watch: _Stopwatch, shortcut: bool) -> PipelineResult:
    multigraph = EdgeMultiset(tree)
    multigraph.update(join)
    with watch.stage("euler_tour"):
        if g.n == 1:
            walk = [0]
        else:
            walk = euler_tour(g, multigraph)
    report.walk_cost = multiset_cost(g, multigraph)
    if shortcut:
        with watch.stage("shortcut"):
            tour = shortcut_tour(g, walk)
    else:
        # The closed walk itself is reported as the tour.
        tour = Tour(tuple(walk[:-1]) if len(walk) > 1 else tuple(walk), report.walk_cost)
    report.shortcut_tour_cost = tour.cost
    if report.lp_lower_bound:
        report.ratio_to_lower_bound = tour.cost / report.lp_lower_bound
    report.stage_times = dict(watch.times)
    _check_common(report)
    return PipelineResult(tour, report, walk, multigraph)


def _leq(a: float, b: float) -> bool:
    return a <= b + REL_TOL * max(1.0, abs(b))


def _check_common(r: TourReport) -> None:
    problems = []
    if not math.isclose(r.walk_cost, r.mst_cost + r.join_cost, rel_tol=REL_TOL, abs_tol=1e-12):
        problems.append("walk_cost != mst_cost + join_cost")
    if not _leq(r.shortcut_tour_cost, r.walk_cost):
        problems.append("shortcut tour costs more than the walk")
    if problems:
        raise CheckFailure("; ".join(problems), {"report": r.to_dict()})


def apx_christofides(g: Graph, epsilon: float = DEFAULT_EPSILON, seed: int = DEFAULT_SEED, *,
                     d: float = 8.0, debug_verify: bool = False, shortcut: bool = True,
                     keep_multiplicities: bool = False) -> PipelineResult:
    """Christofides on a sparsified LP support.

    Steps: spanning tree and its odd vertices; approximate LP point;
    sparsified point; cheapest T-join inside the sparse support; Euler tour
    of tree plus join, shortcut. Every link of the cost chain is checked and
    a violation raises :class:`CheckFailure`.
    """
    g.require_connected()
    watch = _Stopwatch()
    report = TourReport(g.n, g.m, "sparsified-christofides", seed=seed, epsilon=epsilon)
    with watch.stage("mst"):
        tree = mst(g)
        terminals = odd_vertices(g, tree)
    report.mst_cost = multiset_cost(g, tree)

    with watch.stage("lp"):
        lp = solve_2ecss_lp(g, SolverParams(epsilon))
    report.lp_objective = lp.x.objective
    report.lp_lower_bound = lp.lower_bound
    report.lp_gap = lp.gap
    report.lp_iterations = lp.iterations
    report.lp_certified = lp.certified

    with watch.stage("sparsify"):
        sp = sparsify_solution(g, lp.x, SparsifyParams(epsilon, d, seed), debug_verify=debug_verify)
    support = sp.y.support()
    report.sparsifier = {
        "support_size": len(support),
        "lp_support_size": len(lp.x.support()),
        "attempts": sp.attempts,
        "single_shot_success": sp.single_shot_success,
        "y_cost": sp.y.objective,
        "expected_support": float(sp.probabilities.r.sum()),
    }

    with watch.stage("tjoin"):
        h, back = g.subgraph(support)
        joined = min_cost_tjoin(h, terminals, keep_multiplicities=keep_multiplicities)
        join = EdgeMultiset({back[e]: k for e, k in joined.edges.items()})
    report.join_cost = joined.cost

    result = _finish(g, tree, join, report, watch, shortcut)
    _check_sparsified_chain(report, epsilon, reduced_join=not keep_multiplicities)
    return result


def _check_sparsified_chain(r: TourReport, epsilon: float, reduced_join: bool = True) -> None:
    problems = []
    y_cost = r.sparsifier["y_cost"]
    if not _leq(r.mst_cost, r.lp_objective):
        problems.append("mst_cost > lp_objective")
    # An unreduced join may repeat edges, so only the reduced one obeys the half bound.
    if reduced_join and not _leq(r.join_cost, 0.5 * y_cost):
        problems.append("join_cost > y_cost / 2")
    if not _leq(y_cost, (1 + epsilon) * r.lp_objective):
        problems.append("y_cost > (1 + eps) * lp_objective")
    if not _leq(r.shortcut_tour_cost, 1.5 * (1 + epsilon) * (1 + r.lp_gap) * r.lp_lower_bound):
        problems.append("tour exceeds 1.5 (1 + eps) (1 + gap) lp_lower_bound")
    if r.ratio_to_lower_bound is not None and r.ratio_to_lower_bound < 1 - REL_TOL:
        problems.append("tour cheaper than the LP lower bound")
    if problems:
        raise CheckFailure("; ".join(problems), {"report": r.to_dict()})


def classic_christofides(g: Graph, *, shortcut: bool = True) -> PipelineResult:
    """Spanning tree plus an exact T-join over the whole graph, shortcut."""
    g.require_connected()
    watch = _Stopwatch()
    report = TourReport(g.n, g.m, "classic-christofides")
    with watch.stage("mst"):
        tree = mst(g)
    report.mst_cost = multiset_cost(g, tree)
    with watch.stage("tjoin"):
        joined = min_cost_tjoin(g, odd_vertices(g, tree))
    report.join_cost = joined.cost
    return _finish(g, tree, joined.edges, report, watch, shortcut)


def double_tree(g: Graph, *, shortcut: bool = True) -> PipelineResult:
    """Every spanning-tree edge twice, Euler tour, shortcut."""
    g.require_connected()
    watch = _Stopwatch()
    report = TourReport(g.n, g.m, "double-tree")
    with watch.stage("mst"):
        tree = mst(g)
    report.mst_cost = multiset_cost(g, tree)
    report.join_cost = report.mst_cost
    return _finish(g, tree, EdgeMultiset(tree), report, watch, shortcut)


def run_algorithm(g: Graph, algorithm: str, epsilon: float = DEFAULT_EPSILON,
                  seed: int = DEFAULT_SEED, **flags) -> PipelineResult:
    if algorithm == "sparsified-christofides":
        return apx_christofides(g, epsilon, seed, **flags)
    shortcut = flags.get("shortcut", True)
    if algorithm == "classic-christofides":
        return classic_christofides(g, shortcut=shortcut)
    if algorithm == "double-tree":
        return double_tree(g, shortcut=shortcut)
    raise PreconditionError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
