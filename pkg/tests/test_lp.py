import math

import numpy as np
import pytest

from tspkit.errors import InfeasibleError, PreconditionError
from tspkit.generators import random_connected_graph
from tspkit.graph import Graph, build_graph
from tspkit.lp import SolverParams, certify_lower_bound, solve_2ecss_lp
from tspkit.mincut import WeightedView, global_min_cut
from tspkit.oracles import held_karp_opt

from bruteforce import exact_2ecss_lp

EPS = 0.1
TOL = 1e-9


def unit_cycle(n):
    return build_graph([(i, (i + 1) % n, 1) for i in range(n)])


@pytest.mark.parametrize("n", range(4, 13))
def test_unit_cycle_is_analytically_pinned(n):
    res = solve_2ecss_lp(unit_cycle(n), SolverParams(EPS))
    assert n * (1 - TOL) <= res.x.objective <= (1 + EPS) * n * (1 + TOL)
    assert n / (1 + EPS) * (1 - TOL) <= res.lower_bound <= n * (1 + TOL)
    assert res.certified and res.gap <= EPS


def test_unit_k4():
    g = build_graph([(i, j, 1) for i in range(4) for j in range(i + 1, 4)])
    res = solve_2ecss_lp(g, SolverParams(EPS))
    assert 4 * (1 - TOL) <= res.x.objective <= 4 * (1 + EPS) * (1 + TOL)


def test_parallel_edges_prefer_the_cheap_one():
    g = build_graph([(0, 1, 1), (0, 1, 5)])
    res = solve_2ecss_lp(g, SolverParams(EPS))
    assert 2 * (1 - TOL) <= res.x.objective <= 2 * (1 + EPS) * (1 + TOL)
    assert res.lower_bound <= 2 * (1 + TOL)


def test_zero_iterations_certify_nothing():
    g = unit_cycle(5)
    res = solve_2ecss_lp(g, SolverParams(EPS, max_iterations=0))
    assert res.lower_bound == 0 and not res.certified
    assert global_min_cut(WeightedView.of(g, res.x.values))[0] >= 2 - 2e-9
    assert certify_lower_bound(g, {}) == 0


def test_converged_cycle_certificate():
    g = unit_cycle(5)
    res = solve_2ecss_lp(g, SolverParams(EPS))
    assert certify_lower_bound(g, res.packing) == pytest.approx(res.lower_bound, rel=1e-12)
    assert res.lower_bound >= 5 / (1 + EPS) * (1 - TOL)


def test_certificate_of_hand_packing():
    # The five singleton cuts of C5, half a unit each, are dual feasible.
    g = unit_cycle(5)
    packing = {frozenset([v]): 0.5 for v in range(5)}
    assert certify_lower_bound(g, packing) == 5
    # Overpacking is scaled back down to feasibility.
    assert certify_lower_bound(g, {k: 2 * a for k, a in packing.items()}) == 5


def test_disconnected_is_infeasible():
    with pytest.raises(InfeasibleError):
        solve_2ecss_lp(build_graph([(0, 1, 1), (2, 3, 1)]))


def test_epsilon_domain():
    with pytest.raises(PreconditionError):
        SolverParams(0)
    with pytest.raises(PreconditionError):
        SolverParams(1.0)


def test_zero_cost_edges_fixed_at_two():
    g = build_graph([(0, 1, 0), (1, 2, 3), (2, 0, 4), (2, 3, 1), (3, 0, 2)])
    res = solve_2ecss_lp(g, SolverParams(EPS))
    assert res.x.values[0] == 2
    assert global_min_cut(WeightedView.of(g, res.x.values))[0] >= 2 - 2e-9
    exact = float(exact_2ecss_lp(g.n, list(g.edges)))
    assert res.lower_bound <= exact * (1 + TOL) and exact <= res.x.objective * (1 + TOL)


def test_all_zero_costs():
    g = build_graph([(0, 1, 0), (1, 2, 0)])
    res = solve_2ecss_lp(g)
    assert res.x.objective == 0 and res.certified


def test_single_vertex():
    res = solve_2ecss_lp(Graph(1, []))
    assert res.x.objective == 0


@pytest.mark.parametrize("seed", range(12))
def test_sandwich_against_exact_lp(seed):
    g = random_connected_graph(9, 18, 1000 + seed)
    res = solve_2ecss_lp(g, SolverParams(EPS))
    exact = float(exact_2ecss_lp(g.n, list(g.edges)))
    assert res.lower_bound <= exact * (1 + TOL)
    assert exact <= res.x.objective * (1 + TOL)
    assert res.x.objective <= (1 + EPS) * exact * (1 + TOL)
    assert global_min_cut(WeightedView.of(g, res.x.values))[0] >= 2 - 2e-9


@pytest.mark.parametrize("seed", range(6))
def test_scale_covariance(seed):
    g = random_connected_graph(10, 22, seed)
    base = solve_2ecss_lp(g, SolverParams(0.25))
    big = solve_2ecss_lp(g.scaled(10), SolverParams(0.25))
    assert big.x.objective == pytest.approx(10 * base.x.objective, rel=1e-12)
    assert big.lower_bound == pytest.approx(10 * base.lower_bound, rel=1e-12)
    assert np.array_equal(big.x.values, base.x.values)


@pytest.mark.parametrize("seed", range(6))
def test_lower_bound_below_optimal_tour(seed):
    g = random_connected_graph(11, 20, 50 + seed)
    res = solve_2ecss_lp(g, SolverParams(0.25))
    assert res.lower_bound <= held_karp_opt(g) * (1 + TOL)


def test_iteration_cap_reports_honest_gap():
    g = random_connected_graph(9, 18, 3)
    res = solve_2ecss_lp(g, SolverParams(0.05, max_iterations=20))
    assert res.iterations == 20
    assert not res.certified
    assert res.gap == pytest.approx(res.x.objective / res.lower_bound - 1)
    assert math.isfinite(res.gap) and res.gap > 0.05
