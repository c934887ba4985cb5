import random

import numpy as np
import pytest

from tspkit.errors import CapacityError
from tspkit.generators import random_connected_graph
from tspkit.graph import build_graph, mst, multiset_cost
from tspkit.mincut import WeightedView, global_min_cut
from tspkit.oracles import enumerate_cut_violations, held_karp_opt

from bruteforce import brute_min_cut, brute_tsp


def c4():
    return build_graph([(i, (i + 1) % 4, 1) for i in range(4)])


def test_c4_feasible_at_two():
    value, side, ok = enumerate_cut_violations(c4(), np.ones(4), 2)
    assert value == 2 and ok
    assert 0 < len(side) < 4


def test_c4_half_edge_violates():
    value, side, ok = enumerate_cut_violations(c4(), [1, 1, 0.5, 1], 2)
    assert value == 1.5 and not ok
    inside = set(side)
    assert (2 in inside) != (3 in inside)


@pytest.mark.parametrize("seed", range(6))
def test_enumeration_agrees_with_stoer_wagner(seed):
    g = random_connected_graph(10, 20, seed, parallel=True)
    w = np.random.default_rng(seed).uniform(0, 3, g.m)
    value, side, _ = enumerate_cut_violations(g, w)
    assert value == pytest.approx(global_min_cut(WeightedView.of(g, w))[0], rel=1e-12)
    assert value == pytest.approx(brute_min_cut(g.n, g.edges, w), rel=1e-12)


def test_enumeration_capacity():
    g = build_graph([(i, i + 1, 1) for i in range(25)])
    with pytest.raises(CapacityError):
        enumerate_cut_violations(g, np.ones(g.m))


def test_held_karp_unit_cycle():
    assert held_karp_opt(build_graph([(i, (i + 1) % 5, 1) for i in range(5)])) == 5


def test_held_karp_path_must_return():
    assert held_karp_opt(build_graph([(0, 1, 1), (1, 2, 1)])) == 4


def test_held_karp_two_vertices():
    assert held_karp_opt(build_graph([(0, 1, 3)])) == 6


@pytest.mark.parametrize("seed", range(6))
def test_held_karp_matches_permutations(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    g = random_connected_graph(n, rng.randint(n - 1, 2 * n), seed)
    assert held_karp_opt(g) == pytest.approx(brute_tsp(g.n, list(g.edges)))


def test_held_karp_capacity():
    with pytest.raises(CapacityError):
        held_karp_opt(build_graph([(i, i + 1, 1) for i in range(14)]))


@pytest.mark.parametrize("seed", range(15))
def test_mst_at_most_one_minus_one_over_n_of_opt(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 12)
    g = random_connected_graph(n, rng.randint(n, 3 * n), seed)
    assert multiset_cost(g, mst(g)) <= (1 - 1 / n) * held_karp_opt(g) + 1e-9
