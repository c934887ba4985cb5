"""Seeded random instances for tests and the benchmark harness."""

from __future__ import annotations

import random

from .graph import Graph


def random_connected_graph(n: int, m: int, seed: int, *, max_cost: int = 20,
                           parallel: bool = False) -> Graph:
    """Random spanning tree plus ``m - (n - 1)`` extra edges, integer costs.

    Without ``parallel`` each vertex pair appears at most once and ``m`` is
    capped at ``n (n - 1) / 2``.
    """
    rng = random.Random(seed)
    if not parallel:
        m = min(m, n * (n - 1) // 2)
    m = max(m, n - 1)
    order = list(range(n))
    rng.shuffle(order)
    edges = []
    pairs = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.append((u, v, rng.randint(1, max_cost)))
        pairs.add((min(u, v), max(u, v)))
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        key = (min(u, v), max(u, v))
        if not parallel and key in pairs:
            continue
        pairs.add(key)
        edges.append((u, v, rng.randint(1, max_cost)))
    return Graph(n, edges)


def random_euclidean_points(n: int, seed: int, side: float = 100.0) -> list[tuple[float, float]]:
    rng = random.Random(seed)
    return [(round(rng.uniform(0, side), 3), round(rng.uniform(0, side), 3)) for _ in range(n)]
