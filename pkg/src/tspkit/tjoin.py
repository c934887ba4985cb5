"""Minimum-cost T-joins through shortest paths and perfect matching."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import CheckFailure, InfeasibleError, PreconditionError
from .graph import EdgeMultiset, Graph, odd_vertices, path_edges, shortest_paths
from .matching import MatchingInstance, min_cost_perfect_matching


@dataclass(frozen=True)
class JoinResult:
    edges: EdgeMultiset
    cost: float


def min_cost_tjoin(h: Graph, terminals: Iterable[int], *,
                   keep_multiplicities: bool = False) -> JoinResult:
    """Cheapest edge set of ``h`` whose odd-degree vertices are exactly ``terminals``.

    Matches the terminals by shortest-path distance, expands each matched
    pair into its path and cancels edges used an even number of times.
    With ``keep_multiplicities`` the raw path union is returned instead; it
    has the same parity but may cost more.
    """
    T = sorted(set(terminals))
    if len(T) % 2:
        raise InfeasibleError(f"T-join needs an even terminal set, got |T|={len(T)}")
    for t in T:
        if not 0 <= t < h.n:
            raise PreconditionError(f"terminal {t} not a vertex")
    if any(c < 0 for _, _, c in h.edges):
        raise PreconditionError("T-join requires nonnegative costs")
    if not T:
        return JoinResult(EdgeMultiset(), 0.0)

    dist: dict[int, list[float]] = {}
    parent: dict[int, list[int]] = {}
    for t in T:
        dist[t], parent[t] = shortest_paths(h, t)
    unreachable = [t for t in T[1:] if math.isinf(dist[T[0]][t])]
    if unreachable:
        raise InfeasibleError(
            f"terminals {T[0]} and {unreachable[0]} lie in different components",
            components=h.components())

    k = len(T)
    inst = MatchingInstance(k, {(i, j): dist[T[i]][T[j]]
                                for i in range(k) for j in range(i + 1, k)})
    matching = min_cost_perfect_matching(inst)

    raw = EdgeMultiset()
    for i, j in matching.pairs:
        for e in path_edges(h, parent[T[i]], T[i], T[j]):
            raw[e] += 1
    if keep_multiplicities:
        edges = raw
    else:
        edges = EdgeMultiset({e: 1 for e, c in raw.items() if c % 2})
    cost = math.fsum(h.cost(e) * c for e, c in sorted(edges.items()))
    if odd_vertices(h, edges) != T:
        raise CheckFailure("T-join parity mismatch", {"terminals": T})
    return JoinResult(edges, cost)
