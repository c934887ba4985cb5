"""Undirected weighted multigraphs and the basic algorithms built on them.

Edge ids are assigned in input order and every tie in this module is broken
by edge id, so repeated runs produce identical output.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import IngestionError, InfeasibleError, PreconditionError

EdgeMultiset = Counter  # edge id -> multiplicity


class Graph:
    """Immutable undirected multigraph on vertices ``0..n-1``.

    Parallel edges are allowed and keep distinct ids; self-loops are not.
    """

    __slots__ = ("n", "edges", "_adj", "_costs")

    def __init__(self, n: int, edges: Sequence[tuple[int, int, float]]):
        self.n = int(n)
        self.edges: tuple[tuple[int, int, float], ...] = tuple(
            (int(u), int(v), float(c)) for u, v, c in edges)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, (u, v, _c) in enumerate(self.edges):
            adj[u].append((e, v))
            adj[v].append((e, u))
        self._adj = tuple(tuple(a) for a in adj)
        self._costs = np.array([c for _, _, c in self.edges], dtype=float)
        self._costs.flags.writeable = False

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def costs(self) -> np.ndarray:
        """Read-only cost vector indexed by edge id."""
        return self._costs

    def adjacency(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(edge id, neighbour)`` pairs at ``v`` in increasing edge id."""
        return self._adj[v]

    def endpoints(self, e: int) -> tuple[int, int]:
        u, v, _ = self.edges[e]
        return u, v

    def cost(self, e: int) -> float:
        return self.edges[e][2]

    def scaled(self, factor: float) -> "Graph":
        return Graph(self.n, [(u, v, c * factor) for u, v, c in self.edges])

    def subgraph(self, edge_ids: Iterable[int]) -> tuple["Graph", list[int]]:
        """Spanning subgraph on the given edges.

        Returns the subgraph and the list mapping its edge ids back to ours.
        """
        ids = sorted(set(edge_ids))
        return Graph(self.n, [self.edges[e] for e in ids]), ids

    def components(self, edge_ids: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        uf = UnionFind(self.n)
        for e in (range(self.m) if edge_ids is None else edge_ids):
            u, v, _ = self.edges[e]
            uf.union(u, v)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(uf.find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def require_connected(self) -> None:
        comps = self.components()
        if len(comps) > 1:
            raise InfeasibleError(
                f"graph is disconnected: {len(comps)} components, e.g. "
                f"{_preview(comps[0])} and {_preview(comps[1])}",
                components=comps)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _preview(vertices: list[int], limit: int = 6) -> str:
    body = ", ".join(map(str, vertices[:limit]))
    return "{" + body + (", ...}" if len(vertices) > limit else "}")


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


@dataclass(frozen=True)
class FractionalSolution:
    """Nonnegative value per edge id, with its cost under the parent graph."""

    values: np.ndarray
    objective: float

    @classmethod
    def from_values(cls, g: Graph, values) -> "FractionalSolution":
        arr = np.asarray(values, dtype=float)
        if arr.shape != (g.m,):
            raise PreconditionError(f"expected {g.m} edge values, got shape {arr.shape}")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise PreconditionError("edge values must be finite and nonnegative")
        arr = arr.copy()
        arr.flags.writeable = False
        return cls(arr, float(np.dot(g.costs, arr)))

    def support(self) -> list[int]:
        return [int(e) for e in np.flatnonzero(self.values > 0)]


@dataclass(frozen=True)
class Tour:
    """Closed Hamiltonian tour in the shortest-path metric of a graph."""

    vertices: tuple[int, ...]
    cost: float


def build_graph(records: Iterable[Sequence], n: int | None = None) -> Graph:
    """Validate ``(u, v, cost)`` records and build a :class:`Graph`.

    ``n`` defaults to one more than the largest vertex id. Errors name the
    1-based position of the offending record.
    """
    edges = []
    for line, rec in enumerate(records, start=1):
        try:
            u, v, c = rec
            u_i, v_i, cost = int(u), int(v), float(c)
        except (TypeError, ValueError) as exc:
            raise IngestionError(f"malformed edge record {rec!r}", line) from exc
        if u_i != u or v_i != v:
            raise IngestionError(f"vertex ids must be integers, got {rec!r}", line)
        if u_i < 0 or v_i < 0 or (n is not None and max(u_i, v_i) >= n):
            raise IngestionError(f"vertex id out of range in {rec!r}", line)
        if u_i == v_i:
            raise IngestionError(f"self-loop at vertex {u_i}", line)
        if not math.isfinite(cost) or cost < 0:
            raise IngestionError(f"cost must be finite and nonnegative, got {c!r}", line)
        edges.append((u_i, v_i, cost))
    if n is None:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return Graph(n, edges)


def mst(g: Graph) -> EdgeMultiset:
    """Kruskal's minimum spanning tree, ties broken by edge id."""
    g.require_connected()
    uf = UnionFind(g.n)
    tree = EdgeMultiset()
    for e in sorted(range(g.m), key=lambda e: (g.edges[e][2], e)):
        u, v, _ = g.edges[e]
        if uf.union(u, v):
            tree[e] = 1
            if len(tree) == g.n - 1:
                break
    return tree


def multiset_cost(g: Graph, es: EdgeMultiset) -> float:
    return math.fsum(g.cost(e) * k for e, k in sorted(es.items()))


def odd_vertices(g: Graph, es: EdgeMultiset) -> list[int]:
    """Vertices of odd degree in the sub-multigraph ``es``."""
    deg = [0] * g.n
    for e, k in es.items():
        u, v, _ = g.edges[e]
        deg[u] += k
        deg[v] += k
    return [v for v in range(g.n) if deg[v] % 2]


def shortest_paths(g: Graph, source: int) -> tuple[list[float], list[int]]:
    """Dijkstra from ``source``.

    Returns ``(dist, parent_edge)``: unreachable vertices have ``inf`` and
    parent ``-1``; the source has parent ``-1`` as well.
    """
    dist = [math.inf] * g.n
    parent = [-1] * g.n
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = [False] * g.n
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e, w in g.adjacency(u):
            nd = d + g.edges[e][2]
            if nd < dist[w]:
                dist[w] = nd
                parent[w] = e
                heapq.heappush(heap, (nd, w))
    return dist, parent


def path_edges(g: Graph, parent: list[int], source: int, target: int) -> list[int]:
    """Edge ids along the shortest-path tree from ``source`` to ``target``."""
    path = []
    v = target
    while v != source:
        e = parent[v]
        if e < 0:
            raise InfeasibleError(f"vertex {target} unreachable from {source}")
        path.append(e)
        a, b = g.endpoints(e)
        v = a if b == v else b
    path.reverse()
    return path


def metric_closure(g: Graph) -> np.ndarray:
    """All-pairs shortest-path distance matrix (``inf`` where unreachable)."""
    return np.array([shortest_paths(g, s)[0] for s in range(g.n)], dtype=float)


def euler_tour(g: Graph, es: EdgeMultiset) -> list[int]:
    """Closed walk using every edge of ``es`` exactly its multiplicity.

    Hierholzer's algorithm; the walk starts at the smallest non-isolated
    vertex and repeats it at the end. An empty multiset gives ``[]``.
    """
    for e, k in es.items():
        if not 0 <= e < g.m:
            raise PreconditionError(f"edge id {e} not in graph")
        if k < 1:
            raise PreconditionError(f"edge {e} has multiplicity {k}")
    odd = odd_vertices(g, es)
    if odd:
        raise PreconditionError(
            f"vertex {odd[0]} has odd degree in the multigraph ({len(odd)} odd vertices)")
    if not es:
        return []
    comps = [c for c in g.components(es.keys()) if len(c) > 1]
    if len(comps) > 1:
        raise PreconditionError(
            f"multigraph support is disconnected: components {_preview(comps[0])} "
            f"and {_preview(comps[1])}")

    remaining = dict(es)
    # Per-vertex incident edge ids in adjacency order; pointer skips used ones.
    incident = [[e for e, _ in g.adjacency(v) if e in remaining] for v in range(g.n)]
    ptr = [0] * g.n
    start = comps[0][0]
    stack = [start]
    walk = []
    while stack:
        v = stack[-1]
        inc = incident[v]
        while ptr[v] < len(inc) and remaining[inc[ptr[v]]] == 0:
            ptr[v] += 1
        if ptr[v] == len(inc):
            walk.append(stack.pop())
            continue
        e = inc[ptr[v]]
        remaining[e] -= 1
        a, b = g.endpoints(e)
        stack.append(b if a == v else a)
    walk.reverse()
    return walk


def walk_edges(g: Graph, walk: Sequence[int], es: EdgeMultiset) -> EdgeMultiset:
    """Recover the edge multiset traversed by ``walk`` drawing from ``es``.

    Consecutive vertices may be joined by parallel edges; the smallest
    unused id in ``es`` is charged first.
    """
    avail = Counter(es)
    used = EdgeMultiset()
    for a, b in zip(walk, walk[1:]):
        for e, w in g.adjacency(a):
            if w == b and avail[e] > 0:
                avail[e] -= 1
                used[e] += 1
                break
        else:
            raise PreconditionError(f"walk step {a}->{b} has no unused edge")
    return used
