"""Global minimum cuts and exact edge strengths of a weighted graph.

Weights are an arbitrary nonnegative vector over the edges of a base graph;
in the pipeline they are LP values, not costs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, PreconditionError
from .graph import Graph


@dataclass(frozen=True)
class WeightedView:
    base: Graph
    weights: np.ndarray

    @classmethod
    def of(cls, g: Graph, weights) -> "WeightedView":
        w = np.asarray(getattr(weights, "values", weights), dtype=float)
        if w.shape != (g.m,):
            raise PreconditionError(f"expected {g.m} weights, got shape {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise PreconditionError("weights must be finite and nonnegative")
        return cls(g, w)


def weight_matrix(g: Graph, weights: np.ndarray) -> np.ndarray:
    """Dense symmetric matrix summing the weights of parallel edges."""
    a = np.zeros((g.n, g.n))
    us = np.array([u for u, _, _ in g.edges], dtype=np.intp)
    vs = np.array([v for _, v, _ in g.edges], dtype=np.intp)
    np.add.at(a, (us, vs), weights)
    np.add.at(a, (vs, us), weights)
    return a


def stoer_wagner(a: np.ndarray) -> tuple[float, list[int]]:
    """Minimum cut of the dense weighted graph ``a``.

    Returns the value and the side containing the last vertex merged in the
    best phase, as indices into ``a``. Ties pick the earliest phase and the
    lowest index, so the result is a pure function of ``a``.
    """
    n = a.shape[0]
    if n < 2:
        raise PreconditionError("minimum cut needs at least 2 vertices")
    w = a.astype(float, copy=True)
    np.fill_diagonal(w, 0.0)
    groups = [[v] for v in range(n)]
    active = list(range(n))
    best_val = np.inf
    best_side: list[int] = []
    while len(active) > 1:
        idx = np.array(active)
        sub = w[np.ix_(idx, idx)]
        conn = sub[0].copy()
        used = np.zeros(len(idx), dtype=bool)
        used[0] = True
        prev = 0
        last = 0
        for _ in range(len(idx) - 1):
            cand = np.where(used, -np.inf, conn)
            last_pos = int(np.argmax(cand))
            prev, last = last, last_pos
            used[last_pos] = True
            conn += sub[last_pos]
        # ``conn`` includes the self-term of ``last`` which is zero.
        cut_val = float(cand[last])
        s, t = active[prev], active[last]
        if cut_val < best_val:
            best_val = cut_val
            best_side = sorted(groups[t])
        groups[s].extend(groups[t])
        w[s, :] += w[t, :]
        w[:, s] += w[:, t]
        w[s, s] = 0.0
        active.remove(t)
    return best_val, best_side


def global_min_cut(wv: WeightedView) -> tuple[float, list[int]]:
    """Exact global minimum cut of ``(base, weights)``.

    A graph disconnected by zero-weight edges yields value 0 and one of its
    components as the side.
    """
    g = wv.base
    if g.n < 2:
        raise PreconditionError("minimum cut needs at least 2 vertices")
    return stoer_wagner(weight_matrix(g, wv.weights))


def exact_strengths(wv: WeightedView) -> np.ndarray:
    """Strength of every edge: the largest min-cut value of a vertex-induced
    subgraph containing both its endpoints.

    Recursively splits the vertex set along a minimum cut of the induced
    subgraph; an edge's strength is the largest cut value seen at a node of
    the recursion containing both endpoints.
    """
    g = wv.base
    if g.n >= 2:
        g.require_connected()
    a = weight_matrix(g, wv.weights)
    node_strength = _strength_tree(a)
    s = np.empty(g.m)
    for e, (u, v, _) in enumerate(g.edges):
        s[e] = node_strength(u, v)
    return s


def _strength_tree(a: np.ndarray):
    n = a.shape[0]
    # best[u][v]: largest induced min-cut value over recursion nodes holding u, v.
    best = np.full((n, n), -np.inf)
    stack = [list(range(n))]
    while stack:
        verts = stack.pop()
        if len(verts) < 2:
            continue
        idx = np.array(verts)
        lam, side_local = stoer_wagner(a[np.ix_(idx, idx)])
        block = np.ix_(idx, idx)
        best[block] = np.maximum(best[block], lam)
        side = set(verts[i] for i in side_local)
        stack.append([v for v in verts if v in side])
        stack.append([v for v in verts if v not in side])

    def lookup(u: int, v: int) -> float:
        return float(best[u, v])

    return lookup


def strength_sum(wv: WeightedView, strengths: np.ndarray) -> float:
    """Sum of weight / strength, skipping zero-weight edges."""
    w = wv.weights
    mask = w > 0
    if np.any(strengths[mask] <= 0):
        raise InfeasibleError("positive-weight edge with zero strength")
    return float(np.sum(w[mask] / strengths[mask]))
