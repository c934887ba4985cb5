"""Exhaustive oracles for small instances: cut enumeration and Held-Karp."""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, PreconditionError
from .graph import FractionalSolution, Graph, metric_closure

MAX_CUT_ENUM_N = 24
MAX_HELD_KARP_N = 14
_CHUNK = 1 << 16


def _edge_weights(g: Graph, x) -> np.ndarray:
    if isinstance(x, FractionalSolution):
        return x.values
    w = np.asarray(x, dtype=float)
    if w.shape != (g.m,):
        raise PreconditionError(f"expected {g.m} edge weights, got shape {w.shape}")
    return w


def min_cut_by_enumeration(g: Graph, x) -> tuple[float, list[int]]:
    """Minimum cut value under weights ``x`` over all 2^(n-1)-1 cuts.

    The returned side never contains vertex ``n - 1``; ties go to the
    smallest bitmask.
    """
    n = g.n
    if n < 2:
        raise PreconditionError("cut enumeration needs at least 2 vertices")
    if n > MAX_CUT_ENUM_N:
        raise CapacityError(f"n={n} exceeds exhaustive cut limit {MAX_CUT_ENUM_N}; use mincut")
    w = _edge_weights(g, x)
    us = np.array([u for u, _, _ in g.edges], dtype=np.int64)
    vs = np.array([v for _, v, _ in g.edges], dtype=np.int64)
    total = 1 << (n - 1)
    best_val = np.inf
    best_mask = 0
    for lo in range(1, total, _CHUNK):
        masks = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
        vals = np.zeros(len(masks))
        for e in range(g.m):
            if w[e] == 0:
                continue
            crossing = ((masks >> us[e]) ^ (masks >> vs[e])) & 1
            vals += w[e] * crossing
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_mask = int(masks[i])
    side = [v for v in range(n) if best_mask >> v & 1]
    return best_val, side


def enumerate_cut_violations(g: Graph, x, threshold: float = 2.0):
    """Worst cut under ``x`` and whether every cut meets ``threshold``.

    Returns ``(value, side, feasible)`` where ``feasible`` allows an absolute
    slack of 1e-9.
    """
    value, side = min_cut_by_enumeration(g, x)
    return value, side, value >= threshold - 1e-9


def held_karp_opt(g: Graph) -> float:
    """Optimal tour cost in the shortest-path metric of ``g`` (bitmask DP)."""
    n = g.n
    if n > MAX_HELD_KARP_N:
        raise CapacityError(f"n={n} exceeds Held-Karp limit {MAX_HELD_KARP_N}")
    g.require_connected()
    if n <= 1:
        return 0.0
    d = metric_closure(g)
    if n == 2:
        return float(2 * d[0, 1])
    # Tours start at vertex n-1; masks range over the other k = n-1 vertices.
    k = n - 1
    full = 1 << k
    dp = np.full((full, k), np.inf)
    for j in range(k):
        dp[1 << j, j] = d[n - 1, j]
    inner = d[:k, :k]
    bits = 1 << np.arange(k)
    for mask in range(1, full):
        row = dp[mask]
        if not np.isfinite(row).any():
            continue
        # best[j] = min_i dp[mask, i] + d[i, j]
        best = np.min(row[:, None] + inner, axis=0)
        for j in np.flatnonzero((mask & bits) == 0):
            nm = mask | (1 << j)
            if best[j] < dp[nm, j]:
                dp[nm, j] = best[j]
    return float(np.min(dp[full - 1] + d[:k, n - 1]))
