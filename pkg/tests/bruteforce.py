"""Independent brute-force oracles used only by the test suite.

Nothing here imports the algorithms it is used to check.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, *_ in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(n)})


def brute_mst_cost(n, edges):
    """Minimum over all (n-1)-edge subsets that form a spanning tree."""
    best = math.inf
    for subset in itertools.combinations(range(len(edges)), n - 1):
        chosen = [edges[i] for i in subset]
        if components(n, chosen) == 1:
            best = min(best, sum(c for _, _, c in chosen))
    return best


def bellman_ford(n, edges, source):
    dist = [math.inf] * n
    dist[source] = 0.0
    for _ in range(n - 1):
        changed = False
        for u, v, c in edges:
            for a, b in ((u, v), (v, u)):
                if dist[a] + c < dist[b]:
                    dist[b] = dist[a] + c
                    changed = True
        if not changed:
            break
    return dist


def floyd(n, edges):
    d = [[0.0 if i == j else math.inf for j in range(n)] for i in range(n)]
    for u, v, c in edges:
        d[u][v] = min(d[u][v], c)
        d[v][u] = min(d[v][u], c)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def brute_tsp(n, edges):
    """Minimum Hamiltonian cycle in the metric completion, by permutations."""
    if n == 1:
        return 0.0
    d = floyd(n, edges)
    if n == 2:
        return 2 * d[0][1]
    best = math.inf
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        tour = (0,) + perm
        best = min(best, sum(d[tour[i]][tour[(i + 1) % n]] for i in range(n)))
    return best


def all_cuts(n):
    """Every side S with vertex n-1 outside and S nonempty."""
    for mask in range(1, 1 << (n - 1)):
        yield [v for v in range(n) if mask >> v & 1]


def cut_value(edges, weights, side):
    s = set(side)
    return sum(w for (u, v, *_), w in zip(edges, weights) if (u in s) != (v in s))


def brute_min_cut(n, edges, weights):
    return min(cut_value(edges, weights, side) for side in all_cuts(n))


def brute_strengths(n, edges, weights):
    """Largest min cut over vertex-induced subgraphs containing each edge."""
    induced_cut = {}
    for size in range(2, n + 1):
        for subset in itertools.combinations(range(n), size):
            idx = {v: i for i, v in enumerate(subset)}
            sub_e, sub_w = [], []
            for (u, v, *_), w in zip(edges, weights):
                if u in idx and v in idx:
                    sub_e.append((idx[u], idx[v]))
                    sub_w.append(w)
            induced_cut[subset] = brute_min_cut(size, sub_e, sub_w)
    out = []
    for u, v, *_ in edges:
        out.append(max(val for subset, val in induced_cut.items()
                       if u in subset and v in subset))
    return out, induced_cut


def brute_matching(k, cost):
    """Minimum perfect matching over all (k-1)!! pairings."""
    best = math.inf

    def rec(rem, acc):
        nonlocal best
        if not rem:
            best = min(best, acc)
            return
        a = rem[0]
        for b in rem[1:]:
            rec([x for x in rem if x != a and x != b], acc + cost[(a, b)])

    rec(list(range(k)), 0.0)
    return best


def brute_tjoin(n, edges, terminals):
    """Cheapest edge subset whose odd-degree set is exactly ``terminals``."""
    target = set(terminals)
    best = math.inf
    m = len(edges)
    for mask in range(1 << m):
        deg = [0] * n
        cost = 0.0
        for e in range(m):
            if mask >> e & 1:
                u, v, c = edges[e]
                deg[u] ^= 1
                deg[v] ^= 1
                cost += c
        if cost < best and {v for v in range(n) if deg[v]} == target:
            best = cost
    return best


def exact_2ecss_lp(n, edges):
    """Exact optimum of the 2ECSS LP with integer or rational costs.

    Solves the cut-packing dual ``max 2 sum y_S, sum_{S cuts e} y_S <= c_e``
    by a dense rational simplex with Bland's rule; by LP duality its value
    equals the covering optimum.
    """
    m = len(edges)
    cuts = list(all_cuts(n))
    cols = []
    for side in cuts:
        s = set(side)
        cols.append([1 if (u in s) != (v in s) else 0 for u, v, _ in edges])
    ncut = len(cuts)
    width = ncut + m
    # Rows: A^T y + slack = c.
    rows = []
    for e in range(m):
        row = [Fraction(cols[j][e]) for j in range(ncut)]
        row += [Fraction(1 if i == e else 0) for i in range(m)]
        rows.append(row)
    rhs = [Fraction(edges[e][2]) for e in range(m)]
    basis = [ncut + e for e in range(m)]
    obj = [Fraction(2)] * ncut + [Fraction(0)] * m
    while True:
        # Reduced costs for a maximisation: obj_j - c_B B^-1 a_j.
        cb = [obj[b] for b in basis]
        entering = -1
        for j in range(width):
            if j in basis:
                continue
            red = obj[j] - sum(cb[i] * rows[i][j] for i in range(m) if rows[i][j])
            if red > 0:
                entering = j
                break
        if entering == -1:
            return sum(cb[i] * rhs[i] for i in range(m))
        leave = -1
        best_ratio = None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])):
                    best_ratio, leave = ratio, i
        if leave == -1:
            raise ArithmeticError("unbounded dual: primal infeasible")
        piv = rows[leave][entering]
        rows[leave] = [a / piv for a in rows[leave]]
        rhs[leave] /= piv
        for i in range(m):
            f = rows[i][entering]
            if i != leave and f:
                pr = rows[leave]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
                rhs[i] -= f * rhs[leave]
        basis[leave] = entering
