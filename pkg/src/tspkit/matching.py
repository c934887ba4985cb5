"""Exact minimum-cost perfect matching on general graphs.

The engine is Edmonds' weighted blossom algorithm in the O(k^3) primal-dual
form: it computes a maximum-weight maximum-cardinality matching, and a
minimum-cost perfect matching is obtained by maximizing ``cmax - cost``.
The final duals are kept so optimality can be audited independently via
complementary slackness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import CheckFailure, InfeasibleError, PreconditionError

AUDIT_TOL = 1e-7


@dataclass(frozen=True)
class MatchingInstance:
    """``k`` vertices with costs on unordered pairs ``(i, j)``, ``i < j``."""

    k: int
    costs: Mapping[tuple[int, int], float]

    @classmethod
    def dense(cls, matrix) -> "MatchingInstance":
        k = len(matrix)
        return cls(k, {(i, j): float(matrix[i][j]) for i in range(k) for j in range(i + 1, k)})


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    cost: float


@dataclass
class BlossomState:
    """Final primal/dual state of a blossom run, in max-weight form.

    ``vertex_dual`` and ``blossom_dual`` are stored doubled, as in the
    algorithm, so integer weights keep integral duals.
    """

    edges: list[tuple[int, int, float]]
    mate: list[int]
    vertex_dual: list[float]
    blossom_dual: dict[int, float] = field(default_factory=dict)
    blossom_leaves: dict[int, frozenset[int]] = field(default_factory=dict)


def max_weight_matching(edges: list[tuple[int, int, float]],
                        maxcardinality: bool = False) -> BlossomState:
    """Maximum-weight matching of the graph given by ``(i, j, w)`` triples.

    With ``maxcardinality`` the weight is maximized among matchings of
    maximum cardinality. At most one edge per vertex pair; no self-loops.
    """
    if not edges:
        return BlossomState([], [], [])
    nvertex = 1 + max(max(i, j) for i, j, _ in edges)
    nedge = len(edges)
    maxweight = max(0, max(w for _, _, w in edges))

    # Endpoint p of edge k = p // 2 is endpoint[p]; its partner is p ^ 1.
    endpoint = [edges[p // 2][p % 2] for p in range(2 * nedge)]
    neighbend: list[list[int]] = [[] for _ in range(nvertex)]
    for k, (i, j, _w) in enumerate(edges):
        neighbend[i].append(2 * k + 1)
        neighbend[j].append(2 * k)

    mate = [-1] * nvertex
    # Labels of top-level blossoms: 0 free, 1 S-vertex, 2 T-vertex; bit 4 marks
    # a blossom visited during scan_blossom.
    label = [0] * (2 * nvertex)
    labelend = [-1] * (2 * nvertex)
    inblossom = list(range(nvertex))
    blossomparent = [-1] * (2 * nvertex)
    blossomchilds: list = [None] * (2 * nvertex)
    blossombase = list(range(nvertex)) + [-1] * nvertex
    blossomendps: list = [None] * (2 * nvertex)
    bestedge = [-1] * (2 * nvertex)
    blossombestedges: list = [None] * (2 * nvertex)
    unusedblossoms = list(range(nvertex, 2 * nvertex))
    dualvar = [maxweight] * nvertex + [0] * nvertex
    allowedge = [False] * nedge
    queue: list[int] = []

    def slack(k):
        i, j, wt = edges[k]
        return dualvar[i] + dualvar[j] - 2 * wt

    def blossom_leaves(b):
        if b < nvertex:
            yield b
            return
        stack = [b]
        while stack:
            t = stack.pop()
            if t < nvertex:
                yield t
            else:
                stack.extend(reversed(blossomchilds[t]))

    def assign_label(w, t, p):
        while True:
            b = inblossom[w]
            label[w] = label[b] = t
            labelend[w] = labelend[b] = p
            bestedge[w] = bestedge[b] = -1
            if t == 1:
                queue.extend(blossom_leaves(b))
                return
            base = blossombase[b]
            w, t, p = endpoint[mate[base]], 1, mate[base] ^ 1

    def scan_blossom(v, w):
        # Trace back from v and w to find a common ancestor (new blossom base)
        # or two distinct roots (augmenting path).
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = blossombase[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(base, k):
        v, w, _wt = edges[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = unusedblossoms.pop()
        blossombase[b] = base
        blossomparent[b] = -1
        blossomparent[bb] = b
        blossomchilds[b] = path = []
        blossomendps[b] = endps = []
        while bv != bb:
            blossomparent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            blossomparent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        label[b] = 1
        labelend[b] = labelend[bb]
        dualvar[b] = 0
        for u in blossom_leaves(b):
            if label[inblossom[u]] == 2:
                queue.append(u)
            inblossom[u] = b
        # Least-slack edges from the new blossom to each neighbouring S-blossom.
        bestedgeto = [-1] * (2 * nvertex)
        for sub in path:
            if blossombestedges[sub] is None:
                nblists = [[p // 2 for p in neighbend[u]] for u in blossom_leaves(sub)]
            else:
                nblists = [blossombestedges[sub]]
            for nblist in nblists:
                for kk in nblist:
                    i, j, _ = edges[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and label[bj] == 1
                            and (bestedgeto[bj] == -1 or slack(kk) < slack(bestedgeto[bj]))):
                        bestedgeto[bj] = kk
            blossombestedges[sub] = None
            bestedge[sub] = -1
        blossombestedges[b] = [kk for kk in bestedgeto if kk != -1]
        bestedge[b] = -1
        for kk in blossombestedges[b]:
            if bestedge[b] == -1 or slack(kk) < slack(bestedge[b]):
                bestedge[b] = kk

    def expand_blossom(b, endstage):
        for s in blossomchilds[b]:
            blossomparent[s] = -1
            if s < nvertex:
                inblossom[s] = s
            elif endstage and dualvar[s] == 0:
                expand_blossom(s, endstage)
            else:
                for u in blossom_leaves(s):
                    inblossom[u] = s
        if not endstage and label[b] == 2:
            # Relabel the even-length path through the expanded T-blossom.
            entrychild = inblossom[endpoint[labelend[b] ^ 1]]
            j = blossomchilds[b].index(entrychild)
            if j & 1:
                j -= len(blossomchilds[b])
                jstep, endptrick = 1, 0
            else:
                jstep, endptrick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[blossomendps[b][j - endptrick] ^ endptrick ^ 1]] = 0
                assign_label(endpoint[p ^ 1], 2, p)
                allowedge[blossomendps[b][j - endptrick] // 2] = True
                j += jstep
                p = blossomendps[b][j - endptrick] ^ endptrick
                allowedge[p // 2] = True
                j += jstep
            bv = blossomchilds[b][j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            bestedge[bv] = -1
            j += jstep
            while blossomchilds[b][j] != entrychild:
                bv = blossomchilds[b][j]
                if label[bv] == 1:
                    j += jstep
                    continue
                reached = -1
                for u in blossom_leaves(bv):
                    if label[u] != 0:
                        reached = u
                        break
                if reached != -1:
                    label[reached] = 0
                    label[endpoint[mate[blossombase[bv]]]] = 0
                    assign_label(reached, 2, labelend[reached])
                j += jstep
        label[b] = labelend[b] = -1
        blossomchilds[b] = blossomendps[b] = None
        blossombase[b] = -1
        blossombestedges[b] = None
        bestedge[b] = -1
        unusedblossoms.append(b)

    def augment_blossom(b, v):
        t = v
        while blossomparent[t] != b:
            t = blossomparent[t]
        if t >= nvertex:
            augment_blossom(t, v)
        i = j = blossomchilds[b].index(t)
        if i & 1:
            j -= len(blossomchilds[b])
            jstep, endptrick = 1, 0
        else:
            jstep, endptrick = -1, 1
        while j != 0:
            j += jstep
            t = blossomchilds[b][j]
            p = blossomendps[b][j - endptrick] ^ endptrick
            if t >= nvertex:
                augment_blossom(t, endpoint[p])
            j += jstep
            t = blossomchilds[b][j]
            if t >= nvertex:
                augment_blossom(t, endpoint[p ^ 1])
            mate[endpoint[p]] = p ^ 1
            mate[endpoint[p ^ 1]] = p
        blossomchilds[b] = blossomchilds[b][i:] + blossomchilds[b][:i]
        blossomendps[b] = blossomendps[b][i:] + blossomendps[b][:i]
        blossombase[b] = blossombase[blossomchilds[b][0]]

    def augment_matching(k):
        v, w, _ = edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= nvertex:
                    augment_blossom(bs, s)
                mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= nvertex:
                    augment_blossom(bt, j)
                mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    for _stage in range(nvertex):
        label[:] = [0] * (2 * nvertex)
        bestedge[:] = [-1] * (2 * nvertex)
        blossombestedges[nvertex:] = [None] * nvertex
        allowedge[:] = [False] * nedge
        queue[:] = []
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == 0:
                assign_label(v, 1, -1)

        augmented = False
        while True:
            while queue and not augmented:
                v = queue.pop()
                for p in neighbend[v]:
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    if not allowedge[k]:
                        kslack = slack(k)
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        if label[inblossom[w]] == 0:
                            assign_label(w, 2, p ^ 1)
                        elif label[inblossom[w]] == 1:
                            base = scan_blossom(v, w)
                            if base >= 0:
                                add_blossom(base, k)
                            else:
                                augment_matching(k)
                                augmented = True
                                break
                        elif label[w] == 0:
                            label[w] = 2
                            labelend[w] = p ^ 1
                    elif label[inblossom[w]] == 1:
                        b = inblossom[v]
                        if bestedge[b] == -1 or kslack < slack(bestedge[b]):
                            bestedge[b] = k
                    elif label[w] == 0:
                        if bestedge[w] == -1 or kslack < slack(bestedge[w]):
                            bestedge[w] = k
            if augmented:
                break

            # Dual adjustment: pick the smallest admissible step.
            deltatype = -1
            delta = deltaedge = deltablossom = None
            if not maxcardinality:
                deltatype = 1
                delta = min(dualvar[:nvertex])
            for v in range(nvertex):
                if label[inblossom[v]] == 0 and bestedge[v] != -1:
                    d = slack(bestedge[v])
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 2, bestedge[v]
            for b in range(2 * nvertex):
                if blossomparent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                    d = slack(bestedge[b]) / 2
                    if deltatype == -1 or d < delta:
                        delta, deltatype, deltaedge = d, 3, bestedge[b]
            for b in range(nvertex, 2 * nvertex):
                if (blossombase[b] >= 0 and blossomparent[b] == -1 and label[b] == 2
                        and (deltatype == -1 or dualvar[b] < delta)):
                    delta, deltatype, deltablossom = dualvar[b], 4, b
            if deltatype == -1:
                # Maximum cardinality reached; a final step to optimality.
                deltatype = 1
                delta = max(0, min(dualvar[:nvertex]))

            for v in range(nvertex):
                lb = label[inblossom[v]]
                if lb == 1:
                    dualvar[v] -= delta
                elif lb == 2:
                    dualvar[v] += delta
            for b in range(nvertex, 2 * nvertex):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == 1:
                        dualvar[b] += delta
                    elif label[b] == 2:
                        dualvar[b] -= delta

            if deltatype == 1:
                break
            if deltatype == 2:
                allowedge[deltaedge] = True
                i, j, _ = edges[deltaedge]
                if label[inblossom[i]] == 0:
                    i, j = j, i
                queue.append(i)
            elif deltatype == 3:
                allowedge[deltaedge] = True
                i, _, _ = edges[deltaedge]
                queue.append(i)
            else:
                expand_blossom(deltablossom, False)

        if not augmented:
            break
        for b in range(nvertex, 2 * nvertex):
            if (blossomparent[b] == -1 and blossombase[b] >= 0 and label[b] == 1
                    and dualvar[b] == 0):
                expand_blossom(b, True)

    final_mate = [endpoint[mate[v]] if mate[v] >= 0 else -1 for v in range(nvertex)]
    state = BlossomState(list(edges), final_mate, list(dualvar[:nvertex]))
    for b in range(nvertex, 2 * nvertex):
        if blossombase[b] >= 0:
            state.blossom_dual[b] = dualvar[b]
            state.blossom_leaves[b] = frozenset(blossom_leaves(b))
    return state


def audit_perfect_matching(state: BlossomState, tol: float = AUDIT_TOL) -> None:
    """Check the final duals certify the matching as a maximum-weight
    perfect matching.

    Conditions: every edge has reduced slack >= 0, matched edges are tight,
    blossom duals are >= 0 and every blossom with positive dual is full.
    Tolerances are absolute and scaled by the weight magnitude.
    """
    scale = max([1.0] + [abs(w) for _, _, w in state.edges])
    atol = tol * scale
    inside = {v: [b for b, leaves in state.blossom_leaves.items() if v in leaves]
              for v in range(len(state.mate))}
    for i, j, w in state.edges:
        s = state.vertex_dual[i] + state.vertex_dual[j] - 2 * w
        for b in set(inside[i]) & set(inside[j]):
            s += 2 * state.blossom_dual[b]
        if s < -atol:
            raise CheckFailure(f"negative reduced slack {s} on edge ({i}, {j})")
        if state.mate[i] == j and s > atol:
            raise CheckFailure(f"matched edge ({i}, {j}) not tight (slack {s})")
    for b, z in state.blossom_dual.items():
        if z < -atol:
            raise CheckFailure(f"negative blossom dual {z}")
        if z > atol:
            leaves = state.blossom_leaves[b]
            matched_inside = sum(1 for v in leaves if state.mate[v] in leaves) // 2
            if matched_inside != (len(leaves) - 1) // 2:
                raise CheckFailure(f"blossom with positive dual is not full: {sorted(leaves)}")


def min_cost_perfect_matching(inst: MatchingInstance, audit: bool = True) -> Matching:
    """Exact minimum-cost perfect matching.

    Costs may be any finite reals. Raises :class:`InfeasibleError` when
    ``k`` is odd or no perfect matching exists.
    """
    k = inst.k
    if k % 2:
        raise InfeasibleError(f"perfect matching needs an even vertex count, got {k}")
    if k == 0:
        return Matching((), 0.0)
    edges = []
    for (i, j), c in sorted(inst.costs.items()):
        if not (0 <= i < k and 0 <= j < k) or i == j:
            raise PreconditionError(f"invalid pair ({i}, {j}) for k={k}")
        if not math.isfinite(c):
            raise PreconditionError(f"non-finite cost on pair ({i}, {j})")
        edges.append((min(i, j), max(i, j), float(c)))
    if len({(i, j) for i, j, _ in edges}) != len(edges):
        raise PreconditionError("duplicate vertex pair in matching instance")
    if not edges:
        raise InfeasibleError("no perfect matching: instance has no edges")
    cmax = max(c for _, _, c in edges)
    weighted = [(i, j, cmax - c) for i, j, c in edges]
    state = max_weight_matching(weighted, maxcardinality=True)
    mate = state.mate + [-1] * (k - len(state.mate))
    if any(m == -1 for m in mate):
        raise InfeasibleError("no perfect matching exists")
    if audit:
        audit_perfect_matching(state)
    pairs = tuple(sorted((v, mate[v]) for v in range(k) if v < mate[v]))
    cost = math.fsum(inst.costs[p] for p in pairs)
    return Matching(pairs, cost)
