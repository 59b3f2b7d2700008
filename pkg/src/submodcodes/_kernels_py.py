"""Pure-Python versions of the hot kernels.

These mirror ``_kernels.pyx`` statement for statement so both backends
return identical results, witnesses included.
"""
from __future__ import annotations

import numpy as np


def _contains(rows, nr, pc, pv, vec, d, addt, mult, negt, valt, qpow):
    for t in range(nr):
        col = pc[t]
        for c in range(col):
            if vec[c]:
                return False
        a = vec[col]
        if a:
            if valt[a] < pv[t]:
                return False
            coef = a // qpow[pv[t]]
            row = rows[t]
            for c in range(col, d):
                o = row[c]
                if o:
                    vec[c] = addt[vec[c]][negt[mult[coef][o]]]
    for c in range(d):
        if vec[c]:
            return False
    return True


def half_distance(gens, nrows, pivcols, pivvals, addt, mult, negt, valt, q, r):
    """``N[i, j]`` = least ``m`` with ``pi^m U_i`` inside ``U_j`` for packed Howell forms."""
    gens = gens.tolist()
    nrows = nrows.tolist()
    pivcols = pivcols.tolist()
    pivvals = pivvals.tolist()
    addt = addt.tolist()
    mult = mult.tolist()
    negt = negt.tolist()
    valt = valt.tolist()
    n = len(nrows)
    d = len(gens[0][0]) if n else 0
    qpow = [q**k for k in range(r + 1)]
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        gi = gens[i]
        for j in range(n):
            if i == j:
                continue
            m = 0
            while m < r:
                ok = True
                for t in range(nrows[i]):
                    vec = [mult[x][qpow[m]] for x in gi[t]]
                    if not _contains(gens[j], nrows[j], pivcols[j], pivvals[j], vec, d,
                                     addt, mult, negt, valt, qpow):
                        ok = False
                        break
                if ok:
                    break
                m += 1
            out[i, j] = m
    return out


def max_clique(adj, seed=(), target=-1):
    """Exact maximum clique by bitset branch and bound with greedy colouring bounds.

    ``adj`` is a symmetric boolean matrix.  ``seed`` is a known clique used as
    the starting incumbent; ``target`` stops the search once a clique of that
    size is found.  Returns ``(size, sorted vertex list)``.
    """
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n == 0:
        return 0, []
    deg = adj.sum(axis=1)
    order = sorted(range(n), key=lambda v: (-int(deg[v]), v))
    label = {v: i for i, v in enumerate(order)}
    nbr = []
    for v in order:
        bits = 0
        for u in np.flatnonzero(adj[v]).tolist():
            if u != v:
                bits |= 1 << label[u]
        nbr.append(bits)

    best = [len(seed), [label[v] for v in seed]]
    if not seed:
        best = [1, [0]]
    cur: list[int] = []

    def expand(P):
        U = P
        order_l = []
        colour = []
        k = 0
        while U:
            k += 1
            Q = U
            while Q:
                v = (Q & -Q).bit_length() - 1
                U &= ~(1 << v)
                Q &= ~(1 << v)
                Q &= ~nbr[v]
                order_l.append(v)
                colour.append(k)
        for i in range(len(order_l) - 1, -1, -1):
            if len(cur) + colour[i] <= best[0]:
                return
            v = order_l[i]
            cur.append(v)
            newP = P & nbr[v]
            if not newP:
                if len(cur) > best[0]:
                    best[0] = len(cur)
                    best[1] = list(cur)
            else:
                expand(newP)
            cur.pop()
            P &= ~(1 << v)
            if 0 <= target <= best[0]:
                return

    if not (0 <= target <= best[0]):
        expand((1 << n) - 1)
    return best[0], sorted(order[v] for v in best[1])
