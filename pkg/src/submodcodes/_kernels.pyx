# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: pairwise half-distances and maximum clique."""
import numpy as np

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy


cdef bint _contains(const int64_t[:, ::1] rows, int nr, const int64_t[::1] pc, const int64_t[::1] pv,
                    int64_t* vec, int d, const int64_t[:, ::1] addt, const int64_t[:, ::1] mult,
                    const int64_t[::1] negt, const int64_t[::1] valt, int64_t* qpow) noexcept nogil:
    cdef int t, c, col
    cdef int64_t a, coef, o
    for t in range(nr):
        col = pc[t]
        for c in range(col):
            if vec[c] != 0:
                return False
        a = vec[col]
        if a != 0:
            if valt[a] < pv[t]:
                return False
            coef = a // qpow[pv[t]]
            for c in range(col, d):
                o = rows[t, c]
                if o != 0:
                    vec[c] = addt[vec[c], negt[mult[coef, o]]]
    for c in range(d):
        if vec[c] != 0:
            return False
    return True


def half_distance(const int64_t[:, :, ::1] gens, const int64_t[::1] nrows,
                  const int64_t[:, ::1] pivcols, const int64_t[:, ::1] pivvals,
                  const int64_t[:, ::1] addt, const int64_t[:, ::1] mult,
                  const int64_t[::1] negt, const int64_t[::1] valt, int q, int r):
    cdef Py_ssize_t n = gens.shape[0]
    cdef int d = gens.shape[2]
    out = np.zeros((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] N = out
    cdef int64_t qpow[64]
    cdef int64_t vec[64]
    cdef Py_ssize_t i, j
    cdef int m, t, c, k
    cdef bint ok
    if r >= 63 or d > 64:
        raise ValueError("kernel limits: r < 63 and d <= 64")
    qpow[0] = 1
    for k in range(1, r + 1):
        qpow[k] = qpow[k - 1] * q
    with nogil:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                m = 0
                while m < r:
                    ok = True
                    for t in range(nrows[i]):
                        for c in range(d):
                            vec[c] = mult[gens[i, t, c], qpow[m]]
                        if not _contains(gens[j], nrows[j], pivcols[j], pivvals[j], vec, d,
                                         addt, mult, negt, valt, qpow):
                            ok = False
                            break
                    if ok:
                        break
                    m += 1
                N[i, j] = m
    return out


cdef class _CliqueSearch:
    cdef int n, W, best_size, cur_size, target
    cdef uint64_t* nbr
    cdef int* best
    cdef int* cur

    def __cinit__(self, int n):
        self.n = n
        self.W = (n + 63) // 64
        self.nbr = <uint64_t*> malloc(n * self.W * sizeof(uint64_t))
        self.best = <int*> malloc((n + 1) * sizeof(int))
        self.cur = <int*> malloc((n + 1) * sizeof(int))
        if self.nbr == NULL or self.best == NULL or self.cur == NULL:
            raise MemoryError()
        for i in range(n * self.W):
            self.nbr[i] = 0
        self.best_size = 0
        self.cur_size = 0
        self.target = -1

    def __dealloc__(self):
        free(self.nbr)
        free(self.best)
        free(self.cur)

    cdef void set_edge(self, int u, int v):
        self.nbr[u * self.W + v // 64] |= (<uint64_t> 1) << (v % 64)

    cdef int expand(self, uint64_t* P) noexcept:
        cdef int W = self.W
        cdef uint64_t* U = <uint64_t*> malloc(3 * W * sizeof(uint64_t))
        cdef uint64_t* Q = U + W
        cdef uint64_t* newP = U + 2 * W
        cdef int* order = <int*> malloc(2 * (self.n + 1) * sizeof(int))
        cdef int* colour = order + self.n + 1
        cdef int cnt = 0, k = 0, w, v, i, b
        cdef bint anyQ, anyU, anyP
        cdef uint64_t word
        memcpy(U, P, W * sizeof(uint64_t))
        while True:
            anyU = False
            for w in range(W):
                if U[w]:
                    anyU = True
                    break
            if not anyU:
                break
            k += 1
            memcpy(Q, U, W * sizeof(uint64_t))
            w = 0
            while w < W:
                word = Q[w]
                if word == 0:
                    w += 1
                    continue
                b = 0
                while not ((word >> b) & 1):
                    b += 1
                v = w * 64 + b
                U[w] &= ~((<uint64_t> 1) << b)
                Q[w] &= ~((<uint64_t> 1) << b)
                for i in range(W):
                    Q[i] &= ~self.nbr[v * W + i]
                order[cnt] = v
                colour[cnt] = k
                cnt += 1
        for i in range(cnt - 1, -1, -1):
            if self.cur_size + colour[i] <= self.best_size:
                break
            v = order[i]
            self.cur[self.cur_size] = v
            self.cur_size += 1
            anyP = False
            for w in range(W):
                newP[w] = P[w] & self.nbr[v * W + w]
                if newP[w]:
                    anyP = True
            if not anyP:
                if self.cur_size > self.best_size:
                    self.best_size = self.cur_size
                    memcpy(self.best, self.cur, self.cur_size * sizeof(int))
            else:
                self.expand(newP)
            self.cur_size -= 1
            P[v // 64] &= ~((<uint64_t> 1) << (v % 64))
            if 0 <= self.target <= self.best_size:
                break
        free(U)
        free(order)
        return 0


def max_clique(adj, seed=(), target=-1):
    """Exact maximum clique; same contract and results as the pure-Python kernel."""
    adj = np.asarray(adj, dtype=bool)
    cdef int n = adj.shape[0]
    if n == 0:
        return 0, []
    deg = adj.sum(axis=1)
    order = sorted(range(n), key=lambda v: (-int(deg[v]), v))
    label = np.empty(n, dtype=np.int64)
    for i, v in enumerate(order):
        label[v] = i
    cdef _CliqueSearch S = _CliqueSearch(n)
    cdef int u, v2
    for i, v in enumerate(order):
        for u in np.flatnonzero(adj[v]).tolist():
            if u != v:
                S.set_edge(i, label[u])
    seed = list(seed)
    if seed:
        S.best_size = len(seed)
        for i, v in enumerate(seed):
            S.best[i] = label[v]
    else:
        S.best_size = 1
        S.best[0] = 0
    S.target = target
    cdef uint64_t* P
    if not (0 <= target <= S.best_size):
        P = <uint64_t*> malloc(S.W * sizeof(uint64_t))
        for i in range(S.W):
            P[i] = 0
        for v2 in range(n):
            P[v2 // 64] |= (<uint64_t> 1) << (v2 % 64)
        S.expand(P)
        free(P)
    return S.best_size, sorted(order[S.best[i]] for i in range(S.best_size))
