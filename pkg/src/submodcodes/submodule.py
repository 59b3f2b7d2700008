"""Submodules of ``V_r = R^d`` kept in Howell normal form.

A submodule is stored as the tuple of rows of its Howell form: an echelon
matrix whose pivots are ``pi^a`` (unit part 1), with every entry above a
pivot reduced to the canonical residue system modulo that pivot, and with
the Howell property that any vector of the span with zeros in the first
``c`` columns is spanned by the rows pivoting after column ``c``.  Over a
chain ring this form is unique, so two submodules are equal exactly when
their row tuples are.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .chain_ring import BudgetExceeded, ChainRing
from .counting import EDType, grassmannian_count, submodule_count

Row = tuple[int, ...]

DEFAULT_BUDGET = 10**6


def enumeration_budget() -> int:
    return int(os.environ.get("SUBMODCODES_BUDGET", DEFAULT_BUDGET))


# ---------------------------------------------------------------------------
# row kernels


def _axpy(ring: ChainRing, row: list[int], c: int, other: Sequence[int], start: int = 0):
    """``row -= c * other`` in place from column ``start``."""
    if c == 0:
        return
    mul, sub = ring.mul, ring.sub
    for j in range(start, len(row)):
        o = other[j]
        if o:
            row[j] = sub(row[j], mul(c, o))


def howell_form(ring: ChainRing, rows: Iterable[Sequence[int]], d: int) -> tuple[Row, ...]:
    """Howell normal form of the row span of ``rows`` (each of length ``d``)."""
    work = []
    for row in rows:
        if len(row) != d:
            raise ValueError(f"row {tuple(row)} does not have length {d}")
        if any(row):
            work.append([x % ring.size for x in row])
    val = ring.valuation
    r = ring.r
    result: list[tuple[int, int, list[int]]] = []
    for col in range(d):
        best, best_v = -1, r
        for i, row in enumerate(work):
            v = val(row[col])
            if v < best_v:
                best, best_v = i, v
                if v == 0:
                    break
        if best < 0:
            continue
        piv = work.pop(best)
        u = ring.inv(ring.unit_part(piv[col]))
        if u != 1:
            piv = [ring.mul(u, x) for x in piv]
        piv[col] = ring.pi_power(best_v)
        for row in work:
            a = row[col]
            if a:
                _axpy(ring, row, ring.div_pi_power(a, best_v), piv, col)
        if best_v > 0:
            extra = [ring.mul_pi_power(x, r - best_v) for x in piv]
            if any(extra):
                work.append(extra)
        work = [row for row in work if any(row)]
        result.append((col, best_v, piv))
    # reduce entries above each pivot, pivots processed left to right
    for j, (col, v, piv) in enumerate(result):
        for i in range(j):
            row = result[i][2]
            a = row[col]
            if a:
                # floor division by q^v leaves the canonical residue mod pi^v
                _axpy(ring, row, ring.div_pi_power(a, v), piv, col)
    return tuple(tuple(row) for _, _, row in result)


def _pivots(ring: ChainRing, rows: Sequence[Row]) -> tuple[tuple[int, int], ...]:
    out = []
    for row in rows:
        col = next(j for j, x in enumerate(row) if x)
        out.append((col, ring.valuation(row[col])))
    return tuple(out)


def _reduce(ring: ChainRing, rows: Sequence[Row], pivots, vec: Sequence[int]) -> bool:
    """True when ``vec`` lies in the span of the Howell rows."""
    v = list(vec)
    val = ring.valuation
    for (col, pv), row in zip(pivots, rows):
        for j in range(col):
            if v[j]:
                return False
        a = v[col]
        if a:
            if val(a) < pv:
                return False
            _axpy(ring, v, ring.div_pi_power(a, pv), row, col)
    return not any(v)


# ---------------------------------------------------------------------------
# the submodule type


class Submodule:
    """An ``R``-submodule of ``R^d`` in canonical (Howell) form."""

    __slots__ = ("ring", "d", "rows", "pivots", "_ed", "_hash")

    def __init__(self, ring: ChainRing, d: int, rows: tuple[Row, ...], _canonical: bool = False):
        if not _canonical:
            rows = howell_form(ring, rows, d)
        self.ring = ring
        self.d = d
        self.rows = rows
        self.pivots = _pivots(ring, rows)
        self._ed = None
        self._hash = None

    # equality and hashing go through the canonical rows
    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.rows == other.rows and self.d == other.d and self.ring == other.ring

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, self.rows))
        return self._hash

    def __repr__(self):
        body = ", ".join("(" + ",".join(str(self.ring.format(x)) for x in row) + ")" for row in self.rows)
        return f"Submodule({self.ring}, d={self.d}, rows=[{body}])"

    def sort_key(self):
        return (len(self.rows), self.rows)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    # lattice operations
    def __contains__(self, vec):
        return contains(self, vec)

    def __le__(self, other):
        return is_subset(self, other)

    def __add__(self, other):
        return module_sum(self, other)

    def __and__(self, other):
        return intersect(self, other)

    def is_zero(self) -> bool:
        return not self.rows

    @property
    def ed_type(self) -> tuple[int, ...]:
        if self._ed is None:
            self._ed = smith_decomposition(self)[0]
        return self._ed

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "d": self.d,
                "rows": [[self.ring.format(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, obj: dict, ring: ChainRing | None = None) -> "Submodule":
        if ring is None:
            ring = ChainRing.from_json(obj["ring"])
        rows = [tuple(ring.parse(x) for x in row) for row in obj["rows"]]
        return from_generators(ring, obj["d"], rows)

    def text(self) -> str:
        if not self.rows:
            return "[ 0 ]"
        cells = [[str(self.ring.format(x)) for x in row] for row in self.rows]
        w = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + " ".join(c.rjust(w) for c in row) + " ]" for row in cells)


def from_generators(ring: ChainRing, d: int, rows: Iterable[Sequence[int]]) -> Submodule:
    return Submodule(ring, d, tuple(tuple(r) for r in rows))


def zero_module(ring: ChainRing, d: int) -> Submodule:
    return Submodule(ring, d, (), _canonical=True)


def full_module(ring: ChainRing, d: int) -> Submodule:
    rows = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
    return Submodule(ring, d, rows, _canonical=True)


def _check(U: Submodule, V: Submodule):
    if U.d != V.d or U.ring != V.ring:
        raise ValueError("submodules of different ambient modules")


def contains(U: Submodule, vec: Sequence[int]) -> bool:
    if len(vec) != U.d:
        raise ValueError(f"vector of length {len(vec)} in a rank-{U.d} module")
    return _reduce(U.ring, U.rows, U.pivots, [x % U.ring.size for x in vec])


def is_subset(U1: Submodule, U2: Submodule) -> bool:
    _check(U1, U2)
    return all(_reduce(U2.ring, U2.rows, U2.pivots, row) for row in U1.rows)


def module_sum(U1: Submodule, U2: Submodule) -> Submodule:
    _check(U1, U2)
    return Submodule(U1.ring, U1.d, U1.rows + U2.rows)


def intersect(U1: Submodule, U2: Submodule) -> Submodule:
    """``U1 & U2`` via the Zassenhaus stack ``[[A, A], [B, 0]]``."""
    _check(U1, U2)
    ring, d = U1.ring, U1.d
    stack = [row + row for row in U1.rows] + [row + (0,) * d for row in U2.rows]
    h = howell_form(ring, stack, 2 * d)
    low = [row[d:] for row in h if not any(row[:d])]
    return Submodule(ring, d, tuple(low))


def intersect_bruteforce(U1: Submodule, U2: Submodule, guard: int = 10**4) -> Submodule:
    """Oracle: scan every vector of ``R^d``."""
    _check(U1, U2)
    ring, d = U1.ring, U1.d
    if ring.size**d > guard:
        raise BudgetExceeded("brute-force intersection", ring.size**d, guard)
    vecs = [v for v in itertools.product(range(ring.size), repeat=d) if contains(U1, v) and contains(U2, v)]
    return Submodule(ring, d, tuple(vecs))


def span_bruteforce(U: Submodule, guard: int = 10**5) -> frozenset:
    """Oracle: the set of all vectors of ``U`` by closing its generators."""
    ring, d = U.ring, U.d
    if ring.size**d > guard:
        raise BudgetExceeded("brute-force span", ring.size**d, guard)
    span = {(0,) * d}
    for row in U.rows:
        span = {tuple(ring.add(x, ring.mul(c, y)) for x, y in zip(v, row))
                for v in span for c in range(ring.size)}
    return frozenset(span)


def scale_pi(U: Submodule, k: int) -> Submodule:
    ring = U.ring
    if not 0 <= k <= ring.r:
        raise ValueError(f"k={k} outside 0..{ring.r}")
    rows = [tuple(ring.mul_pi_power(x, k) for x in row) for row in U.rows]
    return Submodule(ring, U.d, tuple(rows))


def m_of(U: Submodule) -> int:
    """Largest ``m`` with ``U`` inside ``pi^m V_r``."""
    val = U.ring.valuation
    return min((val(x) for row in U.rows for x in row), default=U.ring.r)


def tilde(U: Submodule) -> Submodule:
    """``{x : pi^m x in U}`` for ``m = m_of(U)``: divided generators plus ``pi^(r-m) V_r``."""
    ring, d = U.ring, U.d
    m = m_of(U)
    if m == 0:
        return U
    rows = [tuple(ring.div_pi_power(x, m) for x in row) for row in U.rows]
    rows += [tuple(ring.pi_power(ring.r - m) if i == j else 0 for j in range(d)) for i in range(d)]
    return Submodule(ring, d, tuple(rows))


def pi_power_of_ambient(ring: ChainRing, d: int, k: int) -> Submodule:
    return scale_pi(full_module(ring, d), k)


def is_boundary(U: Submodule) -> bool:
    ring, d = U.ring, U.d
    if is_subset(pi_power_of_ambient(ring, d, ring.r - 1), U):
        return False
    return not is_subset(U, pi_power_of_ambient(ring, d, 1))


def distance_to_center(U: Submodule) -> int:
    """``dist([U], [V_r])``: least ``n`` with ``pi^n V_r`` inside ``tilde(U)``."""
    rep = tilde(U)
    ring = U.ring
    for n in range(ring.r + 1):
        if is_subset(pi_power_of_ambient(ring, U.d, n), rep):
            return n
    raise AssertionError("pi^r V_r = 0 lies in every module")  # pragma: no cover


@dataclass(frozen=True)
class HomothetyClass:
    """A homothety class, represented by its tilde-maximal member."""

    rep: Submodule
    class_size: int

    def __lt__(self, other):
        return self.rep < other.rep

    @property
    def ring(self):
        return self.rep.ring

    @property
    def d(self):
        return self.rep.d

    def is_boundary(self) -> bool:
        return self.class_size == 1

    def members(self) -> list[Submodule]:
        return [scale_pi(self.rep, j) for j in range(self.class_size)]


def class_of(U: Submodule) -> HomothetyClass:
    rep = tilde(U)
    return HomothetyClass(rep, U.ring.r - distance_to_center(rep) + 1)


def class_size(c: HomothetyClass) -> int:
    return c.class_size


def class_members_bruteforce(c: HomothetyClass) -> list[Submodule]:
    """Oracle: scan ``pi^j rep`` over all ``j`` and keep those homothetic to ``rep``."""
    out = []
    for j in range(c.ring.r + 1):
        W = scale_pi(c.rep, j)
        if tilde(W) == c.rep and W not in out:
            out.append(W)
    return out


# ---------------------------------------------------------------------------
# elementary divisors


def smith_decomposition(U: Submodule) -> tuple[tuple[int, ...], list[tuple[int, tuple[int, ...]]]]:
    """Diagonalize the generator matrix by two-sided elimination.

    Returns ``(eps, basis)`` where ``eps`` is the sorted (weakly decreasing)
    exponent vector of length ``d`` (entries ``r`` for missing summands) and
    ``basis`` lists ``(exponent, f_i)`` for a basis ``f_1..f_d`` of ``V_r``
    with ``U = sum_i R pi^(exponent_i) f_i``.
    """
    ring, d, r = U.ring, U.d, U.ring.r
    M = [list(row) for row in U.rows]
    B = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    val = ring.valuation
    exps = []
    k = len(M)
    for t in range(min(k, d)):
        best, bv = None, r
        for i in range(t, k):
            for j in range(t, d):
                v = val(M[i][j])
                if v < bv:
                    best, bv = (i, j), v
        if best is None:
            break
        i, j = best
        M[t], M[i] = M[i], M[t]
        if j != t:
            for row in M:
                row[t], row[j] = row[j], row[t]
            B[t], B[j] = B[j], B[t]
        u = ring.inv(ring.unit_part(M[t][t]))
        M[t] = [ring.mul(u, x) for x in M[t]]
        piv = M[t][t]
        for i2 in range(k):
            if i2 != t and M[i2][t]:
                _axpy(ring, M[i2], ring.div_pi_power(M[i2][t], bv), M[t])
        for j2 in range(t + 1, d):
            a = M[t][j2]
            if a:
                c = ring.div_pi_power(a, bv)
                # column op col_j2 -= c col_t; basis row f_t += c f_j2
                for row in M:
                    row[j2] = ring.sub(row[j2], ring.mul(c, row[t]))
                B[t] = [ring.add(x, ring.mul(c, y)) for x, y in zip(B[t], B[j2])]
        assert M[t][t] == piv
        exps.append(bv)
    exps += [r] * (d - len(exps))
    basis = list(zip(exps, (tuple(b) for b in B)))
    return tuple(sorted(exps, reverse=True)), basis


def ed_type(U: Submodule) -> tuple[int, ...]:
    return U.ed_type


def ed_type_of_class(c: HomothetyClass) -> EDType:
    return EDType(c.rep.ed_type)


def is_free(U: Submodule) -> bool:
    """``pi U == U & pi V_r``."""
    ring = U.ring
    return scale_pi(U, 1) == intersect(U, pi_power_of_ambient(ring, U.d, 1))


def free_part(U: Submodule) -> tuple[Submodule, Submodule]:
    """Split ``U = X + H`` (direct) with ``H`` free and ``pi^(r-1) X = 0``."""
    if U.is_zero():
        raise ValueError("the zero module has no free part")
    ring, d, r = U.ring, U.d, U.ring.r
    _, basis = smith_decomposition(U)
    H = from_generators(ring, d, [f for e, f in basis if e == 0])
    X = from_generators(ring, d, [tuple(ring.mul_pi_power(x, e) for x in f)
                                  for e, f in basis if 0 < e < r])
    return X, H


def diagonal_module(ring: ChainRing, delta: Sequence[int]) -> Submodule:
    """``U_delta = sum_i R pi^(delta_i) e_i``."""
    d = len(delta)
    if any(not 0 <= x <= ring.r for x in delta):
        raise ValueError(f"exponents {tuple(delta)} outside 0..{ring.r}")
    rows = [tuple(ring.pi_power(x) if i == j else 0 for j in range(d))
            for i, x in enumerate(delta) if x < ring.r]
    return Submodule(ring, d, tuple(rows), _canonical=True)


# ---------------------------------------------------------------------------
# enumeration


def _guard(what: str, predicted: int, budget: int | None):
    budget = enumeration_budget() if budget is None else budget
    if predicted > budget:
        raise BudgetExceeded(what, predicted, budget)


def enumerate_submodules(ring: ChainRing, d: int, budget: int | None = None) -> Iterator[Submodule]:
    """Every submodule of ``R^d`` exactly once.

    Howell forms are grown from the bottom row upward: a new top row is a
    pivot ``pi^v`` at a column left of the current first pivot, followed by
    reduced entries in existing pivot columns and arbitrary entries
    elsewhere.  A candidate is kept when it is a fixed point of
    ``howell_form``; every suffix of a Howell form is again one, so this
    reaches each form once.
    """
    _guard("submodules", submodule_count(d, ring.q, ring.r), budget)
    yield from _grow(ring, d, ())


def _grow(ring: ChainRing, d: int, suffix: tuple[Row, ...]) -> Iterator[Submodule]:
    yield Submodule(ring, d, suffix, _canonical=True)
    pivs = dict(_pivots(ring, suffix))
    first = min(pivs, default=d)
    q, size = ring.q, ring.size
    for col in range(first - 1, -1, -1):
        ranges = [range(q ** pivs[j]) if j in pivs else range(size) for j in range(col + 1, d)]
        for v in range(ring.r):
            head = (0,) * col + (ring.pi_power(v),)
            for tail in itertools.product(*ranges):
                cand = (head + tail,) + suffix
                if howell_form(ring, cand, d) == cand:
                    yield from _grow(ring, d, cand)


def enumerate_classes(ring: ChainRing, d: int, budget: int | None = None) -> Iterator[HomothetyClass]:
    """Every homothety class once, via its tilde-maximal representative."""
    r = ring.r
    for U in enumerate_submodules(ring, d, budget):
        if not U.is_zero() and m_of(U) == 0:
            yield HomothetyClass(U, r - distance_to_center(U) + 1)


def enumerate_boundary(ring: ChainRing, d: int, budget: int | None = None) -> Iterator[Submodule]:
    for U in enumerate_submodules(ring, d, budget):
        if is_boundary(U):
            yield U


def systematic_matrices(ring: ChainRing, d: int, n: int) -> Iterator[tuple[Row, ...]]:
    """Unit-pivot bases of the free rank-``n`` submodules, one per module.

    Row ``i`` has a 1 in pivot column ``p_i``, zeros in the other pivot
    columns, entries of ``pi R`` left of ``p_i`` and arbitrary entries to the
    right.  Each free module has exactly one such basis.
    """
    q, size = ring.q, ring.size
    multiples_of_pi = range(0, size, q)
    for P in itertools.combinations(range(d), n):
        slots = []
        for p_i in P:
            for j in range(d):
                if j in P:
                    continue
                slots.append(multiples_of_pi if j < p_i else range(size))
        for vals in itertools.product(*slots):
            it = iter(vals)
            rows = []
            for p_i in P:
                rows.append(tuple(1 if j == p_i else (0 if j in P else next(it)) for j in range(d)))
            yield tuple(rows)


def enumerate_grassmannian(ring: ChainRing, d: int, n: int, budget: int | None = None) -> Iterator[Submodule]:
    """The free rank-``n`` submodules of ``R^d``."""
    if not 1 <= n <= d - 1:
        raise ValueError(f"need 1 <= n <= d-1, got n={n}, d={d}")
    _guard("Grassmannian", grassmannian_count(d, n, ring.q, ring.r), budget)
    for rows in systematic_matrices(ring, d, n):
        yield from_generators(ring, d, rows)


def rank_of_free(U: Submodule) -> int:
    return sum(1 for e in U.ed_type if e == 0)
