"""Exact counting polynomials for balls of homothety classes.

All arithmetic is over the integers; intermediate values may be Laurent
polynomials (negative exponents) when a Gaussian binomial is evaluated at
``X^-1``, and every public result is checked to be a genuine polynomial.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .chain_ring import BudgetExceeded

ETYPE_BUDGET = 10**6


class IntPolynomial:
    """Integer Laurent polynomial in ``X`` stored as ``{degree: coefficient}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Sequence[int] | int = ()):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs}
        elif not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {int(k): int(v) for k, v in coeffs.items() if v}

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls({degree: coeff})

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        out: dict[int, int] = {}
        for sign, body in _split_terms(text):
            if "X" in body:
                c, _, e = body.partition("X")
                coef = int(c) if c else 1
                deg = int(e[1:]) if e.startswith("^") else 1
            else:
                coef, deg = int(body), 0
            out[deg] = out.get(deg, 0) + sign * coef
        return cls(out)

    # -- queries ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(self.coeffs)

    @property
    def low_degree(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def is_polynomial(self) -> bool:
        return self.low_degree >= 0

    def leading_term(self) -> tuple[int, int]:
        d = self.degree
        return self.coeffs.get(d, 0), d

    def is_monic(self) -> bool:
        return self.leading_term()[0] == 1

    def coefficient(self, degree: int) -> int:
        return self.coeffs.get(degree, 0)

    def coefficient_list(self) -> list[int]:
        assert self.is_polynomial()
        return [self.coeffs.get(i, 0) for i in range(self.degree + 1)]

    def __call__(self, x):
        if self.low_degree < 0:
            x = Fraction(x)
        return sum(c * x**k for k, c in self.coeffs.items())

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return IntPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out: dict[int, int] = {}
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = IntPolynomial(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "IntPolynomial":
        return IntPolynomial({d + k: c for d, c in self.coeffs.items()})

    def at_inverse(self) -> "IntPolynomial":
        """Substitute ``X -> X^-1``."""
        return IntPolynomial({-d: c for d, c in self.coeffs.items()})

    def divexact(self, other: "IntPolynomial") -> "IntPolynomial":
        """Exact quotient; raises ``ArithmeticError`` if there is a remainder."""
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lc, ld = other.leading_term()
        rem = dict(self.coeffs)
        quot: dict[int, int] = {}
        lowest_shift = self.low_degree - other.low_degree
        while rem and max(rem) - ld >= lowest_shift:
            top = max(rem)
            c, m = divmod(rem[top], lc)
            if m:
                raise ArithmeticError("inexact polynomial division")
            shift = top - ld
            quot[shift] = c
            for k, v in other.coeffs.items():
                rem[k + shift] = rem.get(k + shift, 0) - c * v
                if rem[k + shift] == 0:
                    del rem[k + shift]
        if rem:
            raise ArithmeticError("inexact polynomial division")
        return IntPolynomial(quot)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    # -- output ----------------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "X" if k == 1 else f"X^{k}"
                body = mono if mag == 1 else f"{mag}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(s + b for s, b in parts[1:])

    def __repr__(self):
        return f"IntPolynomial({self})"

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in sorted(self.coeffs.items(), reverse=True)}


def _as_poly(x) -> IntPolynomial:
    return x if isinstance(x, IntPolynomial) else IntPolynomial(x)


def _split_terms(text: str) -> Iterator[tuple[int, str]]:
    text = text.replace(" ", "")
    sign, buf = 1, ""
    for ch in text:
        if ch in "+-" and buf:
            yield sign, buf
            sign, buf = (1 if ch == "+" else -1), ""
        elif ch in "+-":
            sign = 1 if ch == "+" else -1
        else:
            buf += ch
    if buf:
        yield sign, buf


X = IntPolynomial.monomial(1)


def gauss_binomial(a: int, b: int) -> IntPolynomial:
    """Gaussian binomial ``[a choose b]_X`` by exact division of ``prod (1-X^(a-i))/(1-X^(b-i))``."""
    if not a >= b >= 0:
        raise ValueError(f"need a >= b >= 0, got a={a}, b={b}")
    num = IntPolynomial(1)
    den = IntPolynomial(1)
    for i in range(b):
        num = num * (1 - X ** (a - i))
        den = den * (1 - X ** (b - i))
    return num.divexact(den)


def gauss_multinomial(d: int, jumps: Sequence[int]) -> IntPolynomial:
    """``[d; i_l, ..., i_1]_X = [d choose i_l][i_l choose i_(l-1)]...[i_2 choose i_1]``.

    ``jumps`` is the increasing sequence ``i_1 < ... < i_l``; the value counts
    flags of subspaces of dimensions ``i_1 < ... < i_l`` in ``F_X^d``.
    """
    out = IntPolynomial(1)
    upper = d
    for i in sorted(jumps, reverse=True):
        out = out * gauss_binomial(upper, i)
        upper = i
    return out


def gauss_binomial_at_inverse_times_power(d: int, jumps: Iterable[int],
                                          gaps: Mapping[int, int]) -> IntPolynomial:
    """``[d; I]_{X^-1} * X^(sum_i gaps[i] * i * (d - i))`` as a polynomial."""
    jumps = sorted(jumps)
    if len(set(jumps)) != len(jumps) or any(not 1 <= i <= d - 1 for i in jumps):
        raise ValueError(f"jump set {jumps} must be distinct integers in 1..{d - 1}")
    if set(gaps) != set(jumps) or any(gaps[i] < 1 for i in jumps):
        raise ValueError("every jump needs a positive gap")
    power = sum(gaps[i] * i * (d - i) for i in jumps)
    out = gauss_multinomial(d, jumps).at_inverse().shift(power)
    assert out.is_polynomial(), f"Laurent part did not cancel: {out}"
    return out


@dataclass(frozen=True)
class EDType:
    """Weakly decreasing elementary divisor exponent vector with last entry 0."""

    eps: tuple[int, ...]

    def __post_init__(self):
        eps = tuple(int(e) for e in self.eps)
        object.__setattr__(self, "eps", eps)
        if len(eps) < 1 or eps[-1] != 0:
            raise ValueError(f"{eps}: last entry must be 0")
        if any(a < b for a, b in zip(eps, eps[1:])):
            raise ValueError(f"{eps}: entries must be weakly decreasing")

    @property
    def d(self) -> int:
        return len(self.eps)

    @property
    def distinct_values(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.eps), reverse=True))

    @property
    def ell(self) -> int:
        return len(self.distinct_values) - 1

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(self.eps.count(v) for v in self.distinct_values)

    @property
    def jumps(self) -> tuple[int, ...]:
        """``i_s = #{i : eps_i >= eps~_s}`` for ``s = 1..ell``."""
        vals = self.distinct_values
        return tuple(sum(1 for e in self.eps if e >= vals[s]) for s in range(self.ell))

    @property
    def gaps(self) -> dict[int, int]:
        vals = self.distinct_values
        return {i: vals[s] - vals[s + 1] for s, i in enumerate(self.jumps)}

    @property
    def radius(self) -> int:
        return self.eps[0]

    def is_boundary(self, r: int) -> bool:
        return self.eps[0] == r

    def in_range(self, r: int) -> bool:
        return self.eps[0] <= r

    def index_degree(self) -> int:
        """``sum_{i<j} (eps_i - eps_j)``."""
        e = self.eps
        return sum(e[i] - e[j] for i in range(len(e)) for j in range(i + 1, len(e)))


def _as_etype(eps) -> EDType:
    return eps if isinstance(eps, EDType) else EDType(tuple(eps))


def etypes(d: int, r: int, boundary: bool = False, budget: int = ETYPE_BUDGET) -> list[EDType]:
    """All of ``E_r^(d)`` (or its boundary part) in lexicographic order."""
    total = math.comb(r + d - 1, d - 1)
    if total > budget:
        raise BudgetExceeded("elementary divisor types", total, budget)
    out = []
    for head in itertools.combinations_with_replacement(range(r, -1, -1), d - 1):
        eps = EDType(head + (0,))
        if boundary and eps.eps[0] != r:
            continue
        out.append(eps)
    out.sort(key=lambda e: e.eps)
    if not boundary:
        assert len(out) == total
    return out


def b_epsilon(eps) -> IntPolynomial:
    """Counting polynomial of the classes with elementary divisor type ``eps``."""
    eps = _as_etype(eps)
    out = gauss_binomial_at_inverse_times_power(eps.d, eps.jumps, eps.gaps)
    if not out.is_monic():
        raise AssertionError(f"b_{eps.eps} is not monic: {out}")
    deg = sum(g * i * (eps.d - i) for i, g in eps.gaps.items())
    if not (out.degree == deg == eps.index_degree()):
        raise AssertionError(f"degree mismatch for b_{eps.eps}")
    return out


def ball_polynomial(d: int, r: int, budget: int = ETYPE_BUDGET) -> IntPolynomial:
    """``b_r^(d)(X)``: number of homothety classes in the radius-``r`` ball."""
    if d < 2 or r < 1:
        raise ValueError("need d >= 2 and r >= 1")
    total = IntPolynomial(0)
    for eps in etypes(d, r, budget=budget):
        total = total + b_epsilon(eps)
    return total


def sphere_polynomial(d: int, r: int, budget: int = ETYPE_BUDGET) -> IntPolynomial:
    """Sum of ``b_eps`` over boundary types: the size of the boundary sphere."""
    total = IntPolynomial(0)
    for eps in etypes(d, r, boundary=True, budget=budget):
        total = total + b_epsilon(eps)
    return total


def submodule_count(d: int, q: int, r: int) -> int:
    """Number of all submodules of ``R^d``: each class of type eps holds ``r - eps_1 + 1`` modules."""
    return sum(b_epsilon(eps)(q) * (r - eps.eps[0] + 1) for eps in etypes(d, r))


def grassmannian_count(d: int, n: int, q: int, r: int) -> int:
    """Number of free rank-``n`` submodules of ``R^d``."""
    if not 1 <= n <= d - 1:
        raise ValueError(f"need 1 <= n <= d-1, got n={n}, d={d}")
    value = gauss_binomial(d, n).at_inverse().shift(n * (d - n))(q) * q ** ((r - 1) * n * (d - n))
    assert value == int(value)
    return int(value)


def leading_term(d: int, r: int) -> tuple[int, int]:
    """Predicted leading ``(coefficient, degree)`` of ``b_r^(d)``."""
    if d < 2 or r < 1:
        raise ValueError("need d >= 2 and r >= 1")
    if d % 2 == 0:
        return 1, d * d * r // 4
    return r + 1, (d * d - 1) * r // 4


def degree_relations_check(eps, eps_prime, lam: int, k: int | None = None) -> bool:
    """Check the degree relation between ``b_eps`` and ``b_eps'``.

    With ``k`` omitted the hypothesis is ``eps + rev(eps') = lam * 1`` and the
    degrees must agree; with ``k`` given the hypothesis is
    ``eps - eps' = lam * e_k`` and the degrees must differ by
    ``(d + 1 - 2k) * lam``.
    """
    e, f = _as_etype(eps), _as_etype(eps_prime)
    d = e.d
    if f.d != d:
        raise ValueError("types of different length")
    if k is None:
        if any(a + b != lam for a, b in zip(e.eps, reversed(f.eps))):
            raise ValueError("hypothesis eps + rev(eps') = lam*1 does not hold")
        return b_epsilon(e).degree == b_epsilon(f).degree
    if not 1 <= k <= d:
        raise ValueError(f"k={k} outside 1..{d}")
    diff = [a - b for a, b in zip(e.eps, f.eps)]
    if diff != [lam if i == k - 1 else 0 for i in range(d)]:
        raise ValueError("hypothesis eps - eps' = lam*e_k does not hold")
    return b_epsilon(e).degree == b_epsilon(f).degree + (d + 1 - 2 * k) * lam

