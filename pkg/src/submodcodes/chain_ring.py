"""Finite commutative chain rings ``Z/p^r Z`` and ``F_q[t]/(t^r)``.

Elements are stored as plain integers in ``[0, q**r)``.  Both kinds use the
same encoding: the base-``q`` digits of the integer are the pi-adic digits of
the element (for ``Z/p^r`` these are the p-adic digits, for ``F_q[t]/(t^r)``
the coefficients of ``1, t, t^2, ...``).  With this encoding the uniformizer
power ``pi^k`` is the integer ``q**k`` and the following are plain integer
operations for either kind:

* ``valuation``      -> index of the lowest nonzero base-``q`` digit
* reduction mod pi^k -> ``x % q**k``
* division by pi^k   -> ``x // q**k`` (exact when ``valuation(x) >= k``)
* multiplication by pi^k -> ``(x * q**k) % q**r``

Only addition and multiplication differ between the two kinds.

Elements of ``F_q`` (``q = p^s``) are encoded as integers whose base-``p``
digits are the coefficients of a polynomial in a root ``a`` of the defining
irreducible polynomial.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

INTEGER_MODULAR = "integer-modular"
TRUNCATED_POLYNOMIAL = "truncated-polynomial"
KINDS = (INTEGER_MODULAR, TRUNCATED_POLYNOMIAL)

ELEMENT_BUDGET = 10**6
# full add/mul tables are kept only for rings of at most this many elements
TABLE_LIMIT = 1024
# small rings build their tables on first use
EAGER_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mulmod_fp(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_rem_fp(a: list[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``f`` (coefficients low to high)."""
    a = list(a)
    s = len(f) - 1
    for k in range(len(a) - 1, s - 1, -1):
        c = a[k] % p
        if c:
            for i in range(s + 1):
                a[k - s + i] = (a[k - s + i] - c * f[i]) % p
    return [x % p for x in a[:s]] + [0] * max(0, s - len(a))


def _has_root_free_factor(f: Sequence[int], p: int) -> bool:
    """True when the monic ``f`` over F_p has a monic factor of degree 1..deg/2."""
    s = len(f) - 1
    for deg in range(1, s // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            g = list(low) + [1]
            rem = _poly_rem_fp(list(f), g, p)
            if not any(rem[: len(g) - 1]):
                return True
    return False


def lowest_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``s`` over F_p with the smallest coefficient code.

    The code of ``c_0 + c_1 X + ... + c_{s-1} X^{s-1} + X^s`` is
    ``sum c_i p^i``; candidates are scanned in increasing code order.
    """
    for code in range(p**s):
        low = [(code // p**i) % p for i in range(s)]
        f = low + [1]
        if s == 1 or (low[0] != 0 and not _has_root_free_factor(f, p)):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured size guard."""

    def __init__(self, what: str, predicted: int, budget: int):
        super().__init__(f"{what}: predicted size {predicted} exceeds budget {budget}")
        self.what = what
        self.predicted = predicted
        self.budget = budget


@dataclass(frozen=True)
class ChainRing:
    """The chain ring ``R`` with residue field ``F_q`` and nilpotency index ``r``."""

    kind: str
    p: int
    s: int
    r: int
    irreducible_poly: tuple[int, ...] = ()
    _tables: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.s < 1 or self.r < 1:
            raise ValueError("s and r must be positive")
        if self.kind == INTEGER_MODULAR and self.s != 1:
            raise ValueError("Z/p^r Z has residue field F_p, so s must be 1")
        if self.kind == TRUNCATED_POLYNOMIAL and not self.irreducible_poly:
            object.__setattr__(self, "irreducible_poly", lowest_irreducible(self.p, self.s))
        if self.kind == INTEGER_MODULAR:
            object.__setattr__(self, "irreducible_poly", ())
        self._build_field_tables()

    # -- basic parameters ---------------------------------------------------

    @property
    def q(self) -> int:
        return self.p**self.s

    @property
    def size(self) -> int:
        return self.q**self.r

    @property
    def pi(self) -> int:
        return self.pi_power(1)

    @property
    def one(self) -> int:
        return 1

    @property
    def zero(self) -> int:
        return 0

    def pi_power(self, k: int) -> int:
        return self.q**k if k < self.r else 0

    def unit_count(self) -> int:
        return self.q**self.r - self.q ** (self.r - 1)

    def quotient(self, m: int) -> "ChainRing":
        """The ring ``R / pi^m R`` as a chain ring of nilpotency ``m``."""
        if not 1 <= m <= self.r:
            raise ValueError(f"quotient exponent {m} outside 1..{self.r}")
        return ChainRing(self.kind, self.p, self.s, m, self.irreducible_poly)

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "s": self.s, "r": self.r}

    @classmethod
    def from_json(cls, obj: dict) -> "ChainRing":
        return make_ring(obj["kind"], obj["p"], obj.get("s", 1), obj["r"])

    def __str__(self):
        if self.kind == INTEGER_MODULAR:
            return f"Z/{self.size}Z"
        return f"F_{self.q}[t]/(t^{self.r})"

    # -- residue field F_q ----------------------------------------------------

    def _build_field_tables(self):
        p, s, q = self.p, self.s, self.q
        if self.kind == INTEGER_MODULAR or s == 1:
            fadd = [[(a + b) % p for b in range(q)] for a in range(q)]
            fmul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            digits = [[(a // p**i) % p for i in range(s)] for a in range(q)]

            def code(v):
                return sum(c * p**i for i, c in enumerate(v))

            fadd = [[code([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q)]
                    for a in range(q)]
            fmul = [[code(_poly_rem_fp(_poly_mulmod_fp(digits[a], digits[b], p),
                                       self.irreducible_poly, p))
                     for b in range(q)] for a in range(q)]
        fneg = [next(b for b in range(q) if fadd[a][b] == 0) for a in range(q)]
        finv = [0] + [next(b for b in range(q) if fmul[a][b] == 1) for a in range(1, q)]
        self._tables.update(fadd=fadd, fmul=fmul, fneg=fneg, finv=finv)

    def field_add(self, a: int, b: int) -> int:
        return self._tables["fadd"][a][b]

    def field_mul(self, a: int, b: int) -> int:
        return self._tables["fmul"][a][b]

    # -- ring arithmetic on integer codes -----------------------------------

    def digits(self, x: int) -> list[int]:
        q = self.q
        return [(x // q**i) % q for i in range(self.r)]

    def from_digits(self, ds: Sequence[int]) -> int:
        q = self.q
        return sum(c * q**i for i, c in enumerate(ds[: self.r]))

    def add(self, x: int, y: int) -> int:
        if self.kind == INTEGER_MODULAR:
            return (x + y) % self.size
        t = self._tables.get("add")
        if t is None and self.size <= EAGER_TABLE_LIMIT:
            t = self.tables()[0]
        if t is not None:
            return t[x][y]
        return self._poly_add(x, y)

    def _poly_add(self, x: int, y: int) -> int:
        fadd = self._tables["fadd"]
        return self.from_digits([fadd[a][b] for a, b in zip(self.digits(x), self.digits(y))])

    def neg(self, x: int) -> int:
        if self.kind == INTEGER_MODULAR:
            return (-x) % self.size
        fneg = self._tables["fneg"]
        return self.from_digits([fneg[a] for a in self.digits(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.kind == INTEGER_MODULAR:
            return (x * y) % self.size
        t = self._tables.get("mul")
        if t is None and self.size <= EAGER_TABLE_LIMIT:
            t = self.tables()[1]
        if t is not None:
            return t[x][y]
        return self._poly_mul(x, y)

    def _poly_mul(self, x: int, y: int) -> int:
        fadd, fmul = self._tables["fadd"], self._tables["fmul"]
        dx, dy = self.digits(x), self.digits(y)
        out = [0] * self.r
        for i, a in enumerate(dx):
            if a:
                for j in range(self.r - i):
                    out[i + j] = fadd[out[i + j]][fmul[a][dy[j]]]
        return self.from_digits(out)

    def valuation(self, x: int) -> int:
        if x == 0:
            return self.r
        q, v = self.q, 0
        while x % q == 0:
            x //= q
            v += 1
        return v

    def is_unit(self, x: int) -> bool:
        return x % self.q != 0

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{self.format(x)} is not a unit in {self}")
        if self.kind == INTEGER_MODULAR:
            return pow(x, -1, self.size)
        # Newton iteration y <- y (2 - x y) doubles the pi-adic precision
        y = self._tables["finv"][x % self.q]
        two = self.add(1, 1)
        for _ in range(self.r.bit_length() + 1):
            y = self.mul(y, self.sub(two, self.mul(x, y)))
        return y

    def mul_pi_power(self, x: int, k: int) -> int:
        if k >= self.r:
            return 0
        return (x * self.q**k) % self.size

    def reduce_mod_pi_power(self, x: int, k: int) -> int:
        """Canonical representative of ``x`` modulo ``pi^k``."""
        return x % self.q**k

    def div_pi_power(self, x: int, k: int) -> int:
        """Some ``c`` with ``pi^k c = x``; requires ``valuation(x) >= k``."""
        return x // self.q**k

    def unit_part(self, x: int) -> int:
        """The unit ``u`` with ``x = pi^v u`` whose digits above ``r - v`` are zero."""
        if x == 0:
            return 1
        return self.div_pi_power(x, self.valuation(x))

    def residue(self, x: int) -> int:
        return x % self.q

    def canonical_lift(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of F_{self.q}")
        return a

    def lift_from_quotient(self, x: int, m: int) -> int:
        """Zero-padding lift of an element of ``R / pi^m`` (given by its code) into ``R``."""
        if not 0 <= m <= self.r:
            raise ValueError(f"m={m} outside 0..{self.r}")
        if not 0 <= x < self.q**m:
            raise ValueError(f"{x} is not an element of R/pi^{m}")
        return x

    def all_elements(self, budget: int = ELEMENT_BUDGET) -> Iterator[int]:
        if self.size > budget:
            raise BudgetExceeded("ring elements", self.size, budget)
        return iter(range(self.size))

    # -- tables for compiled kernels ------------------------------------------

    def tables(self):
        """``(add, mul, neg, val)`` lookup tables over all element codes."""
        if "add" not in self._tables:
            if self.size > TABLE_LIMIT:
                raise BudgetExceeded("ring tables", self.size, TABLE_LIMIT)
            n = self.size
            if self.kind == INTEGER_MODULAR:
                add = [[(a + b) % n for b in range(n)] for a in range(n)]
                mul = [[(a * b) % n for b in range(n)] for a in range(n)]
            else:
                add = [[self._poly_add(a, b) for b in range(n)] for a in range(n)]
                mul = [[self._poly_mul(a, b) for b in range(n)] for a in range(n)]
            self._tables["add"] = add
            self._tables["mul"] = mul
        n = self.size
        neg = [self.neg(a) for a in range(n)]
        val = [self.valuation(a) for a in range(n)]
        return self._tables["add"], self._tables["mul"], neg, val

    # -- formatting -------------------------------------------------------------

    def format(self, x: int):
        """JSON form of an element: an int, or a polynomial string like ``1+t^2``."""
        if self.kind == INTEGER_MODULAR:
            return x
        terms = []
        for i, c in enumerate(self.digits(x)):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, obj) -> int:
        if self.kind == INTEGER_MODULAR:
            if isinstance(obj, str):
                obj = int(obj)
            return obj % self.size
        if isinstance(obj, int):
            obj = str(obj)
        ds = [0] * self.r
        for term in obj.replace(" ", "").split("+"):
            m = re.fullmatch(r"(\d*)(t(?:\^(\d+))?)?", term)
            if not m or not term:
                raise ValueError(f"cannot parse ring element {obj!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            deg = 0 if not m.group(2) else int(m.group(3) or 1)
            if coef >= self.q:
                raise ValueError(f"coefficient {coef} is not in F_{self.q}")
            if deg < self.r:
                ds[deg] = self.field_add(ds[deg], coef)
        return self.from_digits(ds)

    def element(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            return x
        if isinstance(x, str):
            return RingElement(self, self.parse(x))
        if self.kind == TRUNCATED_POLYNOMIAL and not 0 <= x < self.size:
            raise ValueError(f"{x} is not an element code of {self}")
        return RingElement(self, x % self.size)


@lru_cache(maxsize=256)
def make_ring(kind: str, p: int, s: int = 1, r: int = 1) -> ChainRing:
    aliases = {"z": INTEGER_MODULAR, "poly": TRUNCATED_POLYNOMIAL}
    return ChainRing(aliases.get(kind, kind), p, s, r)


@dataclass(frozen=True)
class RingElement:
    ring: ChainRing
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other.value
        return self.ring.element(other).value

    def __add__(self, other):
        return RingElement(self.ring, self.ring.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElement(self.ring, self.ring.sub(self.value, self._coerce(other)))

    def __mul__(self, other):
        return RingElement(self.ring, self.ring.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, self.ring.inv(self.value))

    @property
    def valuation(self) -> int:
        return self.ring.valuation(self.value)

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.ring.format(self.value))


# functional surface mirroring the ring methods
def add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


def neg(x: RingElement) -> RingElement:
    return -x


def inv(x: RingElement) -> RingElement:
    return x.inverse()


def valuation(x: RingElement) -> int:
    return x.valuation


def residue(x: RingElement) -> int:
    return x.ring.residue(x.value)


def canonical_lift(ring: ChainRing, a: int) -> RingElement:
    return RingElement(ring, ring.canonical_lift(a))


def lift_from_quotient(ring: ChainRing, x: int, m: int) -> RingElement:
    return RingElement(ring, ring.lift_from_quotient(x, m))


def all_elements(ring: ChainRing, budget: int = ELEMENT_BUDGET) -> Iterator[RingElement]:
    return (RingElement(ring, x) for x in ring.all_elements(budget))
