"""Code constructions: Sperner, permutation, free and star codes, plus closed forms."""
from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

from .chain_ring import BudgetExceeded, ChainRing
from .counting import EDType, grassmannian_count
from .metric import DistanceMatrix, half_distance_matrix
from .submodule import (
    HomothetyClass,
    Submodule,
    class_of,
    diagonal_module,
    enumerate_grassmannian,
    enumeration_budget,
    from_generators,
    full_module,
    is_boundary,
    is_free,
    module_sum,
    scale_pi,
    systematic_matrices,
    tilde,
)

log = logging.getLogger(__name__)

# Sperner bijection is checked against an independent enumeration of Gr(e, V_r) up to this size
BIJECTION_CHECK_LIMIT = 20000


class Code:
    """A set of at least two distinct homothety classes, kept in canonical order."""

    def __init__(self, ring: ChainRing, d: int, members: Iterable[HomothetyClass],
                 construction: dict | None = None):
        members = sorted(members)
        if len(members) < 2:
            raise ValueError("a code needs at least two members")
        if len({c.rep for c in members}) != len(members):
            raise ValueError("code members must be distinct")
        for c in members:
            if c.rep.ring != ring or c.rep.d != d:
                raise ValueError("member from a different ambient module")
        self.ring = ring
        self.d = d
        self.members = members
        self.construction = construction or {"kind": "custom", "params": {}}
        self._matrix: DistanceMatrix | None = None

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, Code):
            return NotImplemented
        return (self.ring, self.d, [c.rep for c in self.members]) == \
            (other.ring, other.d, [c.rep for c in other.members])

    @property
    def cardinality(self) -> int:
        return len(self.members)

    @property
    def matrix(self) -> DistanceMatrix:
        if self._matrix is None:
            self._matrix = half_distance_matrix(self.members)
        return self._matrix

    @property
    def min_distance(self) -> int:
        return self.matrix.min_distance()

    @property
    def is_spherical(self) -> bool:
        return all(is_boundary(c.rep) for c in self.members)

    @property
    def is_free(self) -> bool:
        return all(is_free(c.rep) for c in self.members)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "d": self.d,
            "construction": self.construction,
            "members": [c.rep.to_json() for c in self.members],
            "min_distance": self.min_distance,
            "cardinality": self.cardinality,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Code":
        ring = ChainRing.from_json(obj["ring"])
        members = [class_of(Submodule.from_json(m, ring)) for m in obj["members"]]
        return cls(ring, obj["d"], members, obj.get("construction"))


def _boundary_class(U: Submodule) -> HomothetyClass:
    if not is_boundary(U):
        raise AssertionError(f"{U!r} is not a boundary module")
    return HomothetyClass(U, 1)


# ---------------------------------------------------------------------------
# tropical helpers


def trop_min(a, b):
    return min(a, b)


def trop_max(a, b):
    return max(a, b)


def trop_mul(a, b):
    return a + b


def pyrope_contains(M: Sequence[Sequence[int]], u: Sequence[int]) -> bool:
    """Every inequality ``u_i - u_j <= M[i][j]``."""
    d = len(u)
    if any(M[i][i] != 0 for i in range(d)):
        raise ValueError("polytrope matrix must have zero diagonal")
    return all(u[i] - u[j] <= M[i][j] for i in range(d) for j in range(d))


def pyrope_integral_points(d: int, r: int) -> list[tuple[int, ...]]:
    """Integral points of ``Q(r J_d)`` modulo ``Z 1``, normalized to minimum entry 0."""
    M = [[0 if i == j else r for j in range(d)] for i in range(d)]
    pts = [u for u in itertools.product(range(r + 1), repeat=d)
           if min(u) == 0 and pyrope_contains(M, u)]
    assert len(pts) == (r + 1) ** d - r**d
    return pts


def pyrope_class_map(ring: ChainRing, d: int) -> dict[tuple[int, ...], HomothetyClass]:
    """Integral pyrope points to diagonal classes; checked to be a bijection."""
    pts = pyrope_integral_points(d, ring.r)
    out = {u: class_of(diagonal_module(ring, u)) for u in pts}
    diagonal = {tilde(diagonal_module(ring, delta))
                for delta in itertools.product(range(ring.r + 1), repeat=d)}
    images = {c.rep for c in out.values()}
    if len(images) != len(pts) or images != diagonal:
        raise AssertionError("pyrope points and diagonal classes are not in bijection")
    return out


# ---------------------------------------------------------------------------
# Sperner codes


def sperner_lower_bound(d: int, q: int, r: int, alpha: int) -> int:
    """``[d choose e]_{1/q} q^((r+1-alpha) e (d-e))`` with ``e = ceil(d/2)``."""
    if not 1 <= alpha <= r:
        raise ValueError(f"alpha={alpha} outside 1..{r}")
    e = (d + 1) // 2
    return grassmannian_count(d, e, q, r + 1 - alpha)


def sperner_code(ring: ChainRing, d: int, alpha: int,
                 lift: Callable[[int, int], int] | None = None,
                 budget: int | None = None, check: bool = True) -> Code:
    """Lift the rank-``ceil(d/2)`` Grassmannian of ``(R/pi^m)^d``, ``m = r + 1 - alpha``.

    Each free module over ``R/pi^m`` is written in its unique unit-pivot
    basis, lifted entrywise to ``R`` (zero-padding by default, or via
    ``lift(x, m)``), and spanned over ``R``.
    """
    r = ring.r
    if not 1 <= alpha <= r:
        raise ValueError(f"alpha={alpha} outside 1..{r}")
    m = r + 1 - alpha
    e = (d + 1) // 2
    size = grassmannian_count(d, e, ring.q, m)
    budget = enumeration_budget() if budget is None else budget
    if size > budget:
        raise BudgetExceeded("Sperner code", size, budget)
    lift = lift or ring.lift_from_quotient
    small = ring.quotient(m)
    members = []
    images = set()
    for rows in systematic_matrices(small, d, e):
        U = from_generators(ring, d, [tuple(lift(x, m) for x in row) for row in rows])
        if U.ed_type != (r,) * (d - e) + (0,) * e:
            raise AssertionError("lifted module is not free of rank e")
        members.append(_boundary_class(U))
        images.add(scale_pi(U, alpha - 1))
    if len(images) != len(members) or len(members) != size:
        raise AssertionError("U -> pi^(alpha-1) U is not injective on the lifted code")
    if check and grassmannian_count(d, e, ring.q, r) <= BIJECTION_CHECK_LIMIT:
        target = {scale_pi(W, alpha - 1) for W in enumerate_grassmannian(ring, d, e)}
        if images != target:
            raise AssertionError("pi^(alpha-1) C is not the Grassmannian of pi^(alpha-1) V_r")
    code = Code(ring, d, members, {"kind": "sperner", "params": {"alpha": alpha}})
    if check and code.min_distance < 2 * alpha:
        raise AssertionError(f"Sperner code has min distance {code.min_distance} < {2 * alpha}")
    return code


# ---------------------------------------------------------------------------
# permutation codes


def _boundary_etype(eps, r: int) -> EDType:
    eps = eps if isinstance(eps, EDType) else EDType(tuple(eps))
    if eps.eps[0] != r:
        raise ValueError(f"{eps.eps} is not a boundary type for r={r} (first entry must be r)")
    return eps


def permutation_code(ring: ChainRing, eps) -> Code:
    """The classes ``[U_delta]`` over the coordinate permutations ``delta`` of ``eps``."""
    eps = _boundary_etype(eps, ring.r)
    deltas = sorted(set(itertools.permutations(eps.eps)))
    members = [_boundary_class(diagonal_module(ring, delta)) for delta in deltas]
    return Code(ring, eps.d, members, {"kind": "perm", "params": {"eps": list(eps.eps)}})


def perm_card_dist(eps) -> tuple[int, int]:
    """Closed-form ``(cardinality, min distance)`` of the permutation code of ``eps``."""
    eps = eps if isinstance(eps, EDType) else EDType(tuple(eps))
    if eps.ell < 1:
        raise ValueError("a boundary type has at least two distinct values")
    card = math.factorial(eps.d)
    for m in eps.multiplicities:
        card //= math.factorial(m)
    vals = eps.distinct_values
    return card, 2 * min(a - b for a, b in zip(vals, vals[1:]))


def perm_distance_bound(r: int, ell: int) -> int:
    """``2 * floor(r / ell)``: best min distance for a type with ``ell`` gaps."""
    if ell < 1:
        raise ValueError("ell must be positive")
    return 2 * (r // ell)


class PermBound(NamedTuple):
    paper_value: Fraction | int
    exact_value: int

    @property
    def mismatch(self) -> bool:
        return self.paper_value != self.exact_value


def _compositions(n: int, k: int):
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def perm_cardinality_bound(d: int, r: int, alpha: int) -> PermBound:
    """Closed form ``d!/((beta!)^(X+1) (beta+1)^gamma)`` next to the exhaustive optimum.

    The closed form is evaluated literally with ``r = alpha X + Y`` and
    ``d = beta X + gamma`` (``Y < alpha``, ``gamma < X``).  The exhaustive
    value maximizes the multinomial over all boundary types whose distinct
    values are at least ``alpha`` apart; it is the authoritative one.
    """
    if not 1 <= alpha <= r:
        raise ValueError(f"alpha={alpha} outside 1..{r}")
    X = r // alpha
    beta, gamma = divmod(d, X)
    closed = Fraction(math.factorial(d), math.factorial(beta) ** (X + 1) * (beta + 1) ** gamma)
    if closed.denominator == 1:
        closed = int(closed)
    exact = 0
    for parts in range(2, min(d, X + 1) + 1):
        for mult in _compositions(d, parts):
            value = math.factorial(d)
            for m in mult:
                value //= math.factorial(m)
            exact = max(exact, value)
    out = PermBound(closed, exact)
    if out.mismatch:
        log.warning("permutation bound mismatch at d=%d r=%d alpha=%d: closed form %s, exhaustive %d",
                    d, r, alpha, closed, exact)
    return out


def free_code(ring: ChainRing, d: int, n: int) -> Code:
    """Coordinate free modules of rank ``n``: the permutations of ``(r,...,r,0,...,0)`` with ``n`` zeros."""
    if not 1 <= n <= d - 1:
        raise ValueError(f"need 1 <= n <= d-1, got n={n}")
    eps = (ring.r,) * (d - n) + (0,) * n
    code = permutation_code(ring, eps)
    code.construction = {"kind": "free", "params": {"n": n}}
    assert code.cardinality == math.comb(d, n)
    return code


def star_configuration(ring: ChainRing, d: int, check: bool = True) -> Code:
    """``R e_1, ..., R e_d`` and ``R (e_1 + ... + e_d)``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    r = ring.r
    gens = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)] + [(1,) * d]
    mods = [from_generators(ring, d, [g]) for g in gens]
    V = full_module(ring, d)
    if check:
        for i, U in enumerate(mods):
            if U.ed_type != (r,) * (d - 1) + (0,):
                raise AssertionError("star member is not free of rank 1")
            rest = [W for j, W in enumerate(mods) if j != i]
            total = rest[0]
            for W in rest[1:]:
                total = module_sum(total, W)
            if total != V:
                raise AssertionError("the other d star members do not span V_r")
    code = Code(ring, d, [_boundary_class(U) for U in mods], {"kind": "star", "params": {}})
    if check:
        if code.cardinality != d + 1:
            raise AssertionError("star configuration must have d+1 members")
        D = code.matrix.D
        off = [int(D[i, j]) for i in range(d + 1) for j in range(d + 1) if i != j]
        if set(off) != {2 * r}:
            raise AssertionError("star members are not pairwise at distance 2r")
    return code


# ---------------------------------------------------------------------------
# closed forms


def exact_card_maxdist(d: int, q: int, r: int) -> int:
    """Largest spherical code with min distance ``2r``; independent of ``r``."""
    e = (d + 1) // 2
    return grassmannian_count(d, e, q, 1)


def exact_card_d2(q: int, r: int, alpha: int) -> int:
    """Largest code in rank 2 with min distance ``2 alpha``."""
    if not 1 <= alpha <= r:
        raise ValueError(f"alpha={alpha} outside 1..{r}")
    return (q + 1) * q ** (r - alpha)


def replace_by_free_parts(code: Code) -> Code:
    """Swap every non-free member ``U = X + H`` for its free part ``H``."""
    from .submodule import free_part
    members = []
    for c in code.members:
        U = c.rep
        if is_free(U):
            members.append(c)
        else:
            members.append(class_of(free_part(U)[1]))
    return Code(code.ring, code.d, members, {"kind": "free-reduction", "params": {}})
