import itertools
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from oracles import ed_type_from_sizes, free_sets, oracle_ring, pi_ambient, scale_set, span, submodule_sets
from submodcodes.chain_ring import BudgetExceeded, make_ring
from submodcodes.counting import ball_polynomial, submodule_count
from submodcodes.submodule import (
    Submodule,
    class_members_bruteforce,
    class_of,
    contains,
    diagonal_module,
    distance_to_center,
    enumerate_boundary,
    enumerate_classes,
    enumerate_grassmannian,
    enumerate_submodules,
    free_part,
    from_generators,
    full_module,
    intersect,
    intersect_bruteforce,
    is_boundary,
    is_free,
    is_subset,
    m_of,
    module_sum,
    scale_pi,
    smith_decomposition,
    span_bruteforce,
    systematic_matrices,
    tilde,
    zero_module,
)

GRID = [
    ("z", 2, 1, 2, 2), ("z", 2, 1, 3, 2), ("z", 3, 1, 2, 2), ("z", 2, 1, 1, 3), ("z", 2, 1, 2, 3),
    ("poly", 2, 1, 2, 2), ("poly", 3, 1, 2, 2), ("poly", 2, 1, 2, 3),
]


def _setup(spec):
    kind, p, s, r, d = spec
    R = make_ring(kind, p, s, r)
    return R, oracle_ring(R.kind, p, r), d


def as_set(O, U):
    return span(O, U.d, U.rows)


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_enumeration_matches_bruteforce(spec):
    R, O, d = _setup(spec)
    mods = list(enumerate_submodules(R, d))
    assert len(mods) == len(set(mods)) == submodule_count(d, R.q, R.r)
    assert {as_set(O, U) for U in mods} == submodule_sets(R.kind, R.p, R.r, d)


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_ed_type_and_freeness_match_sizes(spec):
    R, O, d = _setup(spec)
    for U in enumerate_submodules(R, d):
        S = as_set(O, U)
        eps = ed_type_from_sizes(O, d, S)
        assert U.ed_type == eps
        assert is_free(U) == (set(eps) <= {0, R.r})


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_smith_basis(spec):
    R, O, d = _setup(spec)
    V = full_module(R, d)
    for U in enumerate_submodules(R, d):
        eps, basis = smith_decomposition(U)
        assert from_generators(R, d, [f for _, f in basis]) == V
        gens = [tuple(R.mul_pi_power(x, e) for x in f) for e, f in basis]
        assert from_generators(R, d, gens) == U
        assert sorted((e for e, _ in basis), reverse=True) == list(eps)


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_class_sizes(spec):
    # grouping every submodule by its normalized representative recovers the class sizes;
    # the zero module belongs to the class of the ambient module
    R, O, d = _setup(spec)
    groups = Counter(tilde(U) for U in enumerate_submodules(R, d))
    classes = list(enumerate_classes(R, d))
    assert len(classes) == ball_polynomial(d, R.r)(R.q) == len(groups)
    for c in classes:
        assert groups[c.rep] == c.class_size == R.r - distance_to_center(c.rep) + 1
        assert class_members_bruteforce(c) == c.members()
        assert c.is_boundary() == is_boundary(c.rep)


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_tilde_against_sets(spec):
    R, O, d = _setup(spec)
    piV = pi_ambient(O, d, 1)
    for U in enumerate_submodules(R, d):
        if U.is_zero():
            continue
        T = tilde(U)
        m = m_of(U)
        assert not as_set(O, T) <= piV
        assert scale_set(O, as_set(O, T), m) == as_set(O, U)
        assert tilde(T) == T


@pytest.mark.parametrize("spec", GRID[:5], ids=str)
def test_lattice_operations_exhaustive(spec):
    R, O, d = _setup(spec)
    mods = list(enumerate_submodules(R, d))
    sets = {U: as_set(O, U) for U in mods}
    for A, B in itertools.product(mods[:25], mods):
        assert is_subset(A, B) == (sets[A] <= sets[B])
        meet = intersect(A, B)
        assert sets[meet] == sets[A] & sets[B]
        assert meet == intersect_bruteforce(A, B)
        join = module_sum(A, B)
        assert sets[join] == span(O, d, list(A.rows) + list(B.rows))


@pytest.mark.parametrize("spec", GRID[:4], ids=str)
def test_grassmannian_matches_bruteforce(spec):
    R, O, d = _setup(spec)
    for n in range(1, d):
        mods = list(enumerate_grassmannian(R, d, n))
        assert len(mods) == len(set(mods))
        assert {as_set(O, U) for U in mods} == set(free_sets(O, d, n))
        assert len(list(systematic_matrices(R, d, n))) == len(mods)


def test_boundary_enumeration():
    R = make_ring("z", 2, 1, 2)
    assert len(list(enumerate_boundary(R, 3))) == 98
    assert len(list(enumerate_boundary(R, 2))) == 6


def test_examples_from_z4():
    R = make_ring("z", 2, 1, 2)
    assert len(list(enumerate_submodules(R, 2))) == 15
    U = from_generators(R, 2, [(1, 2), (2, 0)])
    assert U.ed_type == (2, 0)
    assert is_free(U)
    W = from_generators(R, 2, [(1, 0), (0, 2)])
    X, H = free_part(W)
    assert X == from_generators(R, 2, [(0, 2)])
    assert H == from_generators(R, 2, [(1, 0)])
    assert not is_free(W)
    assert W.ed_type == (1, 0)


@pytest.mark.parametrize("spec", GRID, ids=str)
def test_free_part_decomposition(spec):
    R, O, d = _setup(spec)
    for U in enumerate_submodules(R, d):
        if U.is_zero():
            continue
        X, H = free_part(U)
        assert module_sum(X, H) == U
        assert intersect(X, H).is_zero()
        assert is_free(H)
        assert scale_pi(X, R.r - 1).is_zero()


def test_free_part_of_zero():
    with pytest.raises(ValueError):
        free_part(zero_module(make_ring("z", 2, 1, 2), 2))


def test_diagonal_module():
    R = make_ring("poly", 3, 1, 3)
    U = diagonal_module(R, (0, 2, 3))
    assert U == from_generators(R, 3, [(1, 0, 0), (0, R.pi_power(2), 0)])
    assert U.ed_type == (3, 2, 0)
    with pytest.raises(ValueError):
        diagonal_module(R, (0, 4))


def test_budget_guard(monkeypatch):
    R = make_ring("z", 2, 1, 2)
    with pytest.raises(BudgetExceeded) as exc:
        list(enumerate_submodules(R, 3, budget=100))
    assert exc.value.predicted == 129
    monkeypatch.setenv("SUBMODCODES_BUDGET", "50")
    with pytest.raises(BudgetExceeded):
        list(enumerate_submodules(R, 3))


def test_json_roundtrip():
    R = make_ring("poly", 2, 1, 3)
    for U in itertools.islice(enumerate_submodules(R, 2), 40):
        assert Submodule.from_json(U.to_json()) == U


def test_operators():
    R = make_ring("z", 3, 1, 2)
    A = from_generators(R, 2, [(1, 0)])
    B = from_generators(R, 2, [(0, 3)])
    assert (1, 0) in A and (0, 1) not in A
    assert (A & B).is_zero()
    assert A <= A + B
    assert class_of(A).class_size == 1


rings = st.sampled_from([("z", 2, 1, 3), ("z", 3, 1, 2), ("poly", 2, 1, 3), ("poly", 2, 2, 2)])


@st.composite
def generator_sets(draw):
    kind, p, s, r = draw(rings)
    R = make_ring(kind, p, s, r)
    d = draw(st.integers(1, 3))
    vec = st.tuples(*[st.integers(0, R.size - 1)] * d)
    return R, d, draw(st.lists(vec, max_size=4))


@given(generator_sets(), st.randoms(use_true_random=False))
def test_howell_form_is_canonical(data, rnd):
    R, d, gens = data
    U = from_generators(R, d, gens)
    if R.size**d <= 4096:
        O = oracle_ring(R.kind, R.p, R.r) if R.s == 1 else None
        if O is not None:
            assert span_bruteforce(U) == span(O, d, gens)
    # a shuffled, rescaled and recombined generating set gives the same canonical rows
    units = [x for x in range(R.size) if R.is_unit(x)]
    other = []
    for g in gens:
        u = rnd.choice(units)
        other.append(tuple(R.mul(u, x) for x in g))
    if len(other) >= 2:
        c = rnd.randrange(R.size)
        other[0] = tuple(R.add(a, R.mul(c, b)) for a, b in zip(other[0], other[1]))
    rnd.shuffle(other)
    other.append(tuple(0 for _ in range(d)))
    assert from_generators(R, d, other) == U
    for g in gens:
        assert contains(U, g)
    assert from_generators(R, d, U.rows) == U


@given(generator_sets(), st.data())
def test_lattice_laws(data, draw):
    R, d, gens = data
    A = from_generators(R, d, gens)
    B = from_generators(R, d, draw.draw(st.lists(st.tuples(*[st.integers(0, R.size - 1)] * d), max_size=3)))
    assert module_sum(A, B) == module_sum(B, A)
    assert intersect(A, B) == intersect(B, A)
    assert is_subset(intersect(A, B), A) and is_subset(A, module_sum(A, B))
    assert intersect(A, module_sum(A, B)) == A
    for k in range(R.r + 1):
        assert is_subset(scale_pi(A, k), A)


def test_small_examples_z4():
    R = make_ring("z", 2, 1, 2)
    assert from_generators(R, 2, [(2, 0), (0, 1), (2, 2)]).rows == ((2, 0), (0, 1))
    meet = intersect(from_generators(R, 2, [(1, 0)]), from_generators(R, 2, [(1, 2)]))
    assert meet == from_generators(R, 2, [(2, 0)])


def test_zero_module_conventions():
    R = make_ring("poly", 2, 1, 3)
    Z = zero_module(R, 3)
    assert m_of(Z) == 3
    assert tilde(Z) == full_module(R, 3)
    assert Z.ed_type == (3, 3, 3)
    assert class_of(Z).class_size == 4
