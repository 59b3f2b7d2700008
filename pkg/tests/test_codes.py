import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from submodcodes.chain_ring import BudgetExceeded, make_ring
from submodcodes.codes import (
    Code,
    exact_card_d2,
    exact_card_maxdist,
    free_code,
    perm_card_dist,
    perm_cardinality_bound,
    perm_distance_bound,
    permutation_code,
    pyrope_class_map,
    pyrope_contains,
    pyrope_integral_points,
    replace_by_free_parts,
    sperner_code,
    sperner_lower_bound,
    star_configuration,
    trop_max,
    trop_min,
    trop_mul,
)
from submodcodes.counting import etypes
from submodcodes.metric import all_classes
from submodcodes.submodule import class_of, from_generators, is_free, scale_pi


@pytest.mark.parametrize("kind,p,r,d", [
    ("z", 2, 2, 2), ("z", 3, 2, 2), ("poly", 2, 3, 2), ("z", 2, 2, 3), ("poly", 3, 1, 3),
])
def test_sperner_codes(kind, p, r, d):
    R = make_ring(kind, p, 1, r)
    for alpha in range(1, r + 1):
        code = sperner_code(R, d, alpha)
        assert code.cardinality == sperner_lower_bound(d, R.q, r, alpha)
        assert code.min_distance >= 2 * alpha
        assert code.is_spherical and code.is_free


def test_sperner_examples():
    assert len(sperner_code(make_ring("z", 2, 1, 5), 2, 3)) == 12
    assert sperner_code(make_ring("z", 2, 1, 5), 2, 3).min_distance == 6
    assert len(sperner_code(make_ring("z", 2, 1, 2), 3, 2)) == 7
    assert sperner_lower_bound(2, 3, 2, 1) == 12


def test_sperner_custom_lift():
    R = make_ring("z", 3, 1, 3)
    alpha = 2

    def lift(x, m):
        # a different section: shift residue-2 entries by pi^m, pivots stay 1
        return R.add(x, R.pi_power(m)) if x % R.q == 2 else x

    a = sperner_code(R, 2, alpha)
    b = sperner_code(R, 2, alpha, lift=lift)
    assert a != b
    assert len(a) == len(b)
    assert b.min_distance >= 2 * alpha
    assert {scale_pi(c.rep, alpha - 1) for c in a} == {scale_pi(c.rep, alpha - 1) for c in b}


def test_sperner_validation():
    R = make_ring("z", 2, 1, 2)
    with pytest.raises(ValueError):
        sperner_code(R, 2, 3)
    with pytest.raises(BudgetExceeded):
        sperner_code(R, 4, 1, budget=10)


def test_permutation_code_figure():
    R = make_ring("z", 2, 1, 1)
    code = permutation_code(R, (1, 1, 0, 0))
    assert len(code) == 6 and code.min_distance == 2
    assert perm_card_dist((1, 1, 0, 0)) == (6, 2)


@pytest.mark.parametrize("d,r", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_permutation_formula_matches_code(d, r):
    R = make_ring("z", 2, 1, r)
    for eps in etypes(d, r, boundary=True):
        code = permutation_code(R, eps)
        assert (code.cardinality, code.min_distance) == perm_card_dist(eps)


def test_permutation_code_needs_boundary_type():
    with pytest.raises(ValueError):
        permutation_code(make_ring("z", 2, 1, 3), (2, 1, 0))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_perm_distance_bound_is_attained(d, r):
    for ell in range(1, d):
        best = max((perm_card_dist(e)[1] for e in etypes(d, r, boundary=True) if e.ell == ell), default=None)
        if best is not None:
            assert best == perm_distance_bound(r, ell)


def test_perm_distance_bound_examples():
    assert perm_distance_bound(2, 2) == 2
    assert perm_distance_bound(5, 2) == 4
    with pytest.raises(ValueError):
        perm_distance_bound(2, 0)


def test_perm_cardinality_bound_mismatch_is_reported(caplog):
    res = perm_cardinality_bound(4, 2, 1)
    assert res.exact_value == 12
    assert res.paper_value == 3
    assert res.mismatch
    assert "mismatch" in caplog.text
    assert perm_cardinality_bound(6, 4, 2).paper_value == Fraction(10, 3)
    with pytest.raises(ValueError):
        perm_cardinality_bound(4, 2, 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_perm_cardinality_exact_is_optimum(d, r):
    for alpha in range(1, r + 1):
        brute = max((perm_card_dist(e)[0] for e in etypes(d, r, boundary=True)
                     if perm_card_dist(e)[1] >= 2 * alpha), default=0)
        assert perm_cardinality_bound(d, r, alpha).exact_value == brute


def test_free_codes():
    R = make_ring("z", 2, 1, 1)
    sizes = [len(free_code(R, 4, n)) for n in (1, 2, 3)]
    assert sizes == [4, 6, 4]
    R2 = make_ring("poly", 3, 1, 2)
    code = free_code(R2, 3, 1)
    assert code.is_free and code.min_distance == 4
    with pytest.raises(ValueError):
        free_code(R, 3, 3)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("r", [1, 2])
def test_star_configuration(d, r):
    code = star_configuration(make_ring("z", 3, 1, r), d)
    assert len(code) == d + 1
    D = code.matrix.D
    assert all(D[i, j] == 2 * r for i in range(d + 1) for j in range(d + 1) if i != j)


def test_tropical_helpers():
    assert trop_min(2, 5) == 2 and trop_max(2, 5) == 5 and trop_mul(2, 5) == 7
    assert pyrope_contains([[0, 1], [1, 0]], (1, 0))
    assert not pyrope_contains([[0, 1], [1, 0]], (2, 0))
    with pytest.raises(ValueError):
        pyrope_contains([[1, 1], [1, 0]], (0, 0))


@pytest.mark.parametrize("d,r", [(2, 1), (2, 3), (3, 2), (4, 1)])
def test_pyrope_points(d, r):
    pts = pyrope_integral_points(d, r)
    assert len(pts) == (r + 1) ** d - r**d
    mapping = pyrope_class_map(make_ring("z", 2, 1, r), d)
    assert len(set(mapping.values())) == len(pts)


def test_closed_forms():
    assert exact_card_d2(2, 2, 1) == 6
    assert exact_card_d2(3, 3, 2) == 12
    assert exact_card_maxdist(3, 2, 5) == 7
    assert exact_card_maxdist(4, 2, 1) == 35
    with pytest.raises(ValueError):
        exact_card_d2(2, 2, 3)


def test_code_container():
    R = make_ring("z", 2, 1, 2)
    a = class_of(from_generators(R, 2, [(1, 0)]))
    b = class_of(from_generators(R, 2, [(0, 1)]))
    with pytest.raises(ValueError):
        Code(R, 2, [a])
    with pytest.raises(ValueError):
        Code(R, 2, [a, a])
    with pytest.raises(ValueError):
        Code(R, 3, [a, b])
    code = Code(R, 2, [b, a])
    assert code.members == sorted([a, b])
    assert code == Code(R, 2, [a, b])
    assert code.min_distance == 4


@pytest.mark.parametrize("maker", [
    lambda: sperner_code(make_ring("poly", 2, 1, 2), 3, 1),
    lambda: permutation_code(make_ring("z", 3, 1, 2), (2, 1, 0)),
    lambda: star_configuration(make_ring("poly", 2, 2, 1), 3),
])
def test_code_json_roundtrip(maker):
    code = maker()
    again = Code.from_json(code.to_json())
    assert again == code
    assert again.construction == code.construction
    assert again.min_distance == code.min_distance


def test_replace_by_free_parts():
    R = make_ring("z", 2, 1, 3)
    boundary = [c for c in all_classes(R, 2) if c.is_boundary()]
    code = Code(R, 2, boundary[:6])
    freed = replace_by_free_parts(code)
    assert all(is_free(c.rep) for c in freed)


@given(st.integers(2, 6), st.integers(1, 5), st.data())
def test_perm_card_dist_property(d, r, data):
    eps = data.draw(st.sampled_from(etypes(d, r, boundary=True)))
    card, dmin = perm_card_dist(eps)
    assert card == math.factorial(d) // math.prod(math.factorial(m) for m in eps.multiplicities)
    assert card == len(set(itertools.permutations(eps.eps)))
    assert 2 <= dmin <= 2 * r
