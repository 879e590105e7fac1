from fractions import Fraction

import pytest

from packages.csa_invariants.invariants import (
    PlaceRef,
    bar_algebra_exceptional,
    bar_algebra_supersingular,
    end_algebra_invariants,
    exceptional_end_source,
    global_index,
    is_division_algebra,
    local_index,
    make_algebra,
    ramification,
    simple_module_invariant,
    validate_places,
)
from packages.curve_zeta.curves import projective_line
from packages.curve_zeta.zeta import compute_zeta
from packages.field_arith.field import make_field
from packages.shared.errors import AlgebraError

O = PlaceRef("o")
INF = PlaceRef("inf")
X1 = PlaceRef("x1")
X2 = PlaceRef("x2", degree=2)


def _brauer_sum_is_integral(a):
    return sum((inv for _, inv in a.invariants), Fraction(0)).denominator == 1


def test_local_index():
    a = make_algebra(2, {O: Fraction(1, 2), X1: Fraction(1, 2)})
    assert local_index(a, INF) == (1, 2)
    assert local_index(a, O) == (2, 1)
    b = make_algebra(3, {O: Fraction(1, 3), X1: Fraction(2, 3)})
    assert local_index(b, X1) == (3, 1)
    for algebra in (a, b):
        for x in (O, INF, X1):
            e, kappa = local_index(algebra, x)
            assert e * kappa == algebra.d
    print("✅ Local Index Test Passed")


def test_make_algebra_canonical_form():
    a = make_algebra(3, {O: Fraction(-1, 3), INF: Fraction(1, 3), X1: 0})
    assert a.invariant(O) == Fraction(2, 3)
    assert a.invariant(X1) == 0
    assert ramification(a) == {O, INF}
    assert make_algebra(2, {O: Fraction(3, 2), X1: Fraction(1, 2)}) == make_algebra(
        2, {X1: Fraction(1, 2), O: Fraction(1, 2)}
    )


def test_make_algebra_rejects_bad_invariants():
    with pytest.raises(AlgebraError):
        make_algebra(2, {O: Fraction(1, 3), X1: Fraction(2, 3)})  # 3 does not divide 2
    with pytest.raises(AlgebraError):
        make_algebra(2, {O: Fraction(1, 2)})  # sum 1/2
    with pytest.raises(AlgebraError):
        make_algebra(0, {})
    with pytest.raises(AlgebraError):
        make_algebra(2, {PlaceRef("y", 1): Fraction(1, 2), PlaceRef("y", 2): Fraction(1, 2)})
    with pytest.raises(AlgebraError):
        PlaceRef("z", 0)
    print("✅ Algebra Validation Test Passed")


def test_bar_algebra_exceptional_tables():
    d2 = make_algebra(2, {O: Fraction(1, 2), X1: Fraction(1, 2)})
    bar = bar_algebra_exceptional(d2, O, INF)
    assert bar.as_dict() == {INF: Fraction(1, 2), X1: Fraction(1, 2)}
    assert bar.invariant(O) == 0

    d3 = make_algebra(3, {O: Fraction(1, 3), X1: Fraction(2, 3)})
    bar3 = bar_algebra_exceptional(d3, O, INF)
    assert bar3.as_dict() == {INF: Fraction(1, 3), X1: Fraction(2, 3)}

    trivial = bar_algebra_exceptional(make_algebra(1, {}), O, INF)
    assert trivial.invariants == ()
    assert all(_brauer_sum_is_integral(a) for a in (bar, bar3, trivial))
    print("✅ Exceptional Bar Algebra Test Passed")


def test_bar_algebra_exceptional_preconditions():
    with pytest.raises(AlgebraError):
        bar_algebra_exceptional(make_algebra(2, {}), O, INF)
    with pytest.raises(AlgebraError):
        bar_algebra_exceptional(make_algebra(2, {O: Fraction(1, 2), INF: Fraction(1, 2)}), O, INF)
    with pytest.raises(AlgebraError):
        bar_algebra_exceptional(make_algebra(2, {O: Fraction(1, 2), X1: Fraction(1, 2)}), O, O)


def test_bar_algebra_supersingular_tables():
    bar2 = bar_algebra_supersingular(make_algebra(2, {}), O, INF)
    assert bar2.as_dict() == {O: Fraction(1, 2), INF: Fraction(1, 2)}
    bar3 = bar_algebra_supersingular(make_algebra(3, {}), O, INF)
    assert bar3.as_dict() == {O: Fraction(2, 3), INF: Fraction(1, 3)}
    ramified = make_algebra(2, {X1: Fraction(1, 2), X2: Fraction(1, 2)})
    bar_r = bar_algebra_supersingular(ramified, O, INF)
    assert bar_r.invariant(X1) == bar_r.invariant(X2) == Fraction(1, 2)
    assert bar_algebra_supersingular(make_algebra(1, {}), O, INF).invariants == ()
    with pytest.raises(AlgebraError):
        bar_algebra_supersingular(make_algebra(2, {O: Fraction(1, 2), X1: Fraction(1, 2)}), O, INF)
    assert all(_brauer_sum_is_integral(a) for a in (bar2, bar3, bar_r))
    print("✅ Supersingular Bar Algebra Test Passed")


@pytest.mark.parametrize(
    "d,table",
    [
        (2, {O: Fraction(1, 2), X1: Fraction(1, 2)}),
        (3, {O: Fraction(1, 3), X1: Fraction(2, 3)}),
        (3, {O: Fraction(1, 3), X1: Fraction(1, 3), X2: Fraction(1, 3)}),
        (4, {O: Fraction(1, 4), X1: Fraction(1, 2), X2: Fraction(1, 4)}),
    ],
)
def test_end_algebra_reproduces_exceptional_bar(d, table):
    D = make_algebra(d, table)
    A = exceptional_end_source(O, INF, d)
    assert A.as_dict() == {O: Fraction(d - 1, d), INF: Fraction(1, d)}
    assert end_algebra_invariants(A, D) == bar_algebra_exceptional(D, O, INF)


def test_end_algebra_trivial_cases():
    split = make_algebra(2, {})
    assert end_algebra_invariants({}, split) == split
    assert end_algebra_invariants({O: Fraction(-1, 2), INF: Fraction(1, 2)}, split).as_dict() == {
        O: Fraction(1, 2),
        INF: Fraction(1, 2),
    }


def test_simple_module_invariant():
    assert simple_module_invariant(2, -1) == Fraction(1, 2)
    assert simple_module_invariant(5, -1) == Fraction(1, 5)
    assert simple_module_invariant(1, 0) == 0
    assert simple_module_invariant(3, 2) == Fraction(1, 3)
    with pytest.raises(AlgebraError):
        simple_module_invariant(4, 2)
    with pytest.raises(AlgebraError):
        simple_module_invariant(0, 1)
    print("✅ Simple Module Invariant Test Passed")


def test_global_index_and_division():
    a = make_algebra(4, {O: Fraction(1, 2), X1: Fraction(1, 2)})
    assert global_index(a) == 2
    assert not is_division_algebra(a)
    b = make_algebra(4, {O: Fraction(1, 4), X1: Fraction(3, 4)})
    assert global_index(b) == 4
    assert is_division_algebra(b)
    assert global_index(make_algebra(3, {})) == 1


def test_validate_places_against_curve():
    zeta = compute_zeta(projective_line(make_field(2, 1, 1)))
    validate_places([O, INF, X1, X2], zeta)
    with pytest.raises(AlgebraError):
        validate_places([O, INF, X1, PlaceRef("x3")], zeta)  # only 3 rational places
    with pytest.raises(AlgebraError):
        validate_places([X2, PlaceRef("x4", 2)], zeta)  # only 1 place of degree 2
    print("✅ Place Validation Test Passed")


if __name__ == "__main__":
    test_local_index()
    test_make_algebra_rejects_bad_invariants()
    test_bar_algebra_exceptional_tables()
    test_bar_algebra_supersingular_tables()
    test_simple_module_invariant()
    test_validate_places_against_curve()
    print("\n🎉 All Invariant Tests Passed!")
