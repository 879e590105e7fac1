from fractions import Fraction

import pytest

from packages.curve_zeta.curves import elliptic_curve, hyperelliptic_curve, projective_line
from packages.curve_zeta.zeta import (
    compute_zeta,
    euler_product_check,
    functional_equation_holds,
    hasse_weil_holds,
    mobius,
    places_by_degree,
    places_of_degree,
    predicted_counts,
    zeta_from_counts,
    zeta_numerator,
    zeta_special,
)
from packages.field_arith.field import make_field
from packages.shared.errors import InvalidCounts

F2 = make_field(2, 1, 1)
F3 = make_field(3, 1, 1)


def test_projective_line_over_f2():
    z = compute_zeta(projective_line(F2))
    assert z.numerator == (1,)
    assert z.class_number == 1
    assert z.specials[1] == Fraction(1, 3)
    assert z.specials[2] == Fraction(1, 21)
    print("✅ P^1 Zeta Test Passed")


def test_supersingular_elliptic_over_f2():
    # y^2 + y = x^3
    z = compute_zeta(elliptic_curve(F2, (0, 0, 1, 0, 0)))
    assert z.counts[:2] == (3, 9)
    assert z.numerator == (1, 0, 2)
    assert z.class_number == 3
    assert zeta_special(z, 1) == Fraction(3)
    print("✅ Supersingular Elliptic Zeta Test Passed")


def test_ordinary_elliptic_over_f2():
    # y^2 + y = x^3 + x
    z = compute_zeta(elliptic_curve(F2, (0, 0, 1, 1, 0)))
    assert z.counts[0] == 5
    assert z.numerator == (1, 2, 2)
    assert z.class_number == 5


def test_numerator_from_counts_directly():
    assert zeta_numerator([3, 9], 2, 1) == (1, 0, 2)
    assert zeta_numerator([3], 2, 1) == (1, 0, 2)
    assert zeta_numerator([], 5, 0) == (1,)
    assert predicted_counts((1, 0, 2), 2, 3) == [3, 9, 9]


def test_inconsistent_counts_rejected():
    with pytest.raises(InvalidCounts):
        zeta_numerator([3, 10], 2, 1)
    # p_2 = (S_1^2 - S_2) / 2 = -1/2
    with pytest.raises(InvalidCounts):
        zeta_numerator([3, 4], 2, 2)
    with pytest.raises(InvalidCounts):
        zeta_numerator([3], 2, 2)
    print("✅ Invalid Counts Test Passed")


# Ten genus >= 1 models over F_2 and F_3; every one must give a numerator whose
# extra counts agree with the functional equation.
HYPERELLIPTIC_MODELS = [
    (F2, (0, 0, 0, 1), (1,)),
    (F2, (0, 1, 0, 1), (1,)),
    (F2, (1, 1, 0, 1), (1,)),
    (F2, (1, 0, 0, 1), (0, 1)),
    (F2, (0, 0, 0, 0, 0, 1), (1,)),
    (F2, (0, 0, 0, 1, 0, 1), (1,)),
    (F2, (1, 0, 0, 0, 0, 1), (0, 1)),
    (F3, (0, 2, 0, 1), ()),
    (F3, (1, 2, 0, 1), ()),
    (F3, (1, 0, 0, 0, 0, 1), ()),
    (F3, (0, 2, 0, 0, 0, 1), ()),
    (F3, (0, 2, 0, 0, 0, 0, 1), ()),
    (F3, (1, 0, 1, 1), ()),
]


@pytest.mark.parametrize("base,f,h", HYPERELLIPTIC_MODELS)
def test_functional_equation_and_class_number(base, f, h):
    curve = hyperelliptic_curve(base, f, h)
    z = compute_zeta(curve)
    g = curve.genus
    assert len(z.counts) >= 2 * g + 1
    assert len(z.numerator) == 2 * g + 1
    assert functional_equation_holds(z.numerator, z.q, g)
    assert hasse_weil_holds(z)
    assert z.class_number == sum(z.numerator) > 0
    assert predicted_counts(z.numerator, z.q, len(z.counts)) == list(z.counts)
    assert euler_product_check(z, 6)


def test_places_of_degree():
    line2 = compute_zeta(projective_line(F2))
    assert places_of_degree(line2, 1) == 3
    assert places_of_degree(line2, 2) == 1
    line3 = compute_zeta(projective_line(F3))
    assert places_by_degree(line3, 2) == {1: 4, 2: 3}
    with pytest.raises(InvalidCounts):
        places_of_degree(line3, 0)
    print("✅ Places Of Degree Test Passed")


def test_mobius():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_special_values_from_counts():
    z = zeta_from_counts([3], 2, 0, specials=(1, 2, 3))
    assert z.specials[3] == Fraction(1, (1 - 8) * (1 - 16))
    with pytest.raises(InvalidCounts):
        zeta_special(z, 0)


def test_special_value_over_f4():
    z = compute_zeta(projective_line(make_field(2, 2, 1)))
    assert z.specials[1] == Fraction(1, 45)


if __name__ == "__main__":
    test_projective_line_over_f2()
    test_supersingular_elliptic_over_f2()
    test_ordinary_elliptic_over_f2()
    test_numerator_from_counts_directly()
    test_inconsistent_counts_rejected()
    for model in HYPERELLIPTIC_MODELS:
        test_functional_equation_and_class_number(*model)
    test_places_of_degree()
    test_mobius()
    test_special_values_from_counts()
    test_special_value_over_f4()
    print("\n🎉 All Zeta Tests Passed!")
