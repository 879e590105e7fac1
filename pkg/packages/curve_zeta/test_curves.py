import pytest

from packages.curve_zeta.curves import (
    brute_force_count,
    count_points,
    elliptic_curve,
    hyperelliptic_curve,
    points_at_infinity,
    poly_gcd,
    poly_mul,
    projective_line,
)
from packages.field_arith.field import make_field
from packages.shared.constants import CurveKind
from packages.shared.errors import CurveError
from packages.shared.settings import get_enumeration_cap

F2 = make_field(2, 1, 1)
F3 = make_field(3, 1, 1)


def test_projective_line_counts():
    line = projective_line(F2)
    assert line.kind == CurveKind.PROJECTIVE_LINE
    assert [count_points(line, m) for m in range(1, 5)] == [3, 5, 9, 17]
    assert count_points(projective_line(make_field(3, 2, 1)), 1) == 10
    print("✅ Projective Line Count Test Passed")


def test_supersingular_elliptic_curve_over_f2():
    # y^2 + y = x^3
    curve = elliptic_curve(F2, (0, 0, 1, 0, 0))
    assert curve.kind == CurveKind.ELLIPTIC and curve.genus == 1
    assert count_points(curve, 1) == 3
    assert count_points(curve, 2) == 9
    print("✅ Elliptic Curve Count Test Passed")


def test_ordinary_elliptic_curve_over_f2():
    # y^2 + y = x^3 + x
    curve = elliptic_curve(F2, (0, 0, 1, 1, 0))
    assert count_points(curve, 1) == 5


def test_singular_weierstrass_rejected():
    with pytest.raises(CurveError):
        elliptic_curve(F2, (0, 0, 0, 0, 0))
    with pytest.raises(CurveError):
        elliptic_curve(F3, (0, 0, 0, 0, 0))  # y^2 = x^3
    with pytest.raises(CurveError):
        elliptic_curve(F2, (0, 0, 1, 0))
    print("✅ Singular Cubic Test Passed")


@pytest.mark.parametrize(
    "base,f,h",
    [
        (F2, (0, 0, 0, 1), (1,)),
        (F2, (1, 0, 0, 1), (0, 1)),
        (F2, (0, 0, 0, 0, 0, 1), (1,)),
        (F2, (0, 0, 0, 1, 0, 1), (1,)),
        (F3, (0, 2, 0, 1), ()),
        (F3, (1, 0, 1, 1), ()),
        (F3, (1, 0, 0, 0, 0, 1), ()),
        (F3, (0, 2, 0, 0, 0, 0, 1), ()),
    ],
)
def test_fast_count_matches_brute_force(base, f, h):
    curve = hyperelliptic_curve(base, f, h)
    cap = get_enumeration_cap()
    checked = 0
    for m in range(1, 2 * curve.genus + 3):
        if (base.q ** m) ** 2 > cap:
            break
        assert count_points(curve, m) == brute_force_count(curve, m)
        checked += 1
    assert checked == 2 * curve.genus + 2


def test_hyperelliptic_validation():
    with pytest.raises(CurveError):
        hyperelliptic_curve(F3, (1, 1))  # too small
    with pytest.raises(CurveError):
        hyperelliptic_curve(F3, (0, 0, 1, 1), genus=2)
    with pytest.raises(CurveError):
        hyperelliptic_curve(F2, (0, 0, 0, 1))  # h = 0 in characteristic 2
    with pytest.raises(CurveError):
        hyperelliptic_curve(F3, (0, 0, 1, 1))  # x^2 (x + 1): repeated root
    with pytest.raises(CurveError):
        hyperelliptic_curve(F3, (0, 2, 0, 0, 0, 0, 1), infinity_points=3)
    with pytest.raises(CurveError):
        hyperelliptic_curve(F3, (0, 2, 0, 1), infinity_points=2)
    print("✅ Hyperelliptic Validation Test Passed")


def test_points_at_infinity_even_degree():
    # y^2 = x^6 - x: leading coefficient 1 is a square, two points at infinity
    curve = hyperelliptic_curve(F3, (0, 2, 0, 0, 0, 0, 1))
    assert curve.genus == 2
    assert points_at_infinity(curve, 1) == 2
    # y^2 = 2 x^6 + ...: 2 is a nonsquare in F_3, none over F_3 and two over F_9
    twisted = hyperelliptic_curve(F3, (1, 1, 0, 0, 0, 0, 2))
    assert points_at_infinity(twisted, 1) == 0
    assert points_at_infinity(twisted, 2) == 2
    print("✅ Points At Infinity Test Passed")


def test_points_at_infinity_override():
    curve = hyperelliptic_curve(F3, (0, 2, 0, 0, 0, 0, 1), infinity_points=0)
    assert points_at_infinity(curve, 1) == 0
    assert points_at_infinity(curve, 2) == 2


def test_polynomial_gcd_is_monic():
    a = poly_mul(F3, (1, 1), (2, 1))
    b = poly_mul(F3, (1, 1), (0, 1))
    assert poly_gcd(F3, a, b) == (1, 1)


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv("ENUMERATION_CAP", "16")
    with pytest.raises(CurveError):
        count_points(projective_line(F2), 5)


def test_parallel_count_matches_serial():
    curve = hyperelliptic_curve(F2, (0, 0, 0, 1, 0, 1), (1,))
    assert count_points(curve, 6, workers=2) == count_points(curve, 6, workers=1)


if __name__ == "__main__":
    test_projective_line_counts()
    test_supersingular_elliptic_curve_over_f2()
    test_singular_weierstrass_rejected()
    test_hyperelliptic_validation()
    test_points_at_infinity_even_degree()
    print("\n🎉 All Curve Tests Passed!")
