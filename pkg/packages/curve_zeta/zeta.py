"""Zeta numerators, class numbers, special values and place counts.

Z_X(T) = P(T) / ((1 - T)(1 - qT)) with P(T) = prod (1 - alpha_j T) of degree 2g.
With S_m = q^m + 1 - N_m = sum alpha_j^m, the logarithmic derivative of P gives

    k * p_k = -(S_1 p_{k-1} + S_2 p_{k-2} + ... + S_k p_0),

which is used both ways: counts -> coefficients (``zeta_numerator``) and
coefficients -> counts (``predicted_counts``). Everything is integer or
``Fraction`` arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Optional, Sequence

from sympy import divisors, factorint

from packages.curve_zeta.curves import CurveModel, count_points
from packages.shared.errors import InvalidCounts
from packages.shared.settings import get_enumeration_cap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZetaData:
    q: int
    g: int
    counts: tuple[int, ...]
    numerator: tuple[int, ...]
    specials: Mapping[int, Fraction] = field(default_factory=dict)

    @property
    def class_number(self) -> int:
        return class_number(self)


def _power_sums_from_counts(counts: Sequence[int], q: int) -> list[int]:
    return [q ** m + 1 - n for m, n in enumerate(counts, start=1)]


def predicted_counts(numerator: Sequence[int], q: int, upto: int) -> list[int]:
    """N_1..N_upto implied by P(T), via integer power-sum recurrences."""
    deg = len(numerator) - 1
    coeff = lambda k: numerator[k] if k <= deg else 0  # noqa: E731
    sums: list[int] = []
    for k in range(1, upto + 1):
        s = -k * coeff(k) - sum(sums[i - 1] * coeff(k - i) for i in range(1, k))
        sums.append(s)
    return [q ** m + 1 - s for m, s in enumerate(sums, start=1)]


def functional_equation_holds(numerator: Sequence[int], q: int, g: int) -> bool:
    """p_{2g-j} = q^(g-j) p_j for every j."""
    if len(numerator) != 2 * g + 1 or numerator[0] != 1:
        return False
    return all(numerator[2 * g - j] == q ** (g - j) * numerator[j] for j in range(g + 1))


def zeta_numerator(counts: Sequence[int], q: int, g: int) -> tuple[int, ...]:
    """P(T) from N_1..N_k, g <= k.

    The first g counts fix p_1..p_g, the functional equation supplies the
    rest, and every further count must agree with the resulting P.
    """
    if g < 0:
        raise InvalidCounts(f"genus must be nonnegative, got {g}")
    if len(counts) < g:
        raise InvalidCounts(f"need at least {g} point counts for genus {g}, got {len(counts)}")
    sums = _power_sums_from_counts(counts[:g], q)
    coeffs: list[int] = [1]
    for k in range(1, g + 1):
        total = -sum(sums[i - 1] * coeffs[k - i] for i in range(1, k + 1))
        value = Fraction(total, k)
        if value.denominator != 1:
            raise InvalidCounts(f"coefficient p_{k} = {value} is not an integer")
        coeffs.append(int(value))
    for j in range(g - 1, -1, -1):
        coeffs.append(q ** (g - j) * coeffs[j])
    numerator = tuple(coeffs)
    if len(counts) > g:
        expected = predicted_counts(numerator, q, len(counts))
        for m, (seen, want) in enumerate(zip(counts, expected), start=1):
            if seen != want:
                raise InvalidCounts(
                    f"N_{m} = {seen} contradicts the functional equation (expected {want})"
                )
    if class_number_of(numerator) <= 0:
        raise InvalidCounts("P(1) must be positive")
    return numerator


def class_number_of(numerator: Sequence[int]) -> int:
    return sum(numerator)


def class_number(z: ZetaData) -> int:
    """h = P(1)."""
    return class_number_of(z.numerator)


def evaluate(numerator: Sequence[int], t: int) -> int:
    acc = 0
    for c in reversed(numerator):
        acc = acc * t + c
    return acc


def zeta_special(z: ZetaData, i: int) -> Fraction:
    """zeta_X(-i) = P(q^i) / ((1 - q^i)(1 - q^(i+1)))."""
    if i < 1:
        raise InvalidCounts(f"special values are taken at -i with i >= 1, got {i}")
    qi = z.q ** i
    return Fraction(evaluate(z.numerator, qi), (1 - qi) * (1 - qi * z.q))


def mobius(n: int) -> int:
    factors = factorint(n)
    if any(k > 1 for k in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def places_of_degree(z: ZetaData, r: int) -> int:
    """Number of closed points of degree r: r a_r = sum_{m | r} mu(r/m) N_m."""
    if r < 1:
        raise InvalidCounts(f"place degree must be positive, got {r}")
    counts = predicted_counts(z.numerator, z.q, r)
    total = sum(mobius(r // m) * counts[m - 1] for m in divisors(r))
    if total % r:
        raise InvalidCounts(f"place count for degree {r} is not integral")
    return total // r


def places_by_degree(z: ZetaData, upto: int) -> dict[int, int]:
    return {r: places_of_degree(z, r) for r in range(1, upto + 1)}


def zeta_series(z: ZetaData, precision: int) -> list[int]:
    """Coefficients of P(T) / ((1 - T)(1 - qT)) through T^precision."""
    geometric = [sum(z.q ** i for i in range(n + 1)) for n in range(precision + 1)]
    out = [0] * (precision + 1)
    for i, c in enumerate(z.numerator):
        for n in range(precision + 1 - i):
            out[i + n] += c * geometric[n]
    return out


def euler_product_series(z: ZetaData, precision: int) -> list[int]:
    """prod over places of degree <= precision of (1 - T^deg)^-1, truncated."""
    out = [1] + [0] * precision
    for deg in range(1, precision + 1):
        a = places_of_degree(z, deg)
        factor = [0] * (precision + 1)
        for j in range(precision // deg + 1):
            factor[deg * j] = comb(a + j - 1, j) if a else int(j == 0)
        out = [
            sum(out[i] * factor[n - i] for i in range(n + 1)) for n in range(precision + 1)
        ]
    return out


def euler_product_check(z: ZetaData, precision: int = 6) -> bool:
    return euler_product_series(z, precision) == zeta_series(z, precision)


def hasse_weil_holds(z: ZetaData) -> bool:
    """|a_1| <= 2g sqrt(q), checked as a_1^2 <= 4 g^2 q."""
    a1 = z.numerator[1] if len(z.numerator) > 1 else 0
    return a1 * a1 <= 4 * z.g * z.g * z.q


def compute_zeta(
    curve: CurveModel,
    extra: int = 2,
    specials: Sequence[int] = (1, 2),
    workers: Optional[int] = None,
) -> ZetaData:
    """Count points, derive P(T), and evaluate special values.

    Counts run through m = 2g + extra where the field stays under the
    enumeration cap; the counts past g cross-check the functional equation.
    """
    q, g = curve.base.q, curve.genus
    cap = get_enumeration_cap()
    upto = max(2 * g + extra, 1)
    while upto > max(g, 1) and q ** upto > cap:
        upto -= 1
    counts = tuple(count_points(curve, m, workers=workers) for m in range(1, upto + 1))
    numerator = zeta_numerator(counts, q, g)
    logger.info("zeta: q=%d g=%d counts=%s P=%s", q, g, counts, numerator)
    z = ZetaData(q=q, g=g, counts=counts, numerator=numerator)
    return ZetaData(
        q=q, g=g, counts=counts, numerator=numerator,
        specials={i: zeta_special(z, i) for i in specials},
    )


def zeta_from_counts(counts: Sequence[int], q: int, g: int, specials: Sequence[int] = (1, 2)) -> ZetaData:
    numerator = zeta_numerator(counts, q, g)
    z = ZetaData(q=q, g=g, counts=tuple(counts), numerator=numerator)
    return ZetaData(
        q=q, g=g, counts=tuple(counts), numerator=numerator,
        specials={i: zeta_special(z, i) for i in specials},
    )
