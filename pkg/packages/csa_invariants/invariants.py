"""Central simple algebras over a function field, kept as local invariants.

An algebra of dimension d^2 is a finite map place -> inv_x in Q/Z. Invariants
are stored as reduced fractions in [0, 1); a place that is absent has
invariant 0. Every constructor goes through ``make_algebra``, which enforces:

- each denominator divides d,
- the invariants sum to an integer (reciprocity).

Places are symbolic (label and degree). Validation against an actual curve
only needs the number of places of each degree, see ``validate_places``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Union

from packages.curve_zeta.zeta import ZetaData, places_of_degree
from packages.shared.errors import AlgebraError

logger = logging.getLogger(__name__)

Invariant = Union[Fraction, int]


@dataclass(frozen=True, order=True)
class PlaceRef:
    id: str
    degree: int = 1

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise AlgebraError(f"place {self.id!r} must have degree >= 1, got {self.degree}")


@dataclass(frozen=True)
class AlgebraSpec:
    """Dimension d^2 and the nonzero local invariants, sorted by place."""

    d: int
    invariants: tuple[tuple[PlaceRef, Fraction], ...] = ()

    def invariant(self, place: PlaceRef) -> Fraction:
        for x, inv in self.invariants:
            if x == place:
                return inv
        return Fraction(0)

    def as_dict(self) -> dict[PlaceRef, Fraction]:
        return dict(self.invariants)

    @property
    def places(self) -> tuple[PlaceRef, ...]:
        return tuple(x for x, _ in self.invariants)


def reduce_invariant(value: Invariant) -> Fraction:
    """Canonical representative in [0, 1)."""
    return Fraction(value) % 1


def make_algebra(d: int, invariants: Mapping[PlaceRef, Invariant]) -> AlgebraSpec:
    if d < 1:
        raise AlgebraError(f"d must be positive, got {d}")
    labels: dict[str, int] = {}
    reduced: dict[PlaceRef, Fraction] = {}
    for place, value in invariants.items():
        if labels.setdefault(place.id, place.degree) != place.degree:
            raise AlgebraError(f"place {place.id!r} is listed with two different degrees")
        inv = reduce_invariant(value)
        if d % inv.denominator:
            raise AlgebraError(
                f"invariant {inv} at {place.id!r} has denominator not dividing d={d}"
            )
        if inv:
            reduced[place] = reduced.get(place, Fraction(0)) + inv
    total = sum(reduced.values(), Fraction(0))
    if total.denominator != 1:
        raise AlgebraError(f"invariants sum to {total}, which is not an integer")
    items = tuple(sorted((x, v % 1) for x, v in reduced.items() if v % 1))
    return AlgebraSpec(d=d, invariants=items)


def ramification(a: AlgebraSpec) -> frozenset[PlaceRef]:
    """Ram: the places with nonzero invariant."""
    return frozenset(a.places)


def local_index(a: AlgebraSpec, x: PlaceRef) -> tuple[int, int]:
    """(e_x, kappa_x) with D_x = M_kappa(Delta_x), Delta_x of index e_x."""
    e = a.invariant(x).denominator
    if a.d % e:
        raise AlgebraError(f"local index {e} at {x.id!r} does not divide d={a.d}")
    return e, a.d // e


def global_index(a: AlgebraSpec) -> int:
    """lcm of the local indices."""
    return lcm(1, *(inv.denominator for _, inv in a.invariants))


def is_division_algebra(a: AlgebraSpec) -> bool:
    return global_index(a) == a.d


def _require_distinct(o: PlaceRef, inf: PlaceRef) -> None:
    if o == inf or o.id == inf.id:
        raise AlgebraError("o and infinity must be different places")


def bar_algebra_exceptional(D: AlgebraSpec, o: PlaceRef, inf: PlaceRef) -> AlgebraSpec:
    """Swap the 1/d at o over to infinity, keep everything else."""
    _require_distinct(o, inf)
    if D.invariant(inf) != 0:
        raise AlgebraError(f"D must be split at infinity, got inv = {D.invariant(inf)}")
    if D.invariant(o) != reduce_invariant(Fraction(1, D.d)):
        raise AlgebraError(f"D must have invariant 1/{D.d} at o, got {D.invariant(o)}")
    table = D.as_dict()
    table.pop(o, None)
    table[inf] = Fraction(1, D.d)
    return make_algebra(D.d, table)


def bar_algebra_supersingular(D: AlgebraSpec, o: PlaceRef, inf: PlaceRef) -> AlgebraSpec:
    """inv_inf = 1/d and inv_o = -1/d on top of D, which must be split at both."""
    _require_distinct(o, inf)
    if D.invariant(o) != 0:
        raise AlgebraError(f"o must lie outside Ram(D), got inv = {D.invariant(o)}")
    if D.invariant(inf) != 0:
        raise AlgebraError(f"D must be split at infinity, got inv = {D.invariant(inf)}")
    table = D.as_dict()
    table[o] = Fraction(-1, D.d)
    table[inf] = Fraction(1, D.d)
    return make_algebra(D.d, table)


def exceptional_end_source(o: PlaceRef, inf: PlaceRef, d: int) -> AlgebraSpec:
    """The algebra with invariants -1/d at o and 1/d at infinity."""
    _require_distinct(o, inf)
    return make_algebra(d, {o: Fraction(-1, d), inf: Fraction(1, d)})


def end_algebra_invariants(
    A_inv: Union[AlgebraSpec, Mapping[PlaceRef, Invariant]], D: AlgebraSpec
) -> AlgebraSpec:
    """Invariants of A tensor D^opp commuted back: inv(A) + inv(D) mod 1, pointwise."""
    table = A_inv.as_dict() if isinstance(A_inv, AlgebraSpec) else dict(A_inv)
    out: dict[PlaceRef, Fraction] = {x: reduce_invariant(v) for x, v in table.items()}
    for x, inv in D.invariants:
        out[x] = (out.get(x, Fraction(0)) + inv) % 1
    return make_algebra(D.d, out)


def simple_module_invariant(r: int, s: int) -> Fraction:
    """Invariant -s/r of the endomorphism algebra of the simple isocrystal of slope s/r."""
    if r < 1:
        raise AlgebraError(f"r must be positive, got {r}")
    if gcd(r, s) != 1:
        raise AlgebraError(f"gcd(r, s) must be 1, got r={r}, s={s}")
    return Fraction(-s, r) % 1


def validate_places(places: Iterable[PlaceRef], zeta: ZetaData) -> None:
    """Check that the distinct places of each degree fit on the curve."""
    labels: dict[str, int] = {}
    for x in places:
        if labels.setdefault(x.id, x.degree) != x.degree:
            raise AlgebraError(f"place {x.id!r} is listed with two different degrees")
    by_degree = Counter(labels.values())
    for degree, count in sorted(by_degree.items()):
        available = places_of_degree(zeta, degree)
        if count > available:
            raise AlgebraError(
                f"{count} distinct places of degree {degree} requested, "
                f"but the curve has only {available}"
            )
    logger.debug("validate_places: degree multiset %s fits", dict(by_degree))
