"""Mass of exceptional objects of a given type, and the singular-point count.

For a curve X over F_q with places o != infinity and an algebra D of rank d^2
split at infinity with invariant 1/d at o,

    Mass(f) = h(A) * T^o * T_o(f) * zeta_X(-1) * ... * zeta_X(-(d-1))

where A is the ring of functions regular away from infinity and

    T^o    = prod over x in Ram - o, 1 <= j <= d-1, e_x not dividing j, of (q_x^j - 1)
    T_o(f) = prod_{1<=j<=d} (q_o^j - 1) / prod_i prod_{1<=j<=f_i} (q_o^j - 1).

The class count lies between Mass(f) and (q^d - 1)/(q - 1) * Mass(f).
For d = 2 and a nonempty level away from Ram, o and infinity, the number of
singular points is d(n) * Mass(1, 1).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from packages.csa_invariants.invariants import (
    AlgebraSpec,
    PlaceRef,
    local_index,
    ramification,
    reduce_invariant,
    validate_places,
)
from packages.curve_zeta.zeta import ZetaData, class_number, zeta_special
from packages.field_arith.field import make_field, parse_prime_power
from packages.local_orders.dvr import TruncatedDVR
from packages.local_orders.orders import TypeVector, compositions
from packages.shared.errors import AlgebraError, ConfigError, InternalCheckError
from packages.shared.settings import get_enumeration_cap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelPlace:
    place: PlaceRef
    e: int = 1


@dataclass(frozen=True)
class MassConfig:
    zeta: ZetaData
    inf: PlaceRef
    o: PlaceRef
    algebra: AlgebraSpec
    f: TypeVector
    level: tuple[LevelPlace, ...] = ()

    @property
    def d(self) -> int:
        return self.algebra.d

    @property
    def q(self) -> int:
        return self.zeta.q


@dataclass
class MassReport:
    t_super_o: int
    t_sub_o: int
    h_of_A: int
    zeta_product: Fraction
    mass: Fraction
    lower_bound: Fraction
    upper_bound: Fraction
    extrapolated: bool = False
    d_of_n: Optional[int] = None
    singular_count: Optional[Fraction] = None


@dataclass
class MassTable:
    entries: list[tuple[tuple[int, ...], Fraction]] = field(default_factory=list)
    total: Fraction = Fraction(0)
    lower_bound: Fraction = Fraction(0)
    upper_bound: Fraction = Fraction(0)


# --- Config validation ---


def validate_config(config: MassConfig) -> None:
    """Raise ``ConfigError`` unless the config satisfies every mass-formula hypothesis."""
    D, o, inf = config.algebra, config.o, config.inf
    if config.f.d != D.d:
        raise ConfigError(f"type vector has length {config.f.d} but d = {D.d}")
    if o == inf or o.id == inf.id:
        raise ConfigError("o and infinity must be different places")
    if D.invariant(inf) != 0:
        raise ConfigError(f"D must be split at infinity, got inv = {D.invariant(inf)}")
    if D.invariant(o) != reduce_invariant(Fraction(1, D.d)):
        raise ConfigError(f"D must have invariant 1/{D.d} at o, got {D.invariant(o)}")
    ram = ramification(D)
    seen: set[str] = set()
    for lv in config.level:
        if lv.e < 1:
            raise ConfigError(f"level multiplicity at {lv.place.id!r} must be >= 1, got {lv.e}")
        if lv.place.id in seen:
            raise ConfigError(f"level place {lv.place.id!r} is listed twice")
        seen.add(lv.place.id)
        if lv.place.id in {o.id, inf.id} or any(lv.place.id == x.id for x in ram):
            raise ConfigError(f"level place {lv.place.id!r} must avoid Ram, o and infinity")
    places = list(ram) + [o, inf] + [lv.place for lv in config.level]
    try:
        validate_places(places, config.zeta)
    except AlgebraError as exc:
        raise ConfigError(str(exc)) from exc
    logger.debug(
        "validate_config: d=%d f=%s ram=%d level=%d",
        D.d, config.f.entries, len(ram), len(config.level),
    )


# --- Factors ---


def t_super_o(config: MassConfig) -> int:
    q, d = config.q, config.d
    total = 1
    for x in ramification(config.algebra):
        if x == config.o:
            continue
        e, _ = local_index(config.algebra, x)
        qx = q ** x.degree
        for j in range(1, d):
            if j % e:
                total *= qx ** j - 1
    return total


def t_sub_o(q_o: int, d: int, f: TypeVector) -> int:
    if f.d != d:
        raise ConfigError(f"type vector has length {f.d}, expected d={d}")
    numerator = 1
    for j in range(1, d + 1):
        numerator *= q_o ** j - 1
    denominator = 1
    for size in f:
        for j in range(1, size + 1):
            denominator *= q_o ** j - 1
    value = Fraction(numerator, denominator)
    if value.denominator != 1:
        raise InternalCheckError(f"T_o = {value} is not an integer for f = {f.entries}")
    return value.numerator


def h_of_A(zeta: ZetaData, inf: PlaceRef) -> int:
    """#Pic of the functions regular away from infinity: h_X * deg(infinity)."""
    return class_number(zeta) * inf.degree


def zeta_product(zeta: ZetaData, d: int) -> Fraction:
    """zeta_X(-1) * ... * zeta_X(-(d-1)); 1 when d = 1."""
    out = Fraction(1)
    for i in range(1, d):
        out *= zeta_special(zeta, i)
    return out


def bound_factor(q: int, d: int) -> Fraction:
    return Fraction(q ** d - 1, q - 1)


def mass(config: MassConfig) -> MassReport:
    validate_config(config)
    q, d = config.q, config.d
    upper = t_super_o(config)
    lower = t_sub_o(q ** config.o.degree, d, config.f)
    h = h_of_A(config.zeta, config.inf)
    zp = zeta_product(config.zeta, d)
    value = h * upper * lower * zp
    if value <= 0:
        raise InternalCheckError(f"mass {value} is not positive")
    report = MassReport(
        t_super_o=upper,
        t_sub_o=lower,
        h_of_A=h,
        zeta_product=zp,
        mass=value,
        lower_bound=value,
        upper_bound=bound_factor(q, d) * value,
        extrapolated=config.inf.degree > 1,
    )
    if config.level:
        report.d_of_n = d_of_n(config.level, d, q)
    logger.info("mass: d=%d f=%s q=%d mass=%s", d, config.f.entries, q, value)
    return report


def mass_table(config: MassConfig) -> MassTable:
    """Mass(f) for every type f of length d, with the bounds on their total."""
    validate_config(config)
    table = MassTable()
    for f in compositions(config.d):
        report = mass(
            MassConfig(
                zeta=config.zeta, inf=config.inf, o=config.o,
                algebra=config.algebra, f=f, level=config.level,
            )
        )
        table.entries.append((f.entries, report.mass))
        table.total += report.mass
    table.lower_bound = table.total
    table.upper_bound = bound_factor(config.q, config.d) * table.total
    return table


# --- Level structure ---


def gl_order(d: int, q: int) -> int:
    """#GL_d(F_q)."""
    out = 1
    for j in range(d):
        out *= q ** d - q ** j
    return out


def level_unit_count(d: int, q_x: int, e: int) -> int:
    """#GL_d(O_x / pi_x^e): reduction mod pi_x is onto with kernel of size q_x^(d^2 (e-1))."""
    return gl_order(d, q_x) * q_x ** (d * d * (e - 1))


def d_of_n(level: Sequence[LevelPlace], d: int, q: int) -> int:
    """#(units of the level quotient) / #F_q^x."""
    if not level:
        raise ConfigError("the level must contain at least one place")
    total = 1
    for lv in level:
        if lv.e < 1:
            raise ConfigError(f"level multiplicity at {lv.place.id!r} must be >= 1, got {lv.e}")
        total *= level_unit_count(d, q ** lv.place.degree, lv.e)
    value, rem = divmod(total, q - 1)
    if rem:
        raise InternalCheckError(f"{total} units are not divisible by q - 1 = {q - 1}")
    return value


def _sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def unit_count_oracle(d: int, q_x: int, e: int) -> int:
    """Count invertible d x d matrices over F_{q_x}[pi]/pi^e by walking all of them."""
    p, k = parse_prime_power(q_x)
    ring = TruncatedDVR(make_field(p, k, 1), e)
    elements = list(itertools.product(range(q_x), repeat=e))
    total = len(elements) ** (d * d)
    cap = get_enumeration_cap()
    if total > cap:
        raise ConfigError(f"{total} matrices exceed the enumeration cap {cap}")
    perms = [(perm, _sign(perm)) for perm in itertools.permutations(range(d))]
    minus_one = ring.constant(ring.base.neg(1))
    count = 0
    for entries in itertools.product(elements, repeat=d * d):
        det = ring.zero
        for perm, sign in perms:
            term = ring.one
            for r in range(d):
                term = ring.mul(term, entries[r * d + perm[r]])
            det = ring.add(det, term if sign > 0 else ring.mul(minus_one, term))
        if ring.is_unit(det):
            count += 1
    logger.debug("unit_count_oracle: d=%d q_x=%d e=%d -> %d", d, q_x, e, count)
    return count


# --- Singular points ---


def singular_count(config: MassConfig) -> Fraction:
    """d(n) h(A) zeta_X(-1) (q_o + 1) prod over Ram - o of (q_x - 1), for d = 2."""
    validate_config(config)
    if config.d != 2 or config.f.entries != (1, 1):
        raise ConfigError("the singular-point count needs d = 2 and f = (1, 1)")
    if not config.level:
        raise ConfigError("the singular-point count needs a nonempty level")
    q = config.q
    dn = d_of_n(config.level, 2, q)
    product = Fraction(dn * h_of_A(config.zeta, config.inf)) * zeta_special(config.zeta, 1)
    product *= q ** config.o.degree + 1
    for x in ramification(config.algebra):
        if x != config.o:
            product *= q ** x.degree - 1
    expected = dn * mass(config).mass
    if product != expected:
        raise InternalCheckError(f"singular count {product} != d(n) * Mass(1, 1) = {expected}")
    logger.info("singular_count: d(n)=%d count=%s", dn, product)
    return product
