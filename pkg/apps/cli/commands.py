"""Subcommand handlers: request payload -> library calls -> result payload."""

import logging
import random
from typing import Callable, Optional, Sequence

from apps.cli.schemas import (
    CentralizerRequest,
    CentralizerResult,
    ClosurePayload,
    ConjugationPayload,
    CurveSource,
    InvariantsRequest,
    InvariantsResult,
    MassRequest,
    MassResult,
    MassTableRow,
    OrderRequest,
    OrderResult,
    SingularRequest,
    SingularResult,
    ZetaRequest,
    ZetaResult,
)
from packages.csa_invariants.invariants import (
    AlgebraSpec,
    PlaceRef,
    bar_algebra_exceptional,
    bar_algebra_supersingular,
    end_algebra_invariants,
    exceptional_end_source,
    global_index,
    is_division_algebra,
    make_algebra,
    ramification,
    validate_places,
)
from packages.curve_zeta.curves import (
    CurveModel,
    elliptic_curve,
    hyperelliptic_curve,
    projective_line,
)
from packages.curve_zeta.zeta import (
    ZetaData,
    compute_zeta,
    euler_product_check,
    functional_equation_holds,
    hasse_weil_holds,
    places_by_degree,
    zeta_from_counts,
)
from packages.dieudonne.embedding import build_embedding, centralizer_basis, match_block_order
from packages.field_arith.field import FieldSpec, make_field, parse_prime_power
from packages.local_orders.dvr import TruncatedDVR
from packages.local_orders.lattices import type_of_chain
from packages.local_orders.orders import (
    BlockOrder,
    TypeVector,
    block_membership,
    chain_stabilizer,
    closure_check,
    conjugate_type,
    count_members,
    in_fq_span,
    order_basis,
    standard_chain,
)
from packages.mass_formula.mass import (
    LevelPlace,
    MassConfig,
    mass,
    mass_table,
    singular_count,
)
from packages.shared.constants import Command, CurveKind
from packages.shared.errors import AlgebraError, CurveError
from packages.shared.types import (
    AlgebraPayload,
    CurvePayload,
    FieldValue,
    InvariantPayload,
    LevelPayload,
    PlacePayload,
    RationalPayload,
)

logger = logging.getLogger(__name__)


# --- Payload conversion ---


def base_field(q: int) -> FieldSpec:
    p, e = parse_prime_power(q)
    return make_field(p, e, 1)


def field_value(base: FieldSpec, value: FieldValue) -> int:
    if isinstance(value, int):
        if not 0 <= value < base.order:
            raise CurveError(f"{value} does not encode an element of F_{base.order}")
        return value
    if len(value) > base.degree or any(not 0 <= c < base.p for c in value):
        raise CurveError(f"{value} is not a coefficient list over F_{base.p} of length <= {base.degree}")
    return base.from_digits(value)


def curve_from_payload(payload: CurvePayload) -> CurveModel:
    base = base_field(payload.q)
    if payload.kind == CurveKind.PROJECTIVE_LINE:
        return projective_line(base)
    if payload.kind == CurveKind.ELLIPTIC:
        return elliptic_curve(base, [field_value(base, v) for v in payload.a])
    return hyperelliptic_curve(
        base,
        [field_value(base, v) for v in payload.f],
        [field_value(base, v) for v in payload.h],
        genus=payload.genus,
        infinity_points=payload.infinity_points,
    )


def zeta_from_payload(payload: CurvePayload, specials: Sequence[int] = (1, 2), workers: Optional[int] = None) -> ZetaData:
    curve = curve_from_payload(payload)
    return compute_zeta(curve, extra=payload.extra_counts, specials=specials, workers=workers)


def zeta_from_source(source: CurveSource) -> ZetaData:
    if source.curve is not None:
        return zeta_from_payload(source.curve)
    return zeta_from_counts(source.counts.counts, source.counts.q, source.counts.genus)


def place_ref(payload: PlacePayload) -> PlaceRef:
    return PlaceRef(payload.id, payload.degree)


def place_payload(place: PlaceRef) -> PlacePayload:
    return PlacePayload(id=place.id, degree=place.degree)


def algebra_from_payload(payload: AlgebraPayload) -> AlgebraSpec:
    table = {}
    for item in payload.invariants:
        place = place_ref(item.place)
        if place in table:
            raise AlgebraError(f"place {place.id!r} is listed twice")
        table[place] = item.value.to_fraction()
    return make_algebra(payload.d, table)


def algebra_payload(spec: AlgebraSpec) -> AlgebraPayload:
    return AlgebraPayload(
        d=spec.d,
        invariants=[
            InvariantPayload(place=place_payload(x), value=RationalPayload.from_fraction(v))
            for x, v in spec.invariants
        ],
    )


def level_from_payload(level: Sequence[LevelPayload]) -> tuple[LevelPlace, ...]:
    return tuple(LevelPlace(place_ref(lv.place), lv.e) for lv in level)


# --- Handlers ---


def handle_zeta(req: ZetaRequest, rng: random.Random) -> ZetaResult:
    z = zeta_from_payload(req.curve, specials=req.specials, workers=req.workers)
    return ZetaResult(
        q=z.q,
        genus=z.g,
        counts=list(z.counts),
        numerator=list(z.numerator),
        class_number=z.class_number,
        specials={str(-i): RationalPayload.from_fraction(v) for i, v in sorted(z.specials.items())},
        places_by_degree={str(r): n for r, n in places_by_degree(z, req.places_upto).items()},
        functional_equation=functional_equation_holds(z.numerator, z.q, z.g),
        hasse_weil=hasse_weil_holds(z),
        euler_product=euler_product_check(z, req.places_upto),
    )


def handle_order(req: OrderRequest, rng: random.Random) -> OrderResult:
    f = TypeVector.of(req.f)
    ring = TruncatedDVR(base_field(req.q), req.N)
    chain = standard_chain(f, ring)
    stabilizer = chain_stabilizer(chain)
    basis = order_basis(f, ring)
    dimension = BlockOrder(f, ring).dimension()
    matches = (
        len(stabilizer) == dimension
        and all(block_membership(g, f, ring) for g in stabilizer)
        and all(in_fq_span(ring, stabilizer, X) for X in basis)
    )
    closure = closure_check(f, ring, rng, samples=req.samples)
    conjugation = None
    if req.N >= 2:
        cert = conjugate_type(f, ring)
        conjugation = ConjugationPayload(
            target=list(cert.target.entries),
            u=ring.mat_to_digits(cert.u),
            checked=cert.checked,
            valid=cert.valid,
        )
    return OrderResult(
        f=list(f.entries),
        dimension=dimension,
        member_count=count_members(f, ring),
        chain_type=list(type_of_chain(chain)),
        stabilizer_dimension=len(stabilizer),
        stabilizer_matches=matches,
        closure=ClosurePayload(
            closed=closure.closed,
            contains_identity=closure.contains_identity,
            basis_products=closure.basis_products,
            sampled_products=closure.sampled_products,
        ),
        conjugation=conjugation,
    )


def handle_centralizer(req: CentralizerRequest, rng: random.Random) -> CentralizerResult:
    E = build_embedding(req.d, TypeVector.of(req.f), req.q, req.N)
    cert = match_block_order(centralizer_basis(E), E)
    return CentralizerResult(
        f=list(cert.source.entries),
        dimension=cert.dimension,
        expected_dimension=cert.expected_dimension,
        target=list(cert.target.entries),
        reversed_target=list(cert.reversed_target.entries),
        rotation_steps=cert.rotation_steps,
        pairs_checked=cert.pairs_checked,
        contains_identity=cert.contains_identity,
        closed=cert.closed,
        bijective=cert.bijective,
        anti_multiplicative=cert.anti_multiplicative,
        conjugate_to_source=cert.conjugate_to_source,
        valid=cert.valid,
    )


def _mass_config(req, f: Sequence[int]) -> MassConfig:
    return MassConfig(
        zeta=zeta_from_source(req),
        inf=place_ref(req.inf),
        o=place_ref(req.o),
        algebra=algebra_from_payload(req.algebra),
        f=TypeVector.of(f),
        level=level_from_payload(req.level),
    )


def handle_mass(req: MassRequest, rng: random.Random) -> MassResult:
    config = _mass_config(req, req.f)
    report = mass(config)
    result = MassResult(
        t_super_o=report.t_super_o,
        t_sub_o=report.t_sub_o,
        h_of_A=report.h_of_A,
        zeta_product=RationalPayload.from_fraction(report.zeta_product),
        mass=RationalPayload.from_fraction(report.mass),
        lower_bound=RationalPayload.from_fraction(report.lower_bound),
        upper_bound=RationalPayload.from_fraction(report.upper_bound),
        extrapolated=report.extrapolated,
        d_of_n=report.d_of_n,
    )
    if req.table:
        table = mass_table(config)
        result.table = [
            MassTableRow(f=list(f), mass=RationalPayload.from_fraction(m)) for f, m in table.entries
        ]
        result.table_total = RationalPayload.from_fraction(table.total)
        result.table_upper_bound = RationalPayload.from_fraction(table.upper_bound)
    return result


def handle_singular(req: SingularRequest, rng: random.Random) -> SingularResult:
    config = _mass_config(req, (1,) * req.algebra.d)
    count = singular_count(config)
    report = mass(config)
    return SingularResult(
        d_of_n=report.d_of_n,
        mass=RationalPayload.from_fraction(report.mass),
        singular_count=RationalPayload.from_fraction(count),
        identity_holds=count == report.d_of_n * report.mass,
        extrapolated=report.extrapolated,
    )


def handle_invariants(req: InvariantsRequest, rng: random.Random) -> InvariantsResult:
    D = algebra_from_payload(req.algebra)
    o, inf = place_ref(req.o), place_ref(req.inf)
    if req.curve is not None or req.counts is not None:
        zeta = zeta_from_source(CurveSource(curve=req.curve, counts=req.counts))
        validate_places(list(D.places) + [o, inf], zeta)
    result = InvariantsResult(
        ramification=[place_payload(x) for x in sorted(ramification(D))],
        global_index=global_index(D),
        is_division_algebra=is_division_algebra(D),
    )
    try:
        result.bar_exceptional = algebra_payload(bar_algebra_exceptional(D, o, inf))
    except AlgebraError as exc:
        result.notes.append(f"exceptional: {exc}")
    try:
        result.bar_supersingular = algebra_payload(bar_algebra_supersingular(D, o, inf))
    except AlgebraError as exc:
        result.notes.append(f"supersingular: {exc}")
    result.end_algebra = algebra_payload(
        end_algebra_invariants(exceptional_end_source(o, inf, D.d), D)
    )
    return result


HANDLERS: dict[Command, Callable] = {
    Command.ZETA: handle_zeta,
    Command.ORDER: handle_order,
    Command.CENTRALIZER: handle_centralizer,
    Command.MASS: handle_mass,
    Command.SINGULAR: handle_singular,
    Command.INVARIANTS: handle_invariants,
}
