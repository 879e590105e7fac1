"""Request and result bodies for every CLI subcommand."""

from typing import Any, Optional

from pydantic import BaseModel, Field, model_validator

from packages.shared.constants import Command
from packages.shared.types import (
    AlgebraPayload,
    CountsPayload,
    CurvePayload,
    ErrorItem,
    LevelPayload,
    PlacePayload,
    RationalPayload,
    TypeVectorPayload,
)


# --- Requests ---


class ZetaRequest(BaseModel):
    curve: CurvePayload
    specials: list[int] = Field(default_factory=lambda: [1, 2], description="i for zeta(-i)")
    places_upto: int = Field(default=6, ge=1, le=12)
    workers: Optional[int] = Field(default=None, ge=1)


class OrderRequest(TypeVectorPayload):
    q: int = Field(ge=2)
    N: int = Field(ge=1)
    samples: int = Field(default=25, ge=0, description="Random products checked on top of basis pairs")


class CentralizerRequest(TypeVectorPayload):
    q: int = Field(ge=2)
    N: int = Field(ge=2)


class CurveSource(BaseModel):
    """Exactly one of a curve model or a list of point counts."""

    curve: Optional[CurvePayload] = None
    counts: Optional[CountsPayload] = None

    @model_validator(mode="after")
    def _one_source(self) -> "CurveSource":
        if (self.curve is None) == (self.counts is None):
            raise ValueError("give exactly one of 'curve' and 'counts'")
        return self


class MassRequest(CurveSource):
    inf: PlacePayload
    o: PlacePayload
    algebra: AlgebraPayload
    f: list[int]
    level: list[LevelPayload] = Field(default_factory=list)
    table: bool = Field(default=False, description="Also list Mass(f) for every type")


class SingularRequest(CurveSource):
    inf: PlacePayload
    o: PlacePayload
    algebra: AlgebraPayload
    level: list[LevelPayload] = Field(min_length=1)


class InvariantsRequest(BaseModel):
    algebra: AlgebraPayload
    o: PlacePayload
    inf: PlacePayload
    curve: Optional[CurvePayload] = None
    counts: Optional[CountsPayload] = None


# --- Results ---


class ZetaResult(BaseModel):
    q: int
    genus: int
    counts: list[int]
    numerator: list[int]
    class_number: int
    specials: dict[str, RationalPayload]
    places_by_degree: dict[str, int]
    functional_equation: bool
    hasse_weil: bool
    euler_product: bool


class ClosurePayload(BaseModel):
    closed: bool
    contains_identity: bool
    basis_products: int
    sampled_products: int


class ConjugationPayload(BaseModel):
    target: list[int]
    u: list[list[list[int]]] = Field(description="Entries as pi-digit lists of F_q encodings")
    checked: int
    valid: bool


class OrderResult(BaseModel):
    f: list[int]
    dimension: int
    member_count: int
    chain_type: list[int]
    stabilizer_dimension: int
    stabilizer_matches: bool
    closure: ClosurePayload
    conjugation: Optional[ConjugationPayload] = None


class CentralizerResult(BaseModel):
    f: list[int]
    dimension: int
    expected_dimension: int
    target: list[int]
    reversed_target: list[int]
    rotation_steps: Optional[int] = None
    pairs_checked: int
    contains_identity: bool
    closed: bool
    bijective: bool
    anti_multiplicative: bool
    conjugate_to_source: bool
    valid: bool


class MassTableRow(BaseModel):
    f: list[int]
    mass: RationalPayload


class MassResult(BaseModel):
    t_super_o: int
    t_sub_o: int
    h_of_A: int
    zeta_product: RationalPayload
    mass: RationalPayload
    lower_bound: RationalPayload
    upper_bound: RationalPayload
    extrapolated: bool
    d_of_n: Optional[int] = None
    table: Optional[list[MassTableRow]] = None
    table_total: Optional[RationalPayload] = None
    table_upper_bound: Optional[RationalPayload] = None


class SingularResult(BaseModel):
    d_of_n: int
    mass: RationalPayload
    singular_count: RationalPayload
    identity_holds: bool
    extrapolated: bool


class InvariantsResult(BaseModel):
    ramification: list[PlacePayload]
    global_index: int
    is_division_algebra: bool
    bar_exceptional: Optional[AlgebraPayload] = None
    bar_supersingular: Optional[AlgebraPayload] = None
    end_algebra: Optional[AlgebraPayload] = None
    notes: list[str] = Field(default_factory=list)


# --- Envelope ---


class Report(BaseModel):
    command: Command
    version: str
    seed: int
    config: dict[str, Any]
    result: Optional[dict[str, Any]] = None
    errors: Optional[list[ErrorItem]] = None


REQUESTS: dict[Command, type[BaseModel]] = {
    Command.ZETA: ZetaRequest,
    Command.ORDER: OrderRequest,
    Command.CENTRALIZER: CentralizerRequest,
    Command.MASS: MassRequest,
    Command.SINGULAR: SingularRequest,
    Command.INVARIANTS: InvariantsRequest,
}

RESULTS: dict[Command, type[BaseModel]] = {
    Command.ZETA: ZetaResult,
    Command.ORDER: OrderResult,
    Command.CENTRALIZER: CentralizerResult,
    Command.MASS: MassResult,
    Command.SINGULAR: SingularResult,
    Command.INVARIANTS: InvariantsResult,
}
