from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from packages.shared.constants import CurveKind

# A field element is either its integer encoding or its coefficient list over F_p,
# low degree first.
FieldValue = Union[int, list[int]]


class RationalPayload(BaseModel):
    """
    Exact rational number on the wire.

    Both parts are decimal strings so values never pass through floating point.
    The fraction must be reduced and the denominator positive.
    """

    num: str = Field(description="Numerator as a decimal string")
    den: str = Field(default="1", description="Positive denominator as a decimal string")

    @field_validator("num", "den")
    @classmethod
    def _decimal(cls, v: str) -> str:
        body = v[1:] if v.startswith("-") else v
        if not body.isdigit():
            raise ValueError(f"{v!r} is not a decimal integer")
        return v

    @model_validator(mode="after")
    def _reduced(self) -> "RationalPayload":
        num, den = int(self.num), int(self.den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        value = Fraction(num, den)
        if (value.numerator, value.denominator) != (num, den):
            raise ValueError(f"{num}/{den} is not reduced")
        return self

    @classmethod
    def from_fraction(cls, value: Union[Fraction, int]) -> "RationalPayload":
        value = Fraction(value)
        return cls(num=str(value.numerator), den=str(value.denominator))

    def to_fraction(self) -> Fraction:
        return Fraction(int(self.num), int(self.den))


class PlacePayload(BaseModel):
    """A closed point of the curve, named by a label and its degree."""

    id: str = Field(min_length=1, description="Label, unique within a request")
    degree: int = Field(default=1, ge=1, description="Degree over F_q")


class InvariantPayload(BaseModel):
    place: PlacePayload
    value: RationalPayload = Field(description="Local invariant, reduced into [0, 1) on use")


class AlgebraPayload(BaseModel):
    """A central simple algebra of dimension d^2 given by its nonzero local invariants."""

    d: int = Field(ge=1)
    invariants: list[InvariantPayload] = Field(default_factory=list)


class LevelPayload(BaseModel):
    place: PlacePayload
    e: int = Field(default=1, ge=1, description="Multiplicity of the place in the level")


class CurvePayload(BaseModel):
    """
    A curve over F_q.

    - projective_line: no further fields.
    - elliptic: ``a`` = [a1, a2, a3, a4, a6] of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
    - hyperelliptic: y^2 + h(x) y = f(x), coefficients low degree first.
    """

    kind: CurveKind
    q: int = Field(ge=2, description="Size of the constant field, a prime power")
    a: Optional[list[FieldValue]] = None
    f: Optional[list[FieldValue]] = None
    h: list[FieldValue] = Field(default_factory=list)
    genus: Optional[int] = Field(default=None, ge=0)
    infinity_points: Optional[int] = Field(default=None, ge=0, le=2)
    extra_counts: int = Field(default=2, ge=0, le=6, description="Counts computed past m = 2g")

    @model_validator(mode="after")
    def _fields_for_kind(self) -> "CurvePayload":
        if self.kind == CurveKind.ELLIPTIC and (self.a is None or len(self.a) != 5):
            raise ValueError("an elliptic curve needs a = [a1, a2, a3, a4, a6]")
        if self.kind == CurveKind.HYPERELLIPTIC and not self.f:
            raise ValueError("a hyperelliptic curve needs f")
        return self


class CountsPayload(BaseModel):
    """Point counts N_1..N_m of a curve of genus g, used in place of a curve model."""

    q: int = Field(ge=2)
    genus: int = Field(ge=0)
    counts: list[int] = Field(min_length=1)


class TypeVectorPayload(BaseModel):
    d: int = Field(ge=1)
    f: list[int]

    @model_validator(mode="after")
    def _shape(self) -> "TypeVectorPayload":
        if len(self.f) != self.d:
            raise ValueError(f"f has length {len(self.f)}, expected d = {self.d}")
        if any(x < 0 for x in self.f):
            raise ValueError(f"f has a negative entry: {self.f}")
        if sum(self.f) != self.d:
            raise ValueError(f"f sums to {sum(self.f)}, expected d = {self.d}")
        return self


class ErrorItem(BaseModel):
    """One entry of the machine-readable error list."""

    type: str
    loc: list[Union[str, int]] = Field(default_factory=list)
    msg: str
