"""Finite fields F_{q^m} in a fixed polynomial basis over F_p.

An element of F_{p^n} (n = e*m) is stored as the polynomial sum c_i x^i modulo a
monic irreducible of degree n over F_p. Hot paths work on the integer encoding
``sum c_i p^i`` through ``FieldSpec`` methods; ``FieldElement`` is the typed,
operator-overloaded wrapper used at API boundaries and in tests.

Modulus choice is deterministic: among monic polynomials of degree n, ordered
by the encoding of their lower coefficients, the first irreducible one wins.
Over F_2 this gives x^2+x+1 and x^3+x+1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping, Sequence

from sympy import Poly, factorint, isprime
from sympy.abc import x as _x

from packages.field_arith.linalg import Row
from packages.shared.errors import FieldError
from packages.shared.settings import (
    get_enumeration_cap,
    get_field_degree_cap,
    get_table_cap,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldSpec:
    """F_{q^m} with q = p^e, presented as F_p[x]/(modulus).

    ``modulus`` lists coefficients low degree first and includes the leading 1.
    """

    p: int
    e: int
    m: int
    modulus: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.e * self.m

    @property
    def q(self) -> int:
        """Size of the base field F_q whose Frobenius is ``frob``."""
        return self.p ** self.e

    @property
    def order(self) -> int:
        return self.p ** self.degree

    # --- Encoding ---

    def to_digits(self, value: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.degree):
            value, r = divmod(value, p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        p = self.p
        value = 0
        for c in reversed(digits):
            value = value * p + (c % p)
        return value

    def scalar(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    # --- Arithmetic on encodings ---

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self._digits(a), self._digits(b)
        return self.from_digits([x + y for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        if self.degree == 1:
            return (-a) % self.p
        return self.from_digits([-c for c in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.degree == 1:
            return (a * b) % self.p
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(log[a] + log[b]) % (self.order - 1)]
        return self._poly_mulmod(a, b)

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            return 0
        n = self.order - 1
        if self.degree == 1:
            return pow(a, k % n, self.p) if n > 1 else 1
        tables = self._tables
        if tables is not None:
            exp, log = tables
            return exp[(log[a] * k) % n]
        return self._poly_pow(a, k % n)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("inverse of zero")
        if self.degree == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, k: int = 1) -> int:
        """a^(q^k), the k-th power of the q-Frobenius."""
        if a == 0 or a == 1:
            return a
        k %= self.m
        if k == 0:
            return a
        n = self.order - 1
        return self.pow(a, pow(self.q, k, n))

    def abs_trace(self, a: int) -> int:
        """Trace down to F_p, returned as an element of F_p."""
        total = 0
        term = a
        for _ in range(self.degree):
            total = self.add(total, term)
            term = self.pow(term, self.p)
        return total

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.order - 1) // 2) == 1

    # --- Subfield F_q ---

    @cached_property
    def base_elements(self) -> tuple[int, ...]:
        """Encodings of the elements of F_q inside this field."""
        if self.m == 1:
            return tuple(range(self.order))
        base = make_field(self.p, self.e, 1)
        emb = embedding(base, self)
        return tuple(sorted(emb(c) for c in range(base.order)))

    @cached_property
    def base_basis(self) -> tuple[int, ...]:
        """An F_p-basis of F_q inside this field, starting with 1."""
        if self.m == 1:
            return tuple(self.p ** j for j in range(self.degree))
        base = make_field(self.p, self.e, 1)
        emb = embedding(base, self)
        return tuple(emb(self.p ** j) for j in range(base.degree))

    # --- Internals ---

    def _digits(self, a: int) -> list[int]:
        table = self._digit_table
        if table is not None:
            return table[a]
        return self.to_digits(a)

    @cached_property
    def _digit_table(self) -> list[list[int]] | None:
        if self.order > get_table_cap():
            return None
        return [self.to_digits(v) for v in range(self.order)]

    def _poly_mulmod(self, a: int, b: int) -> int:
        p, n = self.p, self.degree
        da, db = self.to_digits(a), self.to_digits(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] += x * y
        mod = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(n + 1):
                    prod[k - n + i] -= c * mod[i]
        return self.from_digits(prod[:n])

    def _poly_pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._poly_mulmod(result, base)
            base = self._poly_mulmod(base, base)
            k >>= 1
        return result

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]] | None:
        if self.degree == 1 or self.order > get_table_cap():
            return None
        g = _primitive_encoding(self)
        n = self.order - 1
        exp = [0] * n
        log = [0] * self.order
        value = 1
        for i in range(n):
            exp[i] = value
            log[value] = i
            value = self._poly_mulmod(value, g)
        logger.debug("Built exp/log tables for F_%d^%d", self.p, self.degree)
        return exp, log


def _primitive_encoding(spec: FieldSpec) -> int:
    n = spec.order - 1
    if n == 1:
        return 1
    exponents = [n // r for r in factorint(n)]
    for g in range(1, spec.order):
        if all(_slow_pow(spec, g, k) != 1 for k in exponents):
            return g
    raise FieldError(f"no primitive element found for modulus {spec.modulus}")


def _slow_pow(spec: FieldSpec, a: int, k: int) -> int:
    if spec.degree == 1:
        return pow(a, k, spec.p)
    return spec._poly_pow(a, k)


# --- Public API ---


@lru_cache(maxsize=None)
def make_field(p: int, e: int, m: int) -> FieldSpec:
    """F_{q^m} with q = p^e and the first monic irreducible modulus of degree e*m."""
    if not isinstance(p, int) or not isprime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if e < 1 or m < 1:
        raise FieldError(f"exponents must be positive, got e={e}, m={m}")
    n = e * m
    cap = get_field_degree_cap()
    if n > cap:
        raise FieldError(f"degree e*m={n} exceeds the cap {cap}")
    for lower in range(p ** n):
        coeffs = [(lower // p ** i) % p for i in range(n)] + [1]
        if Poly(list(reversed(coeffs)), _x, modulus=p).is_irreducible:
            spec = FieldSpec(p=p, e=e, m=m, modulus=tuple(coeffs))
            logger.debug("make_field(%d, %d, %d): modulus %s", p, e, m, spec.modulus)
            return spec
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")


def parse_prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e."""
    if q < 2:
        raise FieldError(f"q must be a prime power, got {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise FieldError(f"q must be a prime power, got {q}")
    ((p, e),) = factors.items()
    return int(p), int(e)


@dataclass(frozen=True)
class FieldElement:
    """An element of ``spec`` as a coefficient vector over F_p, low degree first."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.spec.degree:
            raise FieldError(
                f"expected {self.spec.degree} coefficients, got {len(self.coeffs)}"
            )
        if any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise FieldError(f"coefficients must lie in [0, {self.spec.p})")

    @classmethod
    def from_int(cls, spec: FieldSpec, value: int) -> FieldElement:
        if not 0 <= value < spec.order:
            raise FieldError(f"{value} does not encode an element of a field of size {spec.order}")
        return cls(spec, tuple(spec.to_digits(value)))

    @classmethod
    def zero(cls, spec: FieldSpec) -> FieldElement:
        return cls.from_int(spec, 0)

    @classmethod
    def one(cls, spec: FieldSpec) -> FieldElement:
        return cls.from_int(spec, 1)

    @classmethod
    def generator(cls, spec: FieldSpec) -> FieldElement:
        """The class of x."""
        return cls.from_int(spec, spec.p if spec.degree > 1 else 1)

    @property
    def value(self) -> int:
        return self.spec.from_digits(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other: object) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("arithmetic between elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.spec.scalar(other)
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def _wrap(self, value: int) -> FieldElement:
        return FieldElement.from_int(self.spec, value)

    def __add__(self, other: object) -> FieldElement:
        return self._wrap(self.spec.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other: object) -> FieldElement:
        return self._wrap(self.spec.sub(self.value, self._coerce(other)))

    def __rsub__(self, other: object) -> FieldElement:
        return self._wrap(self.spec.sub(self._coerce(other), self.value))

    def __mul__(self, other: object) -> FieldElement:
        return self._wrap(self.spec.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> FieldElement:
        return self._wrap(self.spec.div(self.value, self._coerce(other)))

    def __neg__(self) -> FieldElement:
        return self._wrap(self.spec.neg(self.value))

    def __pow__(self, k: int) -> FieldElement:
        if k < 0:
            return self._wrap(self.spec.pow(self.spec.inv(self.value), -k))
        return self._wrap(self.spec.pow(self.value, k))

    def inverse(self) -> FieldElement:
        return self._wrap(self.spec.inv(self.value))

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)} in F_{self.spec.order})"


def frobenius(a: FieldElement, k: int = 1) -> FieldElement:
    """a^(q^k) where q = p^e is the base field of ``a.spec``."""
    return FieldElement.from_int(a.spec, a.spec.frob(a.value, k))


def enumerate_field(spec: FieldSpec) -> Iterator[FieldElement]:
    """Every element once, ordered by integer encoding."""
    cap = get_enumeration_cap()
    if spec.order > cap:
        raise FieldError(f"field of size {spec.order} exceeds the enumeration cap {cap}")
    for value in range(spec.order):
        yield FieldElement.from_int(spec, value)


def trace(a: FieldElement) -> FieldElement:
    """Trace from F_{q^m} down to F_q (an element of the subfield)."""
    spec, total = a.spec, 0
    for i in range(spec.m):
        total = spec.add(total, spec.frob(a.value, i))
    return FieldElement.from_int(spec, total)


def norm(a: FieldElement) -> FieldElement:
    spec, total = a.spec, 1
    for i in range(spec.m):
        total = spec.mul(total, spec.frob(a.value, i))
    return FieldElement.from_int(spec, total)


def primitive_element(spec: FieldSpec) -> FieldElement:
    return FieldElement.from_int(spec, _primitive_encoding(spec))


@dataclass(frozen=True)
class Embedding:
    """F_p-algebra map small -> large sending x to ``root``."""

    small: FieldSpec
    large: FieldSpec
    root: int

    @cached_property
    def _basis_images(self) -> list[int]:
        large, images, power = self.large, [], 1
        for _ in range(self.small.degree):
            images.append(power)
            power = large.mul(power, self.root)
        return images

    def __call__(self, value: int) -> int:
        large, total = self.large, 0
        for c, img in zip(self.small.to_digits(value), self._basis_images):
            if c:
                total = large.add(total, large.mul(large.scalar(c), img))
        return total

    def element(self, a: FieldElement) -> FieldElement:
        if a.spec != self.small:
            raise FieldError("element does not belong to the embedding's source field")
        return FieldElement.from_int(self.large, self(a.value))


@lru_cache(maxsize=None)
def embedding(small: FieldSpec, large: FieldSpec) -> Embedding:
    """Embed ``small`` into ``large`` via the first root of small's modulus."""
    if small.p != large.p or large.degree % small.degree:
        raise FieldError(
            f"F_{small.order} does not embed in F_{large.order}"
        )
    if small.degree == 1:
        return Embedding(small, large, 1)
    cap = get_enumeration_cap()
    if large.order > cap:
        raise FieldError(f"field of size {large.order} exceeds the enumeration cap {cap}")
    for candidate in range(large.order):
        if _evaluate(large, small.modulus, candidate) == 0:
            logger.debug(
                "embedding F_%d -> F_%d: x -> %d", small.order, large.order, candidate
            )
            return Embedding(small, large, candidate)
    raise FieldError(f"modulus {small.modulus} has no root in F_{large.order}")


def _evaluate(spec: FieldSpec, coeffs: Sequence[int], at: int) -> int:
    """Horner evaluation of a polynomial with F_p coefficients."""
    acc = 0
    for c in reversed(coeffs):
        acc = spec.add(spec.mul(acc, at), spec.scalar(c))
    return acc


# --- Flattening for linear algebra over F_p ---


def scale_flat(spec: FieldSpec, row: Mapping[int, int], beta: int) -> Row:
    """Multiply a flattened vector of ``spec`` elements by ``beta``.

    Column ``u`` holds digit ``u % degree`` of element ``u // degree``.
    """
    n = spec.degree
    blocks: dict[int, list[int]] = {}
    for col, val in row.items():
        block, digit = divmod(col, n)
        blocks.setdefault(block, [0] * n)[digit] = val
    out: Row = {}
    for block, digits in blocks.items():
        scaled = spec.mul(spec.from_digits(digits), beta)
        for j, c in enumerate(spec.to_digits(scaled)):
            if c:
                out[block * n + j] = c
    return out


def flatten_into(spec: FieldSpec, row: Row, block: int, value: int) -> None:
    """Write the F_p digits of ``value`` at element slot ``block``."""
    n = spec.degree
    for j, c in enumerate(spec.to_digits(value)):
        if c:
            row[block * n + j] = c


def unflatten(spec: FieldSpec, row: Mapping[int, int], block: int) -> int:
    n = spec.degree
    return spec.from_digits([row.get(block * n + j, 0) for j in range(n)])
