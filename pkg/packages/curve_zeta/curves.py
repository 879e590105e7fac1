"""Curve models over F_q and exhaustive point counting.

Supported models:

- ``ProjectiveLine``: N_m = q^m + 1.
- ``EllipticWeierstrass``: y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, nonzero discriminant.
- ``Hyperelliptic``: y^2 + h(x) y = f(x) with g = (deg f - 1) // 2.

Points at infinity for y^2 + h y = f: with c the x^(g+1) coefficient of h and a the
x^(2g+2) coefficient of f, they are the roots of Y^2 + cY - a over F_{q^m}. That
gives exactly one point when deg f is odd. For even deg f a caller may fix the
number of rational points at infinity (0, 1 or 2); the count over F_{q^m} then
follows (0 -> 0 for odd m and 2 for even m), and the zeta pipeline checks the
choice against the functional equation.

Affine counting walks x over F_{q^m}. For odd p, each x has 1 + chi(h^2 + 4f) roots.
For p = 2, each x has one root when h(x) = 0, otherwise two or none according to
the absolute trace of f/h^2.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from packages.field_arith.field import FieldSpec, embedding, make_field
from packages.shared.constants import CurveKind
from packages.shared.errors import CurveError
from packages.shared.settings import get_enumeration_cap, get_point_count_workers

logger = logging.getLogger(__name__)

Poly = tuple[int, ...]  # field encodings, low degree first


# --- Polynomial helpers over a FieldSpec ---


def _trim(a: Sequence[int]) -> Poly:
    out = list(a)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_degree(a: Sequence[int]) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(_trim(a)) - 1


def poly_add(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Poly:
    n = max(len(a), len(b))
    return _trim(
        spec.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_scale(spec: FieldSpec, c: int, a: Sequence[int]) -> Poly:
    return _trim(spec.mul(c, x) for x in a)


def poly_mul(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = _trim(a), _trim(b)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = spec.add(out[i + j], spec.mul(x, y))
    return _trim(out)


def poly_derivative(spec: FieldSpec, a: Sequence[int]) -> Poly:
    return _trim(spec.mul(spec.scalar(i), c) for i, c in enumerate(a))[1:] if len(a) > 1 else ()


def poly_divmod(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(_trim(a))
    quo = [0] * max(len(rem) - len(b) + 1, 0)
    lead_inv = spec.inv(b[-1])
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        coeff = spec.mul(rem[-1], lead_inv)
        quo[shift] = coeff
        for i, c in enumerate(b):
            rem[shift + i] = spec.sub(rem[shift + i], spec.mul(coeff, c))
        rem = list(_trim(rem))
    return _trim(quo), tuple(rem)


def poly_gcd(spec: FieldSpec, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(spec, a, b)[1]
    if not a:
        return ()
    return poly_scale(spec, spec.inv(a[-1]), a)


def poly_eval(spec: FieldSpec, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = spec.add(spec.mul(acc, x), c)
    return acc


# --- Models ---


@dataclass(frozen=True)
class ProjectiveLine:
    base: FieldSpec
    kind: CurveKind = field(default=CurveKind.PROJECTIVE_LINE, init=False)

    @property
    def genus(self) -> int:
        return 0


@dataclass(frozen=True)
class Hyperelliptic:
    """y^2 + h(x) y = f(x) over ``base``; ``infinity_points`` overrides the rule at infinity."""

    base: FieldSpec
    f: Poly
    h: Poly = ()
    infinity_points: Optional[int] = None
    kind: CurveKind = field(default=CurveKind.HYPERELLIPTIC, init=False)

    @property
    def genus(self) -> int:
        return (poly_degree(self.f) - 1) // 2


@dataclass(frozen=True)
class EllipticWeierstrass(Hyperelliptic):
    """Weierstrass cubic, stored in the y^2 + h y = f shape."""

    a: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)  # a1, a2, a3, a4, a6
    kind: CurveKind = field(default=CurveKind.ELLIPTIC, init=False)


CurveModel = Union[ProjectiveLine, Hyperelliptic, EllipticWeierstrass]


def projective_line(base: FieldSpec) -> ProjectiveLine:
    return ProjectiveLine(base)


def weierstrass_discriminant(base: FieldSpec, a: Sequence[int]) -> int:
    a1, a2, a3, a4, a6 = a
    F = base
    c = F.scalar
    b2 = F.add(F.mul(a1, a1), F.mul(c(4), a2))
    b4 = F.add(F.mul(c(2), a4), F.mul(a1, a3))
    b6 = F.add(F.mul(a3, a3), F.mul(c(4), a6))
    b8 = F.sub(
        F.add(F.add(F.mul(F.mul(a1, a1), a6), F.mul(c(4), F.mul(a2, a6))), F.mul(a2, F.mul(a3, a3))),
        F.add(F.mul(a1, F.mul(a3, a4)), F.mul(a4, a4)),
    )
    terms = [
        F.neg(F.mul(F.mul(b2, b2), b8)),
        F.neg(F.mul(c(8), F.mul(b4, F.mul(b4, b4)))),
        F.neg(F.mul(c(27), F.mul(b6, b6))),
        F.mul(c(9), F.mul(b2, F.mul(b4, b6))),
    ]
    total = 0
    for t in terms:
        total = F.add(total, t)
    return total


def elliptic_curve(base: FieldSpec, a: Sequence[int]) -> EllipticWeierstrass:
    if len(a) != 5:
        raise CurveError("a Weierstrass model needs a1, a2, a3, a4, a6")
    a = tuple(a)
    for v in a:
        if not 0 <= v < base.order:
            raise CurveError(f"coefficient {v} is not an element of F_{base.order}")
    if weierstrass_discriminant(base, a) == 0:
        raise CurveError("Weierstrass discriminant vanishes: the cubic is singular")
    a1, a2, a3, a4, a6 = a
    return EllipticWeierstrass(
        base=base, f=(a6, a4, a2, 1), h=_trim((a3, a1)), a=a,
    )


def hyperelliptic_curve(
    base: FieldSpec,
    f: Sequence[int],
    h: Sequence[int] = (),
    genus: Optional[int] = None,
    infinity_points: Optional[int] = None,
) -> Hyperelliptic:
    """Validated y^2 + h(x) y = f(x)."""
    f, h = _trim(f), _trim(h)
    for v in f + h:
        if not 0 <= v < base.order:
            raise CurveError(f"coefficient {v} is not an element of F_{base.order}")
    deg_f, deg_h = poly_degree(f), poly_degree(h)
    if deg_f < 3:
        raise CurveError(f"deg f must be at least 3, got {deg_f}")
    g = (deg_f - 1) // 2
    if genus is not None and genus != g:
        raise CurveError(f"stated genus {genus} does not match deg f = {deg_f} (genus {g})")
    if deg_h > g + 1:
        raise CurveError(f"deg h must be at most g + 1 = {g + 1}, got {deg_h}")
    if deg_f % 2 == 1 and deg_h > g:
        raise CurveError("for odd deg f the model needs deg h <= g")
    if base.p == 2:
        if deg_h < 0:
            raise CurveError("in characteristic 2 the model needs h != 0")
        if deg_f % 2 == 0 and deg_h != g + 1:
            raise CurveError("in characteristic 2 an even-degree f needs deg h = g + 1")
        # singular points: h(x) = 0 and f'(x)^2 + h'(x)^2 f(x) = 0
        df, dh = poly_derivative(base, f), poly_derivative(base, h)
        witness = poly_add(base, poly_mul(base, df, df), poly_mul(base, poly_mul(base, dh, dh), f))
        if poly_degree(poly_gcd(base, h, witness)) > 0:
            raise CurveError("the affine model is singular")
    else:
        disc = poly_add(base, poly_mul(base, h, h), poly_scale(base, base.scalar(4), f))
        deg_disc = poly_degree(disc)
        if deg_disc not in (2 * g + 1, 2 * g + 2):
            raise CurveError(f"h^2 + 4f has degree {deg_disc}, expected {2 * g + 1} or {2 * g + 2}")
        if poly_degree(poly_gcd(base, disc, poly_derivative(base, disc))) > 0:
            raise CurveError("h^2 + 4f is not squarefree: the affine model is singular")
    if infinity_points is not None:
        if deg_f % 2 == 1:
            if infinity_points != 1:
                raise CurveError("odd deg f has exactly one point at infinity")
        elif infinity_points not in (0, 1, 2):
            raise CurveError("infinity_points must be 0, 1 or 2")
    return Hyperelliptic(base=base, f=f, h=h, infinity_points=infinity_points)


# --- Counting ---


def _extension(curve: CurveModel, m: int) -> FieldSpec:
    base = curve.base
    cap = get_enumeration_cap()
    if base.q ** m > cap:
        raise CurveError(f"q^m = {base.q ** m} exceeds the enumeration cap {cap}")
    return make_field(base.p, base.e, m)


def _lift(curve: Hyperelliptic, ext: FieldSpec) -> tuple[Poly, Poly]:
    emb = embedding(curve.base, ext)
    return tuple(emb(c) for c in curve.f), tuple(emb(c) for c in curve.h)


def _quadratic_roots(ext: FieldSpec, c: int, a: int) -> int:
    """Number of roots of Y^2 + cY - a in ``ext``."""
    if ext.p == 2:
        if c == 0:
            return 1
        t = ext.div(a, ext.mul(c, c))
        return 2 if ext.abs_trace(t) == 0 else 0
    disc = ext.add(ext.mul(c, c), ext.mul(ext.scalar(4), a))
    if disc == 0:
        return 1
    return 2 if ext.is_square(disc) else 0


def points_at_infinity(curve: CurveModel, m: int) -> int:
    if isinstance(curve, ProjectiveLine):
        return 1
    g = curve.genus
    if curve.infinity_points is not None:
        chosen = curve.infinity_points
        if chosen == 0:
            return 0 if m % 2 else 2
        return chosen
    ext = _extension(curve, m)
    f, h = _lift(curve, ext)
    c = h[g + 1] if len(h) > g + 1 else 0
    a = f[2 * g + 2] if len(f) > 2 * g + 2 else 0
    return _quadratic_roots(ext, c, a)


def _count_affine_range(ext: FieldSpec, f: Poly, h: Poly, start: int, stop: int) -> int:
    total = 0
    if ext.p == 2:
        for x in range(start, stop):
            hx = poly_eval(ext, h, x)
            if hx == 0:
                total += 1
            else:
                t = ext.div(poly_eval(ext, f, x), ext.mul(hx, hx))
                total += 2 if ext.abs_trace(t) == 0 else 0
    else:
        four = ext.scalar(4)
        for x in range(start, stop):
            hx = poly_eval(ext, h, x)
            disc = ext.add(ext.mul(hx, hx), ext.mul(four, poly_eval(ext, f, x)))
            if disc == 0:
                total += 1
            elif ext.is_square(disc):
                total += 2
    return total


def _count_shard(args: tuple[FieldSpec, Poly, Poly, int, int]) -> int:
    return _count_affine_range(*args)


def count_points(curve: CurveModel, m: int, workers: Optional[int] = None) -> int:
    """N_m = #X(F_{q^m}) by walking x over F_{q^m}."""
    if m < 1:
        raise CurveError(f"extension degree must be positive, got {m}")
    if isinstance(curve, ProjectiveLine):
        ext = _extension(curve, m)
        return ext.order + 1
    ext = _extension(curve, m)
    f, h = _lift(curve, ext)
    workers = workers or get_point_count_workers()
    if workers > 1 and ext.order >= 4 * workers:
        bounds = [ext.order * i // workers for i in range(workers + 1)]
        shards = [(ext, f, h, bounds[i], bounds[i + 1]) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            affine = sum(pool.map(_count_shard, shards))
        logger.debug("count_points: m=%d sharded over %d workers", m, workers)
    else:
        affine = _count_affine_range(ext, f, h, 0, ext.order)
    return affine + points_at_infinity(curve, m)


def brute_force_count(curve: CurveModel, m: int) -> int:
    """Oracle: walk every (x, y) pair and test the equation directly."""
    ext = _extension(curve, m)
    if isinstance(curve, ProjectiveLine):
        return ext.order + 1
    cap = get_enumeration_cap()
    if ext.order ** 2 > cap:
        raise CurveError(f"(q^m)^2 = {ext.order ** 2} exceeds the enumeration cap {cap}")
    f, h = _lift(curve, ext)
    total = 0
    for x in range(ext.order):
        hx, fx = poly_eval(ext, h, x), poly_eval(ext, f, x)
        for y in range(ext.order):
            lhs = ext.add(ext.mul(y, y), ext.mul(hx, y))
            if lhs == fx:
                total += 1
    return total + points_at_infinity(curve, m)
