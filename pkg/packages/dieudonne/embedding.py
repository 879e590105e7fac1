"""The matrix embedding of the local division algebra and its centralizer.

The division algebra of invariant 1/d over F_q((pi)) is R_d<<Pi>> with
Pi a = Fr_q(a) Pi and Pi^d = pi, R_d the ring of integers of the degree-d
unramified extension. For a type f it maps into d x d matrices over k{{tau}}:

    Phi(Pi)     = tau * Id
    Phi(lambda) = diag(lambda^(q^slot(a)))    for lambda generating F_{q^d}

k is F_{q^{2d}}. On the centralizer tau^d plays the role of pi, so the tau
truncation is tied to the pi depth: T = d N.

A centralizer entry (a, c) can only carry tau^t with t = s_a - s_c (mod d), and
its coefficients are Frobenius-fixed. Unknowns are restricted to the window
t < d N + min(0, s_a - s_c), so that digit n of

    psi(B)_ac = sum_n b_(ac, s_a - s_c + d n) pi^n

ranges over exactly the digits of M_d(f, R_N). Commutators are taken in
truncation T + 1, where they are exact for series of degree < T.

``match_block_order`` sends B to J psi(B)^T J, where J reverses coordinates.
This lands in M_d(f reversed, R_N) and reverses products. A block rotation
then carries the images into M_d(f), exact modulo pi^(N-1).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from packages.field_arith.field import (
    FieldSpec,
    embedding,
    flatten_into,
    make_field,
    parse_prime_power,
    scale_flat,
    unflatten,
)
from packages.field_arith.linalg import Row, extract_basis_over_subfield, nullspace
from packages.dieudonne.skew import SkewMatrix, SkewRing
from packages.local_orders.dvr import Matrix, TruncatedDVR
from packages.local_orders.orders import (
    BlockOrder,
    TypeVector,
    block_membership,
    fq_dimension,
    in_fq_span,
    is_cyclic_rotation,
)
from packages.shared.errors import CertificateError, InsufficientTruncation, TypeVectorError

logger = logging.getLogger(__name__)


@dataclass
class FormalEmbedding:
    f: TypeVector
    base: FieldSpec  # F_q
    k: FieldSpec  # F_{q^{2d}}
    N: int
    ring: SkewRing
    lam: int  # image in k of a generator of F_{q^d}
    phi_pi: SkewMatrix
    phi_lambda: SkewMatrix

    @property
    def d(self) -> int:
        return self.f.d

    @property
    def T(self) -> int:
        return self.ring.T

    @cached_property
    def slots(self) -> list[int]:
        return self.f.slots()

    def window(self, a: int, c: int) -> int:
        return self.T + min(0, self.slots[a] - self.slots[c])

    @cached_property
    def residue_ring(self) -> TruncatedDVR:
        """R_N over F_q, home of the block order."""
        return TruncatedDVR(self.base, self.N)

    @cached_property
    def base_preimage(self) -> dict[int, int]:
        emb = embedding(self.base, self.k)
        return {emb(c): c for c in range(self.base.order)}

    def check_relations(self) -> None:
        """Phi(Pi) Phi(lambda) = Phi(lambda^q) Phi(Pi), and Phi(Pi)^d commutes with Phi(lambda)."""
        ring, k = self.ring, self.k
        twisted = ring.diagonal([ring.monomial(k.frob(self.lam, 1 + s), 0) for s in self.slots])
        lhs = ring.matmul(self.phi_pi, self.phi_lambda)
        rhs = ring.matmul(twisted, self.phi_pi)
        if not ring.mat_equal(lhs, rhs):
            raise CertificateError("Phi(Pi) Phi(lambda) != Phi(Fr(lambda)) Phi(Pi)")
        power = ring.identity(self.d)
        for _ in range(self.d):
            power = ring.matmul(power, self.phi_pi)
        if not ring.mat_equal(ring.commutator(power, self.phi_lambda), ring.zeros(self.d)):
            raise CertificateError("Phi(Pi)^d does not commute with Phi(lambda)")


def build_embedding(d: int, f: TypeVector, q: int, N: int, T: Optional[int] = None) -> FormalEmbedding:
    if f.d != d:
        raise TypeVectorError(f"type vector has length {f.d}, expected d={d}")
    if N < 2:
        raise InsufficientTruncation(f"pi depth N must be at least 2, got {N}")
    if T is not None and T != d * N:
        raise InsufficientTruncation(f"tau truncation must be d*N = {d * N}, got {T}")
    p, e = parse_prime_power(q)
    base = make_field(p, e, 1)
    k = make_field(p, e, 2 * d)
    small = make_field(p, e, d)
    generator = small.p if small.degree > 1 else 1
    lam = embedding(small, k)(generator)
    ring = SkewRing(k, d * N)
    slots = f.slots()
    phi_pi = ring.scalar_matrix(ring.tau, d)
    phi_lambda = ring.diagonal([ring.monomial(k.frob(lam, s), 0) for s in slots])
    E = FormalEmbedding(
        f=f, base=base, k=k, N=N, ring=ring, lam=lam, phi_pi=phi_pi, phi_lambda=phi_lambda
    )
    E.check_relations()
    logger.debug("build_embedding d=%d f=%s q=%d T=%d", d, f.entries, q, ring.T)
    return E


# --- Centralizer ---


def _window_blocks(E: FormalEmbedding) -> list[tuple[int, int, int]]:
    d = E.d
    return [(a, c, t) for a in range(d) for c in range(d) for t in range(E.window(a, c))]


def centralizer_basis(E: FormalEmbedding) -> list[SkewMatrix]:
    """F_q-basis of {B : B commutes with Phi(Pi) and Phi(lambda)} in the window."""
    k, d, T = E.k, E.d, E.T
    wide = SkewRing(k, T + 1)
    generators = [wide.extend(E.phi_pi, T + 1), wide.extend(E.phi_lambda, T + 1)]
    blocks = _window_blocks(E)
    columns: list[Row] = []
    for a, c, t in blocks:
        for j in range(k.degree):
            B = wide.zeros(d)
            B[a][c] = wide.monomial(k.p ** j, t)
            image: Row = {}
            for g, G in enumerate(generators):
                comm = wide.commutator(G, B)
                for r, row in enumerate(comm):
                    for s, series in enumerate(row):
                        for u, x in enumerate(series):
                            if x:
                                eq = ((g * d + r) * d + s) * (T + 1) + u
                                flatten_into(k, image, eq, x)
            columns.append(image)
    rows: dict[int, Row] = {}
    for col, image in enumerate(columns):
        for r, v in image.items():
            rows.setdefault(r, {})[col] = v
    solutions = nullspace(rows.values(), len(columns), k.p)
    picked = extract_basis_over_subfield(
        solutions, k.base_basis, lambda r, b: scale_flat(k, r, b), k.p
    )
    basis = []
    for vec in picked:
        B = E.ring.zeros(d)
        for idx, (a, c, t) in enumerate(blocks):
            value = unflatten(k, vec, idx)
            if value:
                digits = list(B[a][c])
                digits[t] = value
                B[a][c] = tuple(digits)
        basis.append(B)
    logger.info(
        "centralizer_basis d=%d f=%s N=%d unknowns=%d F_q-dimension=%d",
        d, E.f.entries, E.N, len(columns), len(basis),
    )
    return basis


def windowed_product(E: FormalEmbedding, X: SkewMatrix, Y: SkewMatrix) -> SkewMatrix:
    """X Y with the digits outside each entry's window dropped."""
    Z = E.ring.matmul(X, Y)
    for a, c in itertools.product(range(E.d), repeat=2):
        w = E.window(a, c)
        Z[a][c] = Z[a][c][:w] + (0,) * (E.T - w)
    return Z


def to_block_matrix(E: FormalEmbedding, B: SkewMatrix) -> Matrix:
    """psi(B): read digit n of entry (a, c) off tau^(s_a - s_c + d n)."""
    d, N, slots = E.d, E.N, E.slots
    R = E.residue_ring
    preimage = E.base_preimage
    out = R.zeros(d)
    for a, c in itertools.product(range(d), repeat=2):
        offset = slots[a] - slots[c]
        digits = [0] * N
        for t, x in enumerate(B[a][c]):
            if not x:
                continue
            n, r = divmod(t - offset, d)
            if r or not 0 <= n < N or t >= E.window(a, c):
                raise CertificateError(f"entry ({a}, {c}) carries tau^{t} outside the pattern")
            if x not in preimage:
                raise CertificateError(f"entry ({a}, {c}) has a coefficient outside F_q")
            digits[n] = preimage[x]
        out[a][c] = tuple(digits)
    return out


def anti_map(E: FormalEmbedding, B: SkewMatrix) -> Matrix:
    """J psi(B)^T J."""
    M = to_block_matrix(E, B)
    d = E.d
    return [[M[d - 1 - c][d - 1 - a] for c in range(d)] for a in range(d)]


# --- Rotation back to f ---


@dataclass
class BlockRotation:
    """Conjugation M_d(g) -> M_d(g') moving the first ``steps`` nonzero blocks of g to the end.

    Image entry (i, j) is pi^(e[p_j] - e[p_i]) X[p_i][p_j] with p = ``perm`` and
    e = ``lift`` (1 on the moved coordinates). One pi is divided out of some
    entries, so images are exact modulo pi^(N-1) when ``steps`` > 0.
    """

    source: TypeVector
    target: TypeVector
    steps: int
    perm: list[int]
    lift: list[int]

    def precision(self, ring: TruncatedDVR) -> TruncatedDVR:
        if self.steps == 0:
            return ring
        if ring.N < 2:
            raise InsufficientTruncation("rotating a block order needs N >= 2")
        return TruncatedDVR(ring.base, ring.N - 1)

    def apply(self, ring: TruncatedDVR, X: Matrix) -> Matrix:
        low = self.precision(ring)
        d = self.source.d
        out = low.zeros(d)
        for i, j in itertools.product(range(d), repeat=2):
            x = X[self.perm[i]][self.perm[j]]
            e = self.lift[self.perm[j]] - self.lift[self.perm[i]]
            if e > 0:
                x = ring.shift_up(x, 1)
            elif e < 0:
                if x[0]:
                    raise CertificateError(f"entry ({self.perm[i]}, {self.perm[j]}) is not divisible by pi")
                x = ring.shift_down(x, 1)
            out[i][j] = ring.retruncate(x, low.N)
        return out


def rotation_to(source: TypeVector, target: TypeVector) -> Optional[BlockRotation]:
    """The block rotation taking M_d(source) onto M_d(target), or None if the types are not rotations."""
    src, dst = source.compressed(), target.compressed()
    if source.d != target.d or not is_cyclic_rotation(src, dst):
        return None
    steps = next(k for k in range(max(1, len(src))) if src[k:] + src[:k] == dst)
    # coordinates are grouped by block, so the moved blocks are a prefix
    moved = sum(src[:steps])
    d = source.d
    return BlockRotation(
        source=source,
        target=target,
        steps=steps,
        perm=list(range(moved, d)) + list(range(moved)),
        lift=[1 if a < moved else 0 for a in range(d)],
    )


# --- Certificate ---


@dataclass
class AntiIsomorphismCertificate:
    source: TypeVector
    target: TypeVector
    reversed_target: TypeVector
    dimension: int
    expected_dimension: int
    pairs_checked: int
    contains_identity: bool
    closed: bool
    bijective: bool
    anti_multiplicative: bool
    rotation_steps: Optional[int]
    conjugate_to_source: bool
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (
            self.dimension == self.expected_dimension
            and self.contains_identity
            and self.closed
            and self.bijective
            and self.anti_multiplicative
            and (self.rotation_steps is None or self.conjugate_to_source)
        )


def match_block_order(basis: list[SkewMatrix], E: FormalEmbedding) -> AntiIsomorphismCertificate:
    """Verify B -> J psi(B)^T J onto M_d(f reversed, R_N), then rotate the images into M_d(f).

    The first map is checked exactly: membership, independence, identity and
    theta(XY) = theta(Y) theta(X) on every basis pair. When f reversed is a
    block rotation of f (always for d <= 5) the rotated images are checked
    entrywise against M_d(f) and for anti-multiplicativity, and the certificate
    targets f. Otherwise it targets f reversed.
    """
    R = E.residue_ring
    reversed_type = E.f.reversed()
    expected = BlockOrder(E.f, R).dimension()
    failures: list[str] = []
    images = []
    for B in basis:
        try:
            images.append(anti_map(E, B))
        except CertificateError as exc:
            failures.append(str(exc))
    members_ok = all(block_membership(X, reversed_type, R) for X in images)
    if not members_ok:
        failures.append("an image falls outside the reversed block order")
    independent = fq_dimension(R, images) == len(images)
    bijective = (
        members_ok
        and independent
        and len(images) == len(basis)
        and len(basis) == BlockOrder(reversed_type, R).dimension()
    )
    contains_identity = bool(images) and in_fq_span(R, images, R.identity(E.d))

    rotation = rotation_to(reversed_type, E.f)
    rotated: list[Matrix] = []
    conjugated = False
    if rotation is not None and members_ok:
        low = rotation.precision(R)
        try:
            rotated = [rotation.apply(R, X) for X in images]
            conjugated = all(block_membership(Y, E.f, low) for Y in rotated)
        except CertificateError as exc:
            failures.append(f"rotation: {exc}")
        if rotated and not conjugated:
            failures.append("a rotated image falls outside M_d(f)")

    closed, anti = True, True
    pairs = 0
    if len(images) == len(basis):
        for i, j in itertools.product(range(len(basis)), repeat=2):
            pairs += 1
            try:
                product = anti_map(E, windowed_product(E, basis[i], basis[j]))
            except CertificateError as exc:
                closed = False
                failures.append(f"product leaves the centralizer pattern: {exc}")
                break
            if not R.mat_equal(product, R.matmul(images[j], images[i])):
                anti = False
                failures.append("theta(XY) != theta(Y) theta(X)")
                break
            if conjugated:
                low = rotation.precision(R)
                try:
                    same = low.mat_equal(rotation.apply(R, product), low.matmul(rotated[j], rotated[i]))
                except CertificateError:
                    same = False
                if not same:
                    conjugated = False
                    failures.append("rotated theta(XY) != rotated theta(Y) theta(X)")

    cert = AntiIsomorphismCertificate(
        source=E.f,
        target=E.f if rotation is not None else reversed_type,
        reversed_target=reversed_type,
        dimension=len(basis),
        expected_dimension=expected,
        pairs_checked=pairs,
        contains_identity=contains_identity,
        closed=closed,
        bijective=bijective,
        anti_multiplicative=anti,
        rotation_steps=rotation.steps if rotation is not None else None,
        conjugate_to_source=conjugated,
        failures=failures,
    )
    logger.info(
        "match_block_order f=%s dim=%d expected=%d target=%s valid=%s",
        E.f.entries, cert.dimension, expected, cert.target.entries, cert.valid,
    )
    if not cert.valid:
        raise CertificateError(f"anti-isomorphism certificate failed: {failures or 'dimension mismatch'}")
    return cert
