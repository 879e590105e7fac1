"""Block orders M_d(f, R) and their realization as lattice-chain stabilizers.

For a type vector f = (f_0, ..., f_{d-1}) with sum d, coordinate a sits in block
slot(a) (blocks of size 0 are skipped). M_d(f, R) is the set of d x d matrices
whose entry (a, c) lies in pi R whenever slot(a) < slot(c), and in R otherwise.

Over R_N this is an F_q-space of dimension N r + (N - 1) s, where r counts the
positions with slot(a) >= slot(c) and s the others.

The standard chain for f has Lambda_k = diag(pi^[slot(a) < k]); its stabilizer
is exactly M_d(f, R). ``chain_stabilizer`` recovers it by solving the
containment conditions as an F_p-linear system.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from packages.field_arith.field import FieldSpec, flatten_into, scale_flat, unflatten
from packages.field_arith.linalg import Row, extract_basis_over_subfield, fq_span_echelon, nullspace
from packages.local_orders.dvr import Matrix, TruncatedDVR
from packages.local_orders.lattices import Lattice, LatticeChain, smith_form
from packages.shared.errors import CertificateError, InsufficientTruncation, TypeVectorError
from packages.shared.settings import get_enumeration_cap

logger = logging.getLogger(__name__)


# --- Type vectors ---


@dataclass(frozen=True)
class TypeVector:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise TypeVectorError("a type vector needs at least one entry")
        if any(x < 0 for x in self.entries):
            raise TypeVectorError(f"type entries must be nonnegative, got {self.entries}")
        if sum(self.entries) != len(self.entries):
            raise TypeVectorError(
                f"type entries must sum to d={len(self.entries)}, got {sum(self.entries)}"
            )

    @classmethod
    def of(cls, entries: Sequence[int]) -> TypeVector:
        return cls(tuple(int(x) for x in entries))

    @classmethod
    def maximal(cls, d: int) -> TypeVector:
        return cls((d,) + (0,) * (d - 1))

    @classmethod
    def special(cls, d: int) -> TypeVector:
        return cls((1,) * d)

    @property
    def d(self) -> int:
        return len(self.entries)

    def rotate(self, k: int = 1) -> TypeVector:
        """(f_k, f_{k+1}, ..., f_{k-1})."""
        k %= self.d
        return TypeVector(self.entries[k:] + self.entries[:k])

    def reversed(self) -> TypeVector:
        return TypeVector(tuple(reversed(self.entries)))

    def compressed(self) -> tuple[int, ...]:
        return tuple(x for x in self.entries if x)

    def slots(self) -> list[int]:
        """slot(a) for each coordinate a."""
        return [i for i, size in enumerate(self.entries) for _ in range(size)]

    def position_counts(self) -> tuple[int, int]:
        """(r, s): positions with slot(a) >= slot(c), and with slot(a) < slot(c)."""
        slots = self.slots()
        s = sum(1 for a in slots for c in slots if a < c)
        return self.d * self.d - s, s

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)


def compositions(d: int) -> list[TypeVector]:
    """Every type vector of length d, in lexicographic order."""
    out = []
    for entries in itertools.product(range(d + 1), repeat=d):
        if sum(entries) == d:
            out.append(TypeVector(entries))
    return out


def is_cyclic_rotation(a: Sequence[int], b: Sequence[int]) -> bool:
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[k:] + a[:k] == b for k in range(len(a)))


# --- Block orders ---


@dataclass(frozen=True)
class BlockOrder:
    f: TypeVector
    ring: TruncatedDVR

    @property
    def d(self) -> int:
        return self.f.d

    def lower_valuation(self, a: int, c: int) -> int:
        slots = self.f.slots()
        return 1 if slots[a] < slots[c] else 0

    def contains(self, M: Matrix) -> bool:
        return block_membership(M, self.f, self.ring)

    def dimension(self) -> int:
        r, s = self.f.position_counts()
        N = self.ring.N
        return N * r + (N - 1) * s


def block_membership(M: Matrix, f: TypeVector, ring: TruncatedDVR) -> bool:
    """Every entry above the block diagonal has positive valuation."""
    d = f.d
    if len(M) != d or any(len(row) != d for row in M):
        raise TypeVectorError(f"expected a {d}x{d} matrix")
    slots = f.slots()
    for a in range(d):
        for c in range(d):
            if slots[a] < slots[c] and M[a][c][0] != 0:
                return False
    return True


def order_basis(f: TypeVector, ring: TruncatedDVR) -> list[Matrix]:
    """Monomial F_q-basis pi^t E_ac of M_d(f, R_N)."""
    order = BlockOrder(f, ring)
    basis = []
    for a in range(f.d):
        for c in range(f.d):
            for t in range(order.lower_valuation(a, c), ring.N):
                M = ring.zeros(f.d)
                M[a][c] = ring.monomial(1, t)
                basis.append(M)
    return basis


def count_members(f: TypeVector, ring: TruncatedDVR) -> int:
    """#M_d(f, R_N) = q^(N r + (N - 1) s)."""
    return ring.base.order ** BlockOrder(f, ring).dimension()


def count_members_exhaustive(f: TypeVector, ring: TruncatedDVR) -> int:
    """Oracle: walk every d x d matrix over R_N and test membership."""
    d, N, size = f.d, ring.N, ring.base.order
    total = size ** (d * d * N)
    cap = get_enumeration_cap()
    if total > cap:
        raise TypeVectorError(f"{total} matrices exceed the enumeration cap {cap}")
    elements = [ring.element(digits) for digits in itertools.product(range(size), repeat=N)]
    count = 0
    for entries in itertools.product(elements, repeat=d * d):
        M = [list(entries[r * d:(r + 1) * d]) for r in range(d)]
        if block_membership(M, f, ring):
            count += 1
    return count


def random_member(f: TypeVector, ring: TruncatedDVR, rng: random.Random) -> Matrix:
    order = BlockOrder(f, ring)
    size = ring.base.order
    M = ring.zeros(f.d)
    for a in range(f.d):
        for c in range(f.d):
            low = order.lower_valuation(a, c)
            M[a][c] = tuple(0 if t < low else rng.randrange(size) for t in range(ring.N))
    return M


@dataclass
class ClosureReport:
    contains_identity: bool
    basis_products: int
    sampled_products: int
    closed: bool


def closure_check(
    f: TypeVector, ring: TruncatedDVR, rng: Optional[random.Random] = None, samples: int = 0
) -> ClosureReport:
    """Multiplicative closure of M_d(f, R_N).

    Products of all basis pairs decide closure of the span outright; ``samples``
    random products are checked on top.
    """
    basis = order_basis(f, ring)
    contains_identity = block_membership(ring.identity(f.d), f, ring)
    closed = contains_identity
    for X, Y in itertools.product(basis, repeat=2):
        if not block_membership(ring.matmul(X, Y), f, ring):
            closed = False
            break
    rng = rng or random.Random(0)
    for _ in range(samples):
        X, Y = random_member(f, ring, rng), random_member(f, ring, rng)
        if not block_membership(ring.matmul(X, Y), f, ring):
            closed = False
            break
    logger.debug("closure_check f=%s N=%d closed=%s", f.entries, ring.N, closed)
    return ClosureReport(
        contains_identity=contains_identity,
        basis_products=len(basis) ** 2,
        sampled_products=samples,
        closed=closed,
    )


# --- Chains and stabilizers ---


def standard_chain(f: TypeVector, ring: TruncatedDVR) -> LatticeChain:
    """Lambda_0 = R^d, and Lambda_{k+1} scales the slot-k coordinates of Lambda_k by pi."""
    slots = f.slots()
    pi, one = ring.pi, ring.one
    lattices = [
        Lattice.of(ring.diagonal([pi if s < k else one for s in slots])) for k in range(f.d)
    ]
    maps = [ring.diagonal([pi if s == k else one for s in slots]) for k in range(f.d)]
    chain = LatticeChain(ring=ring, lattices=lattices, maps=maps)
    chain.check()
    return chain


def _flat_matrix(ring: TruncatedDVR, M: Matrix) -> Row:
    """Column ((a d + c) N + t) * degree + j holds digit j of M[a][c]_t."""
    d, N, F = len(M), ring.N, ring.base
    row: Row = {}
    for a in range(d):
        for c in range(d):
            for t, x in enumerate(M[a][c]):
                if x:
                    flatten_into(F, row, (a * d + c) * N + t, x)
    return row


def _unflat_matrix(ring: TruncatedDVR, row: Row, d: int) -> Matrix:
    N, F = ring.N, ring.base
    return [
        [tuple(unflatten(F, row, (a * d + c) * N + t) for t in range(N)) for c in range(d)]
        for a in range(d)
    ]


def _fq_scalars(F: FieldSpec) -> tuple[int, ...]:
    return F.base_basis


def fq_basis_of_solutions(ring: TruncatedDVR, solutions: list[Row], d: int) -> list[Matrix]:
    F = ring.base
    picked = extract_basis_over_subfield(
        solutions, _fq_scalars(F), lambda r, b: scale_flat(F, r, b), F.p
    )
    return [_unflat_matrix(ring, r, d) for r in picked]


def in_fq_span(ring: TruncatedDVR, basis: Sequence[Matrix], M: Matrix) -> bool:
    F = ring.base
    echelon = fq_span_echelon(
        [_flat_matrix(ring, B) for B in basis], _fq_scalars(F), lambda r, b: scale_flat(F, r, b), F.p
    )
    return echelon.contains(_flat_matrix(ring, M))


def fq_dimension(ring: TruncatedDVR, matrices: Sequence[Matrix]) -> int:
    """Dimension over F_q of the span of ``matrices``."""
    F = ring.base
    echelon = fq_span_echelon(
        [_flat_matrix(ring, B) for B in matrices], _fq_scalars(F), lambda r, b: scale_flat(F, r, b), F.p
    )
    return echelon.rank // F.degree


def chain_stabilizer(chain: LatticeChain) -> list[Matrix]:
    """F_q-basis of {g : g Lambda_i inside Lambda_i for all i} in M_d(R_N).

    With L_i B_i R_i = diag(pi^D), the condition is that the digits u < D_a of
    row a of L_i g B_i vanish. Unknowns are the F_p-digits of the entries of g.
    """
    ring = chain.ring
    F, N = ring.base, ring.N
    d = chain.lattices[0].rank
    forms = []
    for lat in chain.lattices:
        snf = smith_form(ring, lat.matrix())
        forms.append((snf.left, lat.matrix(), snf.diagonal))
    n_blocks = d * d * N
    ncols = n_blocks * F.degree
    # column images of the constraint map, one per unknown F_p coordinate
    constraint_cols: list[Row] = []
    for block in range(n_blocks):
        entry, t = divmod(block, N)
        a0, c0 = divmod(entry, d)
        for j in range(F.degree):
            beta = F.p ** j
            g = ring.zeros(d)
            g[a0][c0] = ring.monomial(beta, t)
            image: Row = {}
            eq = 0
            for left, basis, diag in forms:
                product = ring.matmul(ring.matmul(left, g), basis)
                for a in range(d):
                    for b in range(d):
                        for u in range(diag[a]):
                            x = product[a][b][u]
                            if x:
                                flatten_into(F, image, eq, x)
                            eq += 1
            constraint_cols.append(image)
    rows = _transpose(constraint_cols, F.degree)
    solutions = nullspace(rows, ncols, F.p)
    basis = fq_basis_of_solutions(ring, solutions, d)
    logger.info(
        "chain_stabilizer: d=%d N=%d unknowns=%d F_q-dimension=%d",
        d, N, ncols, len(basis),
    )
    return basis


def _transpose(columns: list[Row], degree: int) -> list[Row]:
    """Turn column images into constraint rows.

    Column k of the system is ``columns[k]``; every output row collects one
    F_p-digit of one constraint across all unknowns.
    """
    rows: dict[int, Row] = {}
    for k, col in enumerate(columns):
        for r, v in col.items():
            rows.setdefault(r, {})[k] = v
    return list(rows.values())



# --- Conjugation ---


@dataclass
class ConjugationCertificate:
    source: TypeVector
    target: TypeVector
    u: Matrix
    u_adjugate: Matrix  # pi * u^-1
    checked: int
    valid: bool


def _rotation_matrix(f: TypeVector, ring: TruncatedDVR) -> Matrix:
    """u = P diag(1 on block 0, pi elsewhere), P moving block 0 to the end."""
    d, f0 = f.d, f.entries[0]
    u = ring.zeros(d)
    for a in range(d):
        if a < f0:
            u[d - f0 + a][a] = ring.one
        else:
            u[a - f0][a] = ring.pi
    return u


def _rotation_adjugate(f: TypeVector, ring: TruncatedDVR) -> Matrix:
    """pi u^-1."""
    d, f0 = f.d, f.entries[0]
    v = ring.zeros(d)
    for a in range(d):
        if a < f0:
            v[a][d - f0 + a] = ring.pi
        else:
            v[a][a - f0] = ring.one
    return v


def _conjugate_lands(
    ring: TruncatedDVR, left: Matrix, X: Matrix, right: Matrix, target: TypeVector
) -> bool:
    Z = ring.matmul(ring.matmul(left, X), right)
    if ring.mat_val(Z) < 1:
        return False
    return block_membership(ring.mat_shift(Z, -1), target, ring)


def conjugate_type(f: TypeVector, ring: TruncatedDVR) -> ConjugationCertificate:
    """Monomial u with u M_d(f) u^-1 = M_d(f rotated by one), checked on bases both ways."""
    if ring.N < 2:
        raise InsufficientTruncation("conjugation certificates need N >= 2")
    target = f.rotate(1)
    u, v = _rotation_matrix(f, ring), _rotation_adjugate(f, ring)
    if not ring.mat_equal(ring.matmul(u, v), ring.mat_scale(ring.pi, ring.identity(f.d))):
        raise CertificateError("u times its adjugate is not pi")
    checked = 0
    valid = True
    # u X u^-1 = (u X (pi u^-1)) / pi lands in the target order
    for X in order_basis(f, ring):
        checked += 1
        if not _conjugate_lands(ring, u, X, v, target):
            valid = False
            break
    if valid:
        for Y in order_basis(target, ring):
            checked += 1
            if not _conjugate_lands(ring, v, Y, u, f):
                valid = False
                break
    logger.info("conjugate_type: %s -> %s valid=%s", f.entries, target.entries, valid)
    cert = ConjugationCertificate(
        source=f, target=target, u=u, u_adjugate=v, checked=checked, valid=valid
    )
    if not valid:
        raise CertificateError(f"conjugation {f.entries} -> {target.entries} failed")
    return cert
