"""Graded Dieudonne modules over truncated k[[pi]].

A module of rank d has components M_0..M_{d-1}, lattices in K^d, with

    Pi_i:  M_i -> M_{i+1}   linear, matrix P_i
    phi_i: M_i -> M_{i+1}   x |-> A_i Fr(x)

(indices mod d). The defining relations are

    P_{i+d-1} ... P_{i+1} P_i = pi          (around the cycle)
    A_{i+1} Fr(P_i) = P_{i+1} A_i           (phi and Pi commute)

and every phi_i is injective. The type is f_i = length(M_{i+1} / phi_i M_i).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from packages.field_arith.field import FieldSpec, embedding, make_field, parse_prime_power
from packages.local_orders.dvr import Matrix, TruncatedDVR
from packages.local_orders.lattices import (
    Lattice,
    LatticeChain,
    cokernel_length,
    lattice_contains,
    lattice_equal,
    lattice_index,
    smith_form,
    standard_lattice,
)
from packages.local_orders.orders import TypeVector, standard_chain
from packages.shared.constants import LocalRole
from packages.shared.errors import InsufficientTruncation, ModuleError, TypeVectorError

logger = logging.getLogger(__name__)


@dataclass
class SemilinearMap:
    """x |-> pi^shift * matrix * Fr^twist(x)."""

    matrix: Matrix
    twist: int = 1
    shift: int = 0

    def compose(self, ring: TruncatedDVR, other: SemilinearMap) -> SemilinearMap:
        """self after other."""
        product = ring.matmul(self.matrix, ring.mat_frob(other.matrix, self.twist))
        return SemilinearMap(product, self.twist + other.twist, self.shift + other.shift)

    def power(self, ring: TruncatedDVR, n: int) -> SemilinearMap:
        if n < 0:
            raise ModuleError("semilinear powers must be nonnegative")
        out = SemilinearMap(ring.identity(len(self.matrix)), 0, 0)
        for _ in range(n):
            out = self.compose(ring, out)
        return out

    def image(self, ring: TruncatedDVR, lat: Lattice) -> Lattice:
        basis = ring.matmul(self.matrix, ring.mat_frob(lat.matrix(), self.twist))
        return Lattice.of(basis, lat.shift + self.shift)


@dataclass
class GradedDieudonneModule:
    ring: TruncatedDVR
    pi_maps: list[Matrix]
    phi_maps: list[Matrix]
    components: list[Lattice] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.pi_maps) != len(self.phi_maps):
            raise ModuleError("need one Pi map and one phi map per graded piece")
        if not self.components:
            self.components = [standard_lattice(self.ring, self.d) for _ in range(self.d)]
        if len(self.components) != self.d or any(c.rank != self.d for c in self.components):
            raise TypeVectorError(f"expected {self.d} components of rank {self.d}")

    @property
    def d(self) -> int:
        return len(self.pi_maps)

    def phi(self, i: int) -> SemilinearMap:
        return SemilinearMap(self.phi_maps[i % self.d], 1, 0)

    def pi_map(self, i: int) -> SemilinearMap:
        return SemilinearMap(self.pi_maps[i % self.d], 0, 0)

    def check_relations(self) -> None:
        ring, d = self.ring, self.d
        scalar_pi = ring.mat_scale(ring.pi, ring.identity(d))
        for i in range(d):
            cycle = ring.identity(d)
            for j in range(i, i + d):
                cycle = ring.matmul(self.pi_maps[j % d], cycle)
            if not ring.mat_equal(cycle, scalar_pi):
                raise ModuleError(f"the Pi maps starting at M_{i} do not compose to pi")
        for i in range(d):
            j = (i + 1) % d
            lhs = ring.matmul(self.phi_maps[j], ring.mat_frob(self.pi_maps[i]))
            rhs = ring.matmul(self.pi_maps[j], self.phi_maps[i])
            if not ring.mat_equal(lhs, rhs):
                raise ModuleError(f"phi_{j} Pi_{i} != Pi_{j} phi_{i}")
        for i in range(d):
            try:
                smith_form(ring, self.phi_maps[i])
            except InsufficientTruncation as exc:
                raise ModuleError(f"phi_{i} is not injective modulo pi^{ring.N}") from exc
            nxt = self.components[(i + 1) % d]
            for name, m in (("phi", self.phi(i)), ("Pi", self.pi_map(i))):
                if not lattice_contains(ring, nxt, m.image(ring, self.components[i])):
                    raise ModuleError(f"{name}_{i} does not land in M_{(i + 1) % d}")


# --- Invariants of a module ---


def type_of_module(M: GradedDieudonneModule) -> tuple[int, ...]:
    """Cokernel lengths of the phi_i. They sum to d only for exceptional modules."""
    ring = M.ring
    lengths = []
    for i in range(M.d):
        image = M.phi(i).image(ring, M.components[i])
        lengths.append(lattice_index(ring, image) - lattice_index(ring, M.components[(i + 1) % M.d]))
    logger.debug("type_of_module: %s", lengths)
    return tuple(lengths)


def is_exceptional(M: GradedDieudonneModule) -> bool:
    ring = M.ring
    return all(
        lattice_equal(
            ring,
            M.phi(i).image(ring, M.components[i]),
            M.pi_map(i).image(ring, M.components[i]),
        )
        for i in range(M.d)
    )


def is_special(M: GradedDieudonneModule) -> bool:
    return all(x == 1 for x in type_of_module(M))


def is_superspecial(M: GradedDieudonneModule) -> bool:
    return is_special(M) and is_exceptional(M)


def module_total_operator(M: GradedDieudonneModule) -> SemilinearMap:
    """phi on the ungraded module of rank d^2, block (i+1, i) = A_i."""
    ring, d = M.ring, M.d
    n = d * d
    big = ring.zeros(n)
    for i, A in enumerate(M.phi_maps):
        j = (i + 1) % d
        for r in range(d):
            for c in range(d):
                big[j * d + r][i * d + c] = A[r][c]
    return SemilinearMap(big, 1, 0)


def is_supersingular(M: GradedDieudonneModule) -> bool:
    """phi is topologically nilpotent: phi^(d^2) M lies in pi M."""
    ring = M.ring
    if any(not lattice_equal(ring, c, standard_lattice(ring, M.d)) for c in M.components):
        raise ModuleError("supersingularity is only decided for standard components")
    total = module_total_operator(M)
    power = total.power(ring, M.d * M.d)
    return ring.mat_val(power.matrix) >= 1


# --- Constructors ---


def _residue_extension(q: int, m: int) -> tuple[FieldSpec, FieldSpec]:
    p, e = parse_prime_power(q)
    return make_field(p, e, 1), make_field(p, e, m)


def _lift_matrix(ring: TruncatedDVR, small: FieldSpec, A: Matrix) -> Matrix:
    emb = embedding(small, ring.base)
    return [[tuple(emb(x) for x in entry) for entry in row] for row in A]


def standard_module(chain: LatticeChain, k: FieldSpec) -> GradedDieudonneModule:
    """Pi_i from the chain maps tensored with k, phi_i the same maps twisted by Frobenius."""
    if chain.maps is None:
        raise ModuleError("standard_module needs a chain with explicit maps")
    ring = TruncatedDVR(k, chain.ring.N)
    maps = [_lift_matrix(ring, chain.ring.base, D) for D in chain.maps]
    M = GradedDieudonneModule(ring=ring, pi_maps=maps, phi_maps=[list(map(list, D)) for D in maps])
    M.check_relations()
    return M


def _companion(ring: TruncatedDVR, d: int) -> Matrix:
    """e_j -> e_{j+1}, e_{d-1} -> pi e_0; its d-th power is pi."""
    u = ring.zeros(d)
    for j in range(d - 1):
        u[j + 1][j] = ring.one
    u[0][d - 1] = ring.pi
    return u


def etale_module(d: int, k: FieldSpec, N: int) -> GradedDieudonneModule:
    """Every phi_i bijective: type (0, ..., 0), never exceptional."""
    ring = TruncatedDVR(k, N)
    u = _companion(ring, d)
    M = GradedDieudonneModule(
        ring=ring, pi_maps=[u] * d, phi_maps=[ring.identity(d) for _ in range(d)]
    )
    M.check_relations()
    return M


def _random_unit_matrix(ring: TruncatedDVR, n: int, rng: random.Random) -> Matrix:
    F = ring.base
    while True:
        A = [
            [tuple(rng.randrange(F.order) for _ in range(ring.N)) for _ in range(n)]
            for _ in range(n)
        ]
        try:
            ring.mat_inverse(A)
            return A
        except InsufficientTruncation:
            continue


def _slot_block_unit(ring: TruncatedDVR, f: TypeVector, rng: random.Random) -> Matrix:
    """A unit that is block-diagonal by slot, hence commutes with every standard chain map."""
    d = f.d
    C = ring.zeros(d)
    start = 0
    for size in f:
        if size:
            block = _random_unit_matrix(ring, size, rng)
            for r in range(size):
                for c in range(size):
                    C[start + r][start + c] = block[r][c]
        start += size
    return C


@dataclass
class GeneratedModule:
    module: GradedDieudonneModule
    predicted_type: tuple[int, ...]
    exceptional: bool


def random_module(
    f: TypeVector,
    q: int,
    N: Optional[int] = None,
    rng: Optional[random.Random] = None,
    exceptional: bool = True,
    m: int = 2,
) -> GeneratedModule:
    """Standard module of type f, phi twisted by a slot-block unit, then a random base change.

    A non-exceptional module also scales one coordinate of that unit by pi,
    which adds one to every type entry.
    """
    rng = rng or random.Random()
    d = f.d
    N = N if N is not None else d + 2
    small, k = _residue_extension(q, m)
    ring = TruncatedDVR(k, N)
    maps = [_lift_matrix(ring, small, D) for D in standard_chain(f, TruncatedDVR(small, N)).maps]
    C = _slot_block_unit(ring, f, rng)
    defect = 0
    if not exceptional:
        j = rng.randrange(d)
        C = ring.matmul(C, ring.diagonal([ring.pi if i == j else ring.one for i in range(d)]))
        defect = 1
    phis = [ring.matmul(C, D) for D in maps]
    G = [_random_unit_matrix(ring, d, rng) for _ in range(d)]
    G_inv = [ring.mat_inverse(g) for g in G]
    pis, As = [], []
    for i in range(d):
        j = (i + 1) % d
        pis.append(ring.matmul(G_inv[j], ring.matmul(maps[i], G[i])))
        As.append(ring.matmul(G_inv[j], ring.matmul(phis[i], ring.mat_frob(G[i]))))
    M = GradedDieudonneModule(ring=ring, pi_maps=pis, phi_maps=As)
    M.check_relations()
    return GeneratedModule(
        module=M,
        predicted_type=tuple(x + defect for x in f),
        exceptional=exceptional,
    )


# --- Local conditions ---


@dataclass
class LocalBehavior:
    role: LocalRole
    holds: bool
    cokernel_length: Optional[int] = None
    details: list[str] = field(default_factory=list)


def pole_model(ring: TruncatedDVR, d: int, deg: int = 1) -> tuple[Lattice, SemilinearMap]:
    """Lattice on 1, tau, ..., tau^(n-1), n = d deg, where tau shifts and tau^n = pi^-1."""
    n = d * deg
    A = ring.zeros(n)
    for j in range(n - 1):
        A[j + 1][j] = ring.pi
    A[0][n - 1] = ring.one
    return standard_lattice(ring, n), SemilinearMap(A, 1, -1)


def classify_local_behavior(
    ring: TruncatedDVR,
    lattice: Lattice,
    phi: SemilinearMap,
    role: LocalRole,
    d: int,
    deg: int = 1,
) -> LocalBehavior:
    role = LocalRole(role)
    result = LocalBehavior(role=role, holds=False)
    if role == LocalRole.ETALE:
        result.holds = lattice_equal(ring, phi.image(ring, lattice), lattice)
        if not result.holds:
            result.details.append("phi(M) != M")
    elif role == LocalRole.ZERO:
        image = phi.image(ring, lattice)
        lower = lattice_contains(ring, image, lattice.scaled(1))
        upper = lattice_contains(ring, lattice, image)
        if not lower:
            result.details.append("pi M is not inside phi(M)")
        if not upper:
            result.details.append("phi(M) is not inside M")
        if lower and upper:
            result.cokernel_length = cokernel_length(ring, lattice, image)
            if result.cokernel_length != d:
                result.details.append(f"cokernel length {result.cokernel_length} != {d}")
        result.holds = lower and upper and result.cokernel_length == d
    else:
        image = phi.power(ring, d * deg).image(ring, lattice)
        result.holds = lattice_equal(ring, image, lattice.scaled(-1))
        if not result.holds:
            result.details.append(f"phi^{d * deg}(M) != pi^-1 M")
    logger.debug("classify_local_behavior role=%s holds=%s", role.value, result.holds)
    return result
