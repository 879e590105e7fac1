"""Full-rank lattices over R_N and lattice chains.

A lattice is ``pi^shift`` times the column span of a square basis matrix, so
pi^-1 scaled lattices stay representable. Containment and cokernel lengths come
from the Smith normal form ``L B R = diag(pi^D_a)``: since R is invertible,

    pi^s' B' span  is inside  pi^s B span
    iff  every entry in row a of  L B'  has valuation >= D_a - (s' - s).

Smith diagonals are only defined below N; a diagonal entry that vanishes in
R_N raises ``InsufficientTruncation``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from packages.local_orders.dvr import Matrix, TruncatedDVR
from packages.shared.errors import InsufficientTruncation, TypeVectorError

logger = logging.getLogger(__name__)


@dataclass
class SmithForm:
    """``left @ A @ right == diag(pi^d for d in diagonal)`` in R_N."""

    diagonal: list[int]
    left: Matrix
    right: Matrix


def smith_form(ring: TruncatedDVR, A: Matrix) -> SmithForm:
    n = len(A)
    if any(len(row) != n for row in A):
        raise TypeVectorError("Smith form needs a square matrix")
    work = [list(row) for row in A]
    left = ring.identity(n)
    right = ring.identity(n)
    diagonal: list[int] = []
    for k in range(n):
        best, where = ring.N, None
        for i in range(k, n):
            for j in range(k, n):
                v = ring.val(work[i][j])
                if v < best:
                    best, where = v, (i, j)
        if where is None:
            raise InsufficientTruncation(
                f"Smith diagonal entry {k} vanishes modulo pi^{ring.N}; raise N"
            )
        i, j = where
        work[k], work[i] = work[i], work[k]
        left[k], left[i] = left[i], left[k]
        for row in work:
            row[k], row[j] = row[j], row[k]
        for row in right:
            row[k], row[j] = row[j], row[k]
        # normalize the pivot to pi^best
        unit_inv = ring.inv(ring.shift_down(work[k][k], best))
        work[k] = [ring.mul(unit_inv, x) for x in work[k]]
        left[k] = [ring.mul(unit_inv, x) for x in left[k]]
        for r in range(k + 1, n):
            if any(work[r][k]):
                factor = ring.shift_down(work[r][k], best)
                work[r] = [ring.sub(x, ring.mul(factor, y)) for x, y in zip(work[r], work[k])]
                left[r] = [ring.sub(x, ring.mul(factor, y)) for x, y in zip(left[r], left[k])]
        for c in range(k + 1, n):
            if any(work[k][c]):
                factor = ring.shift_down(work[k][c], best)
                for row in work:
                    row[c] = ring.sub(row[c], ring.mul(factor, row[k]))
                for row in right:
                    row[c] = ring.sub(row[c], ring.mul(factor, row[k]))
        diagonal.append(best)
    return SmithForm(diagonal=diagonal, left=left, right=right)


@dataclass(frozen=True)
class Lattice:
    shift: int
    basis: tuple[tuple[tuple[int, ...], ...], ...]

    @classmethod
    def of(cls, basis: Matrix, shift: int = 0) -> Lattice:
        return cls(shift=shift, basis=tuple(tuple(row) for row in basis))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return [list(row) for row in self.basis]

    def scaled(self, k: int) -> Lattice:
        """pi^k times this lattice."""
        return Lattice(shift=self.shift + k, basis=self.basis)


def standard_lattice(ring: TruncatedDVR, n: int) -> Lattice:
    return Lattice.of(ring.identity(n))


def lattice_index(ring: TruncatedDVR, lat: Lattice) -> int:
    """Length of R^n / lat (negative when lat is bigger than R^n)."""
    return lat.rank * lat.shift + sum(smith_form(ring, lat.matrix()).diagonal)


def lattice_contains(ring: TruncatedDVR, outer: Lattice, inner: Lattice) -> bool:
    if outer.rank != inner.rank:
        raise TypeVectorError("lattices of different rank")
    snf = smith_form(ring, outer.matrix())
    delta = inner.shift - outer.shift
    image = ring.matmul(snf.left, inner.matrix())
    for a, row in enumerate(image):
        threshold = snf.diagonal[a] - delta
        if threshold <= 0:
            continue
        for x in row:
            v = ring.val(x)
            if v < threshold:
                if v == ring.N:
                    raise InsufficientTruncation(
                        f"containment needs valuation {threshold} but N = {ring.N}"
                    )
                return False
    return True


def lattice_equal(ring: TruncatedDVR, a: Lattice, b: Lattice) -> bool:
    return lattice_contains(ring, a, b) and lattice_contains(ring, b, a)


def cokernel_length(ring: TruncatedDVR, outer: Lattice, inner: Lattice) -> int:
    """Length of outer / inner over R (the F_q-dimension when the residue field is F_q)."""
    if not lattice_contains(ring, outer, inner):
        raise TypeVectorError("inner lattice is not contained in the outer one")
    return lattice_index(ring, inner) - lattice_index(ring, outer)


def cokernel_lengths(ring: TruncatedDVR, A: Matrix) -> list[int]:
    """Elementary divisor valuations of A, i.e. R^n / A R^n = sum R / pi^D_a."""
    return smith_form(ring, A).diagonal


@dataclass
class LatticeChain:
    """Lambda_0 >= Lambda_1 >= ... >= Lambda_{d-1} >= pi Lambda_0.

    ``maps[i]`` expresses Lambda_{i+1} in the basis of Lambda_i
    (``B_{i+1} = B_i @ maps[i]``, with B_d = pi B_0); the product of all maps is
    pi times the identity and coker(maps[i]) has length f_i.
    """

    ring: TruncatedDVR
    lattices: list[Lattice]
    maps: Optional[list[Matrix]] = field(default=None)

    @property
    def d(self) -> int:
        return len(self.lattices)

    def closing(self) -> Lattice:
        return self.lattices[0].scaled(1)

    def check(self) -> None:
        """Verify the chain relations; raises ``TypeVectorError`` on failure."""
        ring = self.ring
        seq = self.lattices + [self.closing()]
        for i in range(self.d):
            if not lattice_contains(ring, seq[i], seq[i + 1]):
                raise TypeVectorError(f"Lambda_{i + 1} is not inside Lambda_{i}")
        if self.maps is None:
            return
        n = seq[0].rank
        product = ring.identity(n)
        for i, m in enumerate(self.maps):
            lhs = ring.mat_shift(ring.matmul(seq[i].matrix(), m), seq[i].shift - seq[i + 1].shift)
            if not ring.mat_equal(lhs, seq[i + 1].matrix()):
                raise TypeVectorError(f"map {i} does not carry Lambda_{i} onto Lambda_{i + 1}")
            product = ring.matmul(product, m)
        if not ring.mat_equal(product, ring.mat_scale(ring.pi, ring.identity(n))):
            raise TypeVectorError("the maps around the chain do not compose to pi")


def type_of_chain(chain: LatticeChain) -> tuple[int, ...]:
    """Cokernel lengths of the successive inclusions."""
    ring = chain.ring
    seq = chain.lattices + [chain.closing()]
    indices = [lattice_index(ring, lat) for lat in seq]
    lengths = tuple(indices[i + 1] - indices[i] for i in range(chain.d))
    if any(x < 0 for x in lengths):
        raise TypeVectorError(f"lattices do not form a descending chain: {lengths}")
    logger.debug("type_of_chain: %s", lengths)
    return lengths


def chain_from_lattices(ring: TruncatedDVR, lattices: Sequence[Lattice]) -> LatticeChain:
    chain = LatticeChain(ring=ring, lattices=list(lattices))
    chain.check()
    return chain
