"""Exact sparse linear algebra over F_p.

Rows and vectors are ``dict[int, int]`` maps from column index to a nonzero
residue mod p. Every linear system in the toolkit (lattice stabilizers,
skew-series centralizers, span tests) is flattened to F_p coordinates and
solved here. The commutation systems are block-sparse, and dict rows keep
elimination inside each block.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

Row = dict[int, int]


def _axpy(target: Row, coeff: int, source: Mapping[int, int], p: int) -> None:
    """target += coeff * source (in place, mod p)."""
    for col, val in source.items():
        new = (target.get(col, 0) + coeff * val) % p
        if new:
            target[col] = new
        else:
            target.pop(col, None)


class SparseEchelon:
    """Incremental Gauss-Jordan elimination.

    Invariant: every stored pivot row has 1 in its pivot column and 0 in every
    other pivot column.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, int]) -> Row:
        p = self.p
        out: Row = {c: v % p for c, v in row.items() if v % p}
        for col in [c for c in out if c in self.pivots]:
            coeff = out.get(col)
            if coeff:
                _axpy(out, -coeff, self.pivots[col], p)
        return out

    def add(self, row: Mapping[int, int]) -> bool:
        """Insert a row; returns False when it was already in the span."""
        reduced = self.reduce(row)
        if not reduced:
            return False
        p = self.p
        col = min(reduced)
        inv = pow(reduced[col], -1, p)
        reduced = {c: (v * inv) % p for c, v in reduced.items()}
        for prow in self.pivots.values():
            coeff = prow.get(col)
            if coeff:
                _axpy(prow, -coeff, reduced, p)
        self.pivots[col] = reduced
        return True

    def contains(self, row: Mapping[int, int]) -> bool:
        return not self.reduce(row)

    def nullspace(self, ncols: int) -> list[Row]:
        """Basis of the solutions x with row . x = 0 for every inserted row."""
        p = self.p
        basis: list[Row] = []
        for free in range(ncols):
            if free in self.pivots:
                continue
            vec: Row = {free: 1}
            for pcol, prow in self.pivots.items():
                coeff = prow.get(free)
                if coeff:
                    vec[pcol] = (-coeff) % p
            basis.append(vec)
        return basis


def nullspace(rows: Iterable[Mapping[int, int]], ncols: int, p: int) -> list[Row]:
    echelon = SparseEchelon(p)
    for row in rows:
        echelon.add(row)
    basis = echelon.nullspace(ncols)
    logger.debug("nullspace: ncols=%d rank=%d nullity=%d", ncols, echelon.rank, len(basis))
    return basis


def rank(rows: Iterable[Mapping[int, int]], p: int) -> int:
    echelon = SparseEchelon(p)
    for row in rows:
        echelon.add(row)
    return echelon.rank


def span_contains(basis: Iterable[Mapping[int, int]], row: Mapping[int, int], p: int) -> bool:
    echelon = SparseEchelon(p)
    for b in basis:
        echelon.add(b)
    return echelon.contains(row)


def extract_basis_over_subfield(
    vectors: Sequence[Mapping[int, int]],
    scalars: Sequence[int],
    scale: Callable[[Mapping[int, int], int], Row],
    p: int,
) -> list[Row]:
    """Pick a basis over F_q from F_p-spanning vectors of an F_q-subspace.

    ``scalars`` is an F_p-basis of F_q (encoded in the coefficient field) and
    ``scale(v, beta)`` multiplies a flattened vector by ``beta``. The result
    spans the same F_q-space, and its length is the F_q-dimension.
    """
    echelon = SparseEchelon(p)
    chosen: list[Row] = []
    for vec in vectors:
        if echelon.contains(vec):
            continue
        chosen.append(dict(vec))
        for beta in scalars:
            echelon.add(scale(vec, beta))
    return chosen


def fq_span_echelon(
    vectors: Iterable[Mapping[int, int]],
    scalars: Sequence[int],
    scale: Callable[[Mapping[int, int], int], Row],
    p: int,
) -> SparseEchelon:
    """F_p echelon of the F_q-span of ``vectors``."""
    echelon = SparseEchelon(p)
    for vec in vectors:
        for beta in scalars:
            echelon.add(scale(vec, beta))
    return echelon
