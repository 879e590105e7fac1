"""Truncated skew power series k{{tau}} / (tau^T) and matrices over them.

Multiplication follows tau a = Fr_q(a) tau, so

    (sum a_i tau^i)(sum b_j tau^j) = sum a_i Fr_q^i(b_j) tau^(i+j).

Associativity and distributivity hold exactly in the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from packages.field_arith.field import FieldSpec
from packages.shared.errors import TypeVectorError

SkewSeries = tuple[int, ...]
SkewMatrix = list[list[SkewSeries]]


@dataclass(frozen=True)
class SkewRing:
    field: FieldSpec
    T: int

    def __post_init__(self) -> None:
        if self.T < 1:
            raise TypeVectorError(f"tau truncation must be at least 1, got {self.T}")

    @property
    def zero(self) -> SkewSeries:
        return (0,) * self.T

    @property
    def one(self) -> SkewSeries:
        return self.monomial(1, 0)

    @property
    def tau(self) -> SkewSeries:
        return self.monomial(1, 1)

    def monomial(self, c: int, t: int) -> SkewSeries:
        out = [0] * self.T
        if 0 <= t < self.T:
            out[t] = c
        return tuple(out)

    def series(self, coeffs: Sequence[int]) -> SkewSeries:
        out = list(coeffs[: self.T])
        return tuple(out + [0] * (self.T - len(out)))

    def add(self, a: SkewSeries, b: SkewSeries) -> SkewSeries:
        F = self.field
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def sub(self, a: SkewSeries, b: SkewSeries) -> SkewSeries:
        F = self.field
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def mul(self, a: SkewSeries, b: SkewSeries) -> SkewSeries:
        F, T = self.field, self.T
        out = [0] * T
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(T - i):
                y = b[j]
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, F.frob(y, i)))
        return tuple(out)

    # --- Matrices ---

    def zeros(self, n: int) -> SkewMatrix:
        return [[self.zero] * n for _ in range(n)]

    def diagonal(self, entries: Sequence[SkewSeries]) -> SkewMatrix:
        out = self.zeros(len(entries))
        for i, x in enumerate(entries):
            out[i][i] = x
        return out

    def identity(self, n: int) -> SkewMatrix:
        return self.diagonal([self.one] * n)

    def scalar_matrix(self, s: SkewSeries, n: int) -> SkewMatrix:
        return self.diagonal([s] * n)

    def matmul(self, A: SkewMatrix, B: SkewMatrix) -> SkewMatrix:
        n, m = len(A), len(B[0]) if B else 0
        out = [[self.zero] * m for _ in range(n)]
        for i in range(n):
            for k, x in enumerate(A[i]):
                if not any(x):
                    continue
                for j in range(m):
                    y = B[k][j]
                    if any(y):
                        out[i][j] = self.add(out[i][j], self.mul(x, y))
        return out

    def mat_sub(self, A: SkewMatrix, B: SkewMatrix) -> SkewMatrix:
        return [[self.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]

    def commutator(self, A: SkewMatrix, B: SkewMatrix) -> SkewMatrix:
        return self.mat_sub(self.matmul(A, B), self.matmul(B, A))

    def mat_equal(self, A: SkewMatrix, B: SkewMatrix) -> bool:
        return [list(r) for r in A] == [list(r) for r in B]

    def extend(self, A: SkewMatrix, T: int) -> SkewMatrix:
        """Re-read A in a ring with truncation T >= self.T."""
        pad = (0,) * (T - self.T)
        return [[x + pad for x in row] for row in A]
