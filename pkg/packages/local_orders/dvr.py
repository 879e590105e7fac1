"""The truncated discrete valuation ring R_N = k[[pi]] / (pi^N).

Elements are tuples of N residue-field encodings, the pi-digits low order
first. Every identity checked in this package is an identity in R_N; the
valuation of 0 is reported as N.

Matrices are lists of rows of elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from packages.field_arith.field import FieldSpec
from packages.shared.errors import InsufficientTruncation, TypeVectorError

Elem = tuple[int, ...]
Matrix = list[list[Elem]]


@dataclass(frozen=True)
class TruncatedDVR:
    base: FieldSpec
    N: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise TypeVectorError(f"truncation level must be at least 1, got {self.N}")

    # --- Elements ---

    @property
    def zero(self) -> Elem:
        return (0,) * self.N

    @property
    def one(self) -> Elem:
        return self.constant(1)

    @property
    def pi(self) -> Elem:
        return self.monomial(1, 1)

    def constant(self, c: int) -> Elem:
        return (c,) + (0,) * (self.N - 1)

    def monomial(self, c: int, t: int) -> Elem:
        """c * pi^t (zero once t >= N)."""
        out = [0] * self.N
        if 0 <= t < self.N:
            out[t] = c
        return tuple(out)

    def element(self, digits: Sequence[int]) -> Elem:
        """Truncate or zero-pad a digit list."""
        for c in digits:
            if not 0 <= c < self.base.order:
                raise TypeVectorError(f"digit {c} is not an element of F_{self.base.order}")
        out = list(digits[: self.N])
        return tuple(out + [0] * (self.N - len(out)))

    # --- Arithmetic ---

    def add(self, a: Elem, b: Elem) -> Elem:
        F = self.base
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        F = self.base
        return tuple(F.neg(x) for x in a)

    def sub(self, a: Elem, b: Elem) -> Elem:
        F = self.base
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def scale(self, c: int, a: Elem) -> Elem:
        F = self.base
        return tuple(F.mul(c, x) for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        F, N = self.base, self.N
        out = [0] * N
        for i, x in enumerate(a):
            if x:
                for j in range(N - i):
                    y = b[j]
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return tuple(out)

    def val(self, a: Elem) -> int:
        for i, x in enumerate(a):
            if x:
                return i
        return self.N

    def is_zero(self, a: Elem) -> bool:
        return not any(a)

    def is_unit(self, a: Elem) -> bool:
        return a[0] != 0

    def inv(self, a: Elem) -> Elem:
        """Inverse of a unit, digit by digit."""
        F, N = self.base, self.N
        if not a[0]:
            raise InsufficientTruncation("element of positive valuation is not invertible")
        lead = F.inv(a[0])
        out = [lead] + [0] * (N - 1)
        for k in range(1, N):
            acc = 0
            for i in range(1, k + 1):
                if a[i] and out[k - i]:
                    acc = F.add(acc, F.mul(a[i], out[k - i]))
            out[k] = F.neg(F.mul(lead, acc))
        return tuple(out)

    def shift_up(self, a: Elem, k: int = 1) -> Elem:
        """pi^k * a."""
        if k >= self.N:
            return self.zero
        return (0,) * k + a[: self.N - k]

    def shift_down(self, a: Elem, k: int = 1) -> Elem:
        """a / pi^k for val(a) >= k; the top k digits are unknown and set to 0."""
        if self.val(a) < k:
            raise InsufficientTruncation(f"element of valuation {self.val(a)} is not divisible by pi^{k}")
        return a[k:] + (0,) * k

    def frob(self, a: Elem, k: int = 1) -> Elem:
        """Frobenius on coefficients, pi fixed."""
        F = self.base
        return tuple(F.frob(x, k) for x in a)

    def retruncate(self, a: Elem, N: int) -> Elem:
        return a[:N] + (0,) * max(0, N - len(a))

    # --- Matrices ---

    def zeros(self, rows: int, cols: int | None = None) -> Matrix:
        return [[self.zero] * (rows if cols is None else cols) for _ in range(rows)]

    def identity(self, n: int) -> Matrix:
        return self.diagonal([self.one] * n)

    def diagonal(self, entries: Sequence[Elem]) -> Matrix:
        n = len(entries)
        out = self.zeros(n)
        for i, x in enumerate(entries):
            out[i][i] = x
        return out

    def matmul(self, A: Matrix, B: Matrix) -> Matrix:
        if A and B and len(A[0]) != len(B):
            raise TypeVectorError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
        cols = len(B[0]) if B else 0
        out = self.zeros(len(A), cols)
        for i, row in enumerate(A):
            acc = out[i]
            for k, x in enumerate(row):
                if any(x):
                    for j in range(cols):
                        y = B[k][j]
                        if any(y):
                            acc[j] = self.add(acc[j], self.mul(x, y))
        return out

    def mat_sub(self, A: Matrix, B: Matrix) -> Matrix:
        return [[self.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]

    def mat_scale(self, c: Elem, A: Matrix) -> Matrix:
        return [[self.mul(c, x) for x in row] for row in A]

    def mat_shift(self, A: Matrix, k: int) -> Matrix:
        """pi^k A for k >= 0, A / pi^-k for k < 0."""
        if k >= 0:
            return [[self.shift_up(x, k) for x in row] for row in A]
        return [[self.shift_down(x, -k) for x in row] for row in A]

    def mat_frob(self, A: Matrix, k: int = 1) -> Matrix:
        return [[self.frob(x, k) for x in row] for row in A]

    def mat_val(self, A: Matrix) -> int:
        return min((self.val(x) for row in A for x in row), default=self.N)

    def mat_equal(self, A: Matrix, B: Matrix) -> bool:
        return [list(r) for r in A] == [list(r) for r in B]

    def transpose(self, A: Matrix) -> Matrix:
        return [list(col) for col in zip(*A)]

    def mat_inverse(self, A: Matrix) -> Matrix:
        """Inverse of a matrix that is invertible over R_N (unit determinant)."""
        n = len(A)
        work = [list(row) + list(e) for row, e in zip(A, self.identity(n))]
        for col in range(n):
            pivot = next((r for r in range(col, n) if self.is_unit(work[r][col])), None)
            if pivot is None:
                raise InsufficientTruncation("matrix is not invertible over the truncated ring")
            work[col], work[pivot] = work[pivot], work[col]
            inv = self.inv(work[col][col])
            work[col] = [self.mul(inv, x) for x in work[col]]
            for r in range(n):
                if r != col and any(work[r][col]):
                    factor = work[r][col]
                    work[r] = [self.sub(x, self.mul(factor, y)) for x, y in zip(work[r], work[col])]
        return [row[n:] for row in work]

    def mat_from_digits(self, rows: Sequence[Sequence[Sequence[int]]]) -> Matrix:
        return [[self.element(x) for x in row] for row in rows]

    def mat_to_digits(self, A: Matrix) -> list[list[list[int]]]:
        return [[list(x) for x in row] for row in A]
