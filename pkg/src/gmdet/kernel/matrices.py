"""Small dense matrices over any coefficient type with ring operators."""
from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from ..errors import InputError, InternalError


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]):
        self.data = tuple(tuple(row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.data):
            raise InternalError("ragged matrix")

    @classmethod
    def from_rows(cls, rows) -> "Matrix":
        return cls(rows)

    @classmethod
    def identity(cls, n: int, one, zero) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def filled(cls, rows: int, cols: int, value) -> "Matrix":
        return cls([[value for _ in range(cols)] for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def map(self, f: Callable) -> "Matrix":
        return Matrix([[f(x) for x in row] for row in self.data])

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InternalError("matrix shape mismatch in addition")
        return Matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise InternalError("matrix shape mismatch in product")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = self.data[i][0] * other.data[0][j]
                    for k in range(1, self.cols):
                        acc = acc + self.data[i][k] * other.data[k][j]
                    row.append(acc)
                out.append(row)
            return Matrix(out)
        return self.map(lambda x: x * other)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def scale(self, c) -> "Matrix":
        return self.map(lambda x: x * c)

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self):
        if not self.is_square():
            raise InternalError("trace of non-square matrix")
        acc = self.data[0][0]
        for i in range(1, self.rows):
            acc = acc + self.data[i][i]
        return acc

    def det(self):
        """Laplace expansion; fine for the small ranks used here."""
        if not self.is_square():
            raise InternalError("determinant of non-square matrix")
        n = self.rows
        if n == 1:
            return self.data[0][0]
        if n == 2:
            return self.data[0][0] * self.data[1][1] - self.data[0][1] * self.data[1][0]
        acc = None
        for j in range(n):
            minor = Matrix([row[:j] + row[j + 1:] for row in self.data[1:]])
            term = self.data[0][j] * minor.det()
            if j % 2 == 1:
                term = -term
            acc = term if acc is None else acc + term
        return acc

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(a == b for r1, r2 in zip(self.data, other.data) for a, b in zip(r1, r2))

    def inv(self) -> "Matrix":
        """Gauss-Jordan inverse; entries must support /, unary -, and is_zero."""
        if not self.is_square():
            raise InternalError("inverse of non-square matrix")
        n = self.rows
        a = [list(row) for row in self.data]
        some = self.data[0][0]
        one = some / some if not some.is_zero() else None
        # find any nonzero entry to build 1 and 0 of the coefficient field
        if one is None:
            for row in self.data:
                for x in row:
                    if not x.is_zero():
                        one = x / x
                        break
                if one is not None:
                    break
        if one is None:
            raise InputError("singular matrix (zero matrix) has no inverse")
        zero = one - one
        inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not a[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                raise InputError("singular matrix has no inverse")
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            pinv = one / a[col][col]
            a[col] = [x * pinv for x in a[col]]
            inv[col] = [x * pinv for x in inv[col]]
            for r in range(n):
                if r == col or a[r][col].is_zero():
                    continue
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
        return Matrix(inv)

    def render(self, entry_render: Callable) -> str:
        rows = [",".join(entry_render(x) for x in row) for row in self.data]
        return "[" + ";".join(rows) + "]"

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"
