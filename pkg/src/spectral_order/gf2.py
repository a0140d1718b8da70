"""Bit-packed linear algebra over the field with two elements.

Vectors are Python ints read as bitsets (bit ``i`` is coordinate ``i``).
A matrix is a :class:`Matrix` holding its columns as bitsets, so applying it
to a vector XORs together the columns selected by the vector's set bits.
Elimination always pivots on the lowest available column index, which makes
every returned witness reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def bits(v: int) -> list[int]:
    """Indices of the set bits of ``v`` in increasing order."""
    out = []
    i = 0
    while v:
        if v & 1:
            out.append(i)
        v >>= 1
        i += 1
    return out


def from_indices(indices: Iterable[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


@dataclass(frozen=True)
class Matrix:
    nrows: int
    cols: tuple[int, ...]

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, (0,) * ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int]]) -> "Matrix":
        """Build from ``(row, col)`` pairs; repeated pairs cancel mod 2."""
        cols = [0] * ncols
        for r, c in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            cols[c] ^= 1 << r
        return cls(nrows, tuple(cols))

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls.from_entries(
            nrows, ncols, ((r, c) for r in range(nrows) for c in range(ncols) if rows[r][c] % 2)
        )

    def entries(self) -> list[tuple[int, int]]:
        return [(r, c) for c, col in enumerate(self.cols) for r in bits(col)]

    def to_dense(self) -> list[list[int]]:
        return [[(self.cols[c] >> r) & 1 for c in range(self.ncols)] for r in range(self.nrows)]

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __call__(self, v: int) -> int:
        out = 0
        c = 0
        while v:
            if v & 1:
                out ^= self.cols[c]
            v >>= 1
            c += 1
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, tuple(self(col) for col in other.cols))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, tuple(a ^ b for a, b in zip(self.cols, other.cols)))

    def rows(self) -> list[int]:
        rows = [0] * self.nrows
        for c, col in enumerate(self.cols):
            for r in bits(col):
                rows[r] |= 1 << c
        return rows

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; basis pair ``(i, j)`` sits at index ``i * other.ncols + j``."""
        cols = []
        for a in self.cols:
            for b in other.cols:
                col = 0
                for r in bits(a):
                    col |= b << (r * other.nrows)
                cols.append(col)
        return Matrix(self.nrows * other.nrows, tuple(cols))


def _echelon(rows: list[int], width: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [r for r in rows]
    pivots: list[int] = []
    rank = 0
    for c in range(width):
        mask = 1 << c
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        pivots.append(c)
        rank += 1
    return rows[:rank], pivots


def rank(m: Matrix) -> int:
    return len(_echelon(m.rows(), m.ncols)[1])


def solve(m: Matrix, b: int) -> int | None:
    """Some ``x`` with ``m(x) == b``, or ``None`` when ``b`` is not in the image.

    Free variables are set to zero, so the answer is deterministic.
    """
    n = m.ncols
    aug = [row | (((b >> r) & 1) << n) for r, row in enumerate(m.rows())]
    ech, pivots = _echelon(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = 0
    for row, c in zip(ech, pivots):
        if (row >> n) & 1:
            x |= 1 << c
    return x


def kernel(m: Matrix) -> list[int]:
    """A basis of the null space, one vector per free column."""
    n = m.ncols
    ech, pivots = _echelon(m.rows(), n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = 1 << f
        for row, c in zip(ech, pivots):
            if (row >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def span_rank(vectors: Iterable[int], width: int) -> int:
    return len(_echelon(list(vectors), width)[1])


def in_span(vectors: Sequence[int], target: int, width: int) -> bool:
    m = Matrix(width, tuple(vectors))
    return solve(m, target) is not None
