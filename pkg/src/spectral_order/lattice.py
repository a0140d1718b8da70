"""Exact integer linear systems and a small rational simplex solver.

Integer systems are solved by unimodular column reduction (an integer echelon
form), which yields a particular solution together with a lattice basis of
the kernel.  The simplex method runs on exact rationals with Bland's rule so
every answer is exact and reproducible.  It uses ``gmpy2.mpq`` when gmpy2 is
installed and :class:`fractions.Fraction` otherwise; results are always
returned as ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:  # exact rationals in C; same semantics as Fraction, much faster
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

@dataclass(frozen=True)
class IntegerSolution:
    particular: tuple[int, ...]
    kernel: tuple[tuple[int, ...], ...]


def _echelon_with_transform(rows: list[list[int]], width: int) -> tuple[list[list[int]], list[list[int]], int]:
    """Integer row echelon form of ``rows`` (n x width) by unimodular row operations.

    Returns ``(M, T, r)`` with ``T @ rows == M``, ``T`` unimodular, and the
    first ``r`` rows of ``M`` nonzero in echelon form.
    """
    n = len(rows)
    M = [list(r) for r in rows]
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    r = 0
    for j in range(width):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if M[i][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(M[i][j]), i))
            if piv != r:
                M[r], M[piv] = M[piv], M[r]
                T[r], T[piv] = T[piv], T[r]
            done = True
            for i in range(r + 1, n):
                if M[i][j]:
                    q = M[i][j] // M[r][j]
                    if q:
                        Mi, Mr = M[i], M[r]
                        for t in range(j, width):
                            Mi[t] -= q * Mr[t]
                        Ti, Tr = T[i], T[r]
                        for t in range(n):
                            Ti[t] -= q * Tr[t]
                    if M[i][j]:
                        done = False
            if done:
                break
        if r < n and M[r][j] != 0:
            if M[r][j] < 0:
                M[r] = [-v for v in M[r]]
                T[r] = [-v for v in T[r]]
            r += 1
    return M, T, r


class IntegerSystem:
    """A fixed integer matrix ``A`` prepared for repeated solves of ``A x = b``.

    ``A`` is given by rows; ``ncols`` is needed when ``A`` has no rows.
    """

    def __init__(self, A: Sequence[Sequence[int]], ncols: int | None = None):
        self.m = len(A)
        self.n = ncols if ncols is not None else (len(A[0]) if A else 0)
        At = [[A[i][j] for i in range(self.m)] for j in range(self.n)]
        self._M, self._T, self._r = _echelon_with_transform(At, self.m)
        self._pivots = [next(j for j in range(self.m) if self._M[i][j] != 0) for i in range(self._r)]
        self.kernel: tuple[tuple[int, ...], ...] = _reduce_basis(
            tuple(tuple(self._T[i]) for i in range(self._r, self.n))
        )

    def solve(self, b: Sequence[int]) -> IntegerSolution | None:
        """All integer solutions, or ``None`` when there is none."""
        M, r = self._M, self._r
        y = [0] * r
        for i in range(r):
            p = self._pivots[i]
            rest = b[p] - sum(y[t] * M[t][p] for t in range(i))
            if rest % M[i][p]:
                return None
            y[i] = rest // M[i][p]
        for j in range(self.m):
            if sum(y[t] * M[t][j] for t in range(r)) != b[j]:
                return None
        x = [sum(y[i] * self._T[i][c] for i in range(r)) for c in range(self.n)]
        return IntegerSolution(tuple(x), self.kernel)


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> IntegerSolution | None:
    """All integer solutions of ``A x = b`` as particular solution plus kernel lattice.

    ``A`` is given by rows; ``ncols`` is needed when ``A`` has no rows.
    Returns ``None`` when no integer solution exists.
    """
    return IntegerSystem(A, ncols).solve(b)


def _reduce_basis(basis: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    """Size-reduce a lattice basis with integer row echelon form (same lattice)."""
    if not basis:
        return basis
    width = len(basis[0])
    M, _, r = _echelon_with_transform([list(v) for v in basis], width)
    rows = [M[i] for i in range(r)]
    # Reduce entries above each pivot.
    for i in range(r):
        p = next(j for j in range(width) if rows[i][j])
        for k in range(i):
            q = rows[k][p] // rows[i][p]
            if q:
                rows[k] = [a - q * c for a, c in zip(rows[k], rows[i])]
    return tuple(tuple(v) for v in rows)


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    sol = solve_integer(A, [0] * len(A), ncols)
    assert sol is not None
    return sol.kernel


# ---------------------------------------------------------------------------
# Exact simplex.


class LPResult:
    def __init__(self, status: str, x: list[Fraction] | None = None, value: Fraction | None = None):
        self.status = status
        self.x = x
        self.value = value

    def __repr__(self) -> str:
        return f"LPResult({self.status}, value={self.value})"


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pr = tab[row]
    pv = pr[col]
    if pv != 1:
        inv = 1 / pv
        tab[row] = pr = [v * inv for v in pr]
    for i, tr in enumerate(tab):
        if i != row:
            f = tr[col]
            if f:
                tab[i] = [a - f * b for a, b in zip(tr, pr)]
    basis[row] = col


def _run(tab: list[list[Fraction]], basis: list[int], ncols: int, allowed: int) -> str:
    """Minimize the objective in the last row; columns ``>= allowed`` never enter."""
    obj = tab[-1]
    while True:
        obj = tab[-1]
        enter = next((j for j in range(min(ncols, allowed)) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(len(tab) - 1):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], enter)


def simplex_standard(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly."""
    m = len(A)
    n = len(c)
    A = [[_Q(v) for v in row] for row in A]
    b = [_Q(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    ncols = n + m
    tab = []
    for i in range(m):
        tab.append(A[i] + [_Q(int(i == k)) for k in range(m)] + [b[i]])
    basis = [n + i for i in range(m)]
    # phase 1 objective: sum of artificials, expressed in nonbasic terms
    obj = [_Q(0)] * (ncols + 1)
    for i in range(m):
        for j in range(ncols + 1):
            if j < n or j == ncols:
                obj[j] -= tab[i][j]
    tab.append(obj)
    _run(tab, basis, ncols, ncols)
    if -tab[-1][-1] > 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    i = 0
    while i < m:
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                m -= 1
                continue
            _pivot(tab, basis, i, col)
        i += 1
    # phase 2
    obj = [_Q(v) for v in c] + [_Q(0)] * m + [_Q(0)]
    for i in range(m):
        f = obj[basis[i]]
        if f:
            obj = [a - f * r for a, r in zip(obj, tab[i])]
    tab[-1] = obj
    status = _run(tab, basis, ncols, n)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [_Q(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    value = sum((_Q(ci) * xi for ci, xi in zip(c, x)), _Q(0))
    return LPResult("optimal", [_frac(v) for v in x], _frac(value))


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def linprog_exact(
    c: Sequence,
    A_ge: Sequence[Sequence] = (),
    b_ge: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nonneg: bool = False,
) -> LPResult:
    """Minimize ``c.x`` subject to ``A_ge x >= b_ge`` and ``A_eq x = b_eq``.

    Variables are free unless ``nonneg`` is set.
    """
    n = len(c)
    k = len(A_ge)
    rows, rhs = [], []
    for idx, (row, bi) in enumerate(zip(A_ge, b_ge)):
        base = list(row) if nonneg else list(row) + [-v for v in row]
        slack = [0] * k
        slack[idx] = -1
        rows.append(base + slack)
        rhs.append(bi)
    for row, bi in zip(A_eq, b_eq):
        base = list(row) if nonneg else list(row) + [-v for v in row]
        rows.append(base + [0] * k)
        rhs.append(bi)
    cc = list(c) if nonneg else list(c) + [-v for v in c]
    cc += [0] * k
    res = simplex_standard(cc, rows, rhs)
    if res.status != "optimal":
        return res
    if nonneg:
        x = res.x[:n]
    else:
        x = [res.x[i] - res.x[n + i] for i in range(n)]
    return LPResult("optimal", x, res.value)
