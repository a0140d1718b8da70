"""Exact integer systems, the rational simplex and F2 linear algebra."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_order import gf2
from spectral_order.lattice import integer_kernel, linprog_exact, solve_integer

small = st.integers(min_value=-4, max_value=4)


def _matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_integer_solutions_are_exact(m, n, data):
    A = [[data.draw(small) for _ in range(n)] for _ in range(m)]
    x0 = [data.draw(small) for _ in range(n)]
    b = _matvec(A, x0)
    sol = solve_integer(A, b)
    assert sol is not None
    assert _matvec(A, sol.particular) == b
    for v in sol.kernel:
        assert _matvec(A, v) == [0] * m
    # x0 - particular lies in the kernel lattice: solve against the basis
    diff = [a - c for a, c in zip(x0, sol.particular)]
    if sol.kernel:
        basis_rows = [[v[i] for v in sol.kernel] for i in range(n)]
        assert solve_integer(basis_rows, diff) is not None
    else:
        assert diff == [0] * n


def test_integer_system_detects_non_integral_and_inconsistent():
    assert solve_integer([[2]], [3]) is None
    assert solve_integer([[1, 1], [1, 1]], [1, 2]) is None
    assert integer_kernel([], 2) == ((1, 0), (0, 1))
    assert solve_integer([[2, 4]], [6]).kernel in (((2, -1),), ((-2, 1),))


def _solve_square(rows, rhs):
    n = len(rows)
    M = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _vertex_oracle(c, A_ge, b_ge, n):
    """Minimum over feasible vertices of the polytope (bounded by construction)."""
    best = None
    for rows in itertools.combinations(range(len(A_ge)), n):
        x = _solve_square([A_ge[r] for r in rows], [b_ge[r] for r in rows])
        if x is None:
            continue
        if all(sum(a * v for a, v in zip(row, x)) >= b for row, b in zip(A_ge, b_ge)):
            val = sum(a * v for a, v in zip(c, x))
            best = val if best is None else min(best, val)
    return best


def test_simplex_matches_vertex_enumeration():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randint(1, 3)
        extra = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, 3))]
        extra_b = [rng.randint(-4, 2) for _ in extra]
        box = [[int(i == j) for j in range(n)] for i in range(n)] + [[-int(i == j) for j in range(n)] for i in range(n)]
        box_b = [0] * n + [-3] * n
        A_ge, b_ge = box + extra, box_b + extra_b
        c = [rng.randint(-3, 3) for _ in range(n)]
        res = linprog_exact(c, A_ge, b_ge)
        want = _vertex_oracle(c, A_ge, b_ge, n)
        if want is None:
            assert res.status == "infeasible"
        else:
            assert res.status == "optimal"
            assert res.value == want
            assert all(isinstance(v, Fraction) for v in res.x)


def test_simplex_reports_unbounded_and_equalities():
    assert linprog_exact([-1], [[1]], [0]).status == "unbounded"
    res = linprog_exact([1, 1], A_eq=[[1, 2]], b_eq=[3], nonneg=True)
    assert res.status == "optimal" and res.value == Fraction(3, 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.data())
def test_gf2_solve_and_kernel(nr, nc, data):
    dense = [[data.draw(st.integers(0, 1)) for _ in range(nc)] for _ in range(nr)]
    m = gf2.Matrix.from_dense(dense)
    assert m.to_dense() == dense
    v = data.draw(st.integers(0, (1 << nc) - 1))
    b = m(v)
    sol = gf2.solve(m, b)
    assert sol is not None and m(sol) == b
    ker = gf2.kernel(m)
    assert all(m(k) == 0 for k in ker)
    assert len(ker) + gf2.rank(m) == nc
    assert gf2.span_rank(ker, nc) == len(ker)


def test_gf2_products_and_kron():
    a = gf2.Matrix.from_dense([[1, 1], [0, 1]])
    assert (a @ a).to_dense() == [[1, 0], [0, 1]]
    assert (a + a).is_zero()
    k = a.kron(gf2.Matrix.identity(2))
    assert k.to_dense() == [[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert gf2.bits(gf2.from_indices([0, 3])) == [0, 3]
    assert gf2.in_span([0b011, 0b110], 0b101, 3)
    assert not gf2.in_span([0b011], 0b100, 3)
    assert gf2.solve(gf2.Matrix.from_dense([[0]]), 1) is None
