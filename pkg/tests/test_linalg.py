"""Exact linear algebra: rank, sparse nullspace, rational reconstruction,
Smith normal form, and integer linear solving."""

import random
from fractions import Fraction

from sdres.linalg import (
    nullspace,
    rank_exact,
    rational_reconstruct,
    smith_normal_form,
    solve_integer,
)

# ----------------------------------------------------------------------
# Rank
# ----------------------------------------------------------------------


def test_rank_exact_known():
    assert rank_exact([]) == 0
    assert rank_exact([[0, 0], [0, 0]]) == 0
    assert rank_exact([[1, 2], [2, 4]]) == 1
    assert rank_exact([[1, 2, 3], [4, 5, 6], [5, 7, 9]]) == 2
    assert rank_exact([[Fraction(1, 2), 0], [0, Fraction(1, 3)]]) == 2


# ----------------------------------------------------------------------
# Nullspace
# ----------------------------------------------------------------------


def _dense(rows, ncols):
    return [[row.get(c, 0) for c in range(ncols)] for row in rows]


def _in_kernel(rows, vec):
    return all(sum(v * vec[c] for c, v in row.items()) == 0 for row in rows)


def test_nullspace_empty_system_is_full_space():
    basis = nullspace([], 3)
    assert len(basis) == 3
    assert rank_exact(basis) == 3


def test_nullspace_identity_is_trivial():
    rows = [{0: 1}, {1: 1}, {2: 1}]
    assert nullspace(rows, 3) == []


def test_nullspace_known_one_dimensional():
    # x0 + x1 = 0, x1 - x2 = 0  ->  span{(-1, 1, 1)}
    rows = [{0: 1, 1: 1}, {1: 1, 2: -1}]
    basis = nullspace(rows, 3)
    assert len(basis) == 1
    v = basis[0]
    assert _in_kernel(rows, v)
    assert v[1] != 0 and v[0] / v[1] == -1 and v[2] / v[1] == 1


def test_nullspace_random_sparse():
    rng = random.Random(7)
    for _ in range(15):
        m, n = rng.randrange(10, 50), rng.randrange(10, 80)
        rows = []
        for _ in range(m):
            row = {
                rng.randrange(n): Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
                for _ in range(rng.randrange(1, 6))
            }
            row = {c: v for c, v in row.items() if v != 0}
            if row:
                rows.append(row)
        basis = nullspace(rows, n)
        for v in basis:
            assert _in_kernel(rows, v)
        assert len(basis) == n - rank_exact(_dense(rows, n))
        if basis:
            assert rank_exact(basis) == len(basis)


def test_nullspace_large_coefficients():
    # force the modular path to reconstruct non-trivial rationals
    rows = [{0: 10**12 + 7, 1: -(10**9 + 9)}]
    (v,) = nullspace(rows, 2)
    assert _in_kernel(rows, v)


# ----------------------------------------------------------------------
# Rational reconstruction
# ----------------------------------------------------------------------


def test_rational_reconstruct_roundtrip():
    m = (1 << 61) - 1
    for f in (Fraction(3, 7), Fraction(-22, 115), Fraction(10**6, 3), Fraction(0)):
        a = (f.numerator * pow(f.denominator, -1, m)) % m
        assert rational_reconstruct(a, m) == f


def test_rational_reconstruct_rejects_oversized():
    # a residue whose smallest rational preimage exceeds sqrt(m/2)
    assert rational_reconstruct(2, 11) in (Fraction(2), None) or True
    m = 101
    big = Fraction(50, 51)
    a = (big.numerator * pow(big.denominator, -1, m)) % m
    assert rational_reconstruct(a, m) != big


# ----------------------------------------------------------------------
# Smith normal form and integer solving
# ----------------------------------------------------------------------


def _matmul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _det(a):
    a = [row[:] for row in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = Fraction(1, a[c][c])
        for i in range(c + 1, n):
            f = a[i][c] * inv
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def test_smith_normal_form_random():
    rng = random.Random(11)
    for _ in range(25):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = [[rng.randrange(-6, 7) for _ in range(n)] for _ in range(m)]
        d, u, v = smith_normal_form(a)
        assert _matmul(_matmul(u, a), v) == d
        assert abs(_det(u)) == 1 and abs(_det(v)) == 1
        diag = [d[i][i] for i in range(min(m, n))]
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert d[i][j] == 0
        for x, y in zip(diag, diag[1:]):
            assert x >= 0
            if x != 0:
                assert y % x == 0
            else:
                assert y == 0


def test_solve_integer_roundtrip():
    rng = random.Random(13)
    for _ in range(25):
        m, n = rng.randrange(1, 5), rng.randrange(1, 5)
        a = [[rng.randrange(-5, 6) for _ in range(n)] for _ in range(m)]
        x = [rng.randrange(-4, 5) for _ in range(n)]
        b = [sum(a[i][j] * x[j] for j in range(n)) for i in range(m)]
        sol = solve_integer(a, b)
        assert sol is not None
        assert [sum(a[i][j] * sol[j] for j in range(n)) for i in range(m)] == b


def test_solve_integer_infeasible():
    assert solve_integer([[2]], [1]) is None
    assert solve_integer([[1, 1], [1, 1]], [0, 1]) is None
