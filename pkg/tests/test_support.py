"""Support matrices and their reduction to T-shape."""

import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sdres.diffpoly import mono, yvar
from sdres.linalg import rank_exact
from sdres.support import (
    SupportMatrix,
    dtrdeg_monomials,
    entry,
    entry_degree,
    entry_eval,
    is_reduced,
    is_tshape,
    rdm,
    replay,
    support_matrix,
)

# ----------------------------------------------------------------------
# Entries
# ----------------------------------------------------------------------


def test_entry_normalization_and_eval():
    e = entry([1, 2, 0, 0])
    assert e == (Fraction(1), Fraction(2))
    assert entry_degree(e) == 1
    assert entry_degree(entry([0, 0])) < 0
    assert entry_eval(entry([1, 0, 3]), Fraction(2)) == 13


# ----------------------------------------------------------------------
# Building support matrices
# ----------------------------------------------------------------------


def test_support_matrix_reference(reduced_triple_monomials):
    mat = support_matrix(reduced_triple_monomials, 3)
    assert mat.m == 3 and mat.n == 3
    expected = (
        (entry([1, 1]), entry([0, 0, 0, 1]), entry([1, 1])),
        (entry([3, 2]), entry([0, 0, 1, 2]), entry([3, 2])),
        (entry([2, 3]), entry([0, 1, 0, 3]), entry([3, 3])),
    )
    assert mat.entries == expected
    assert mat.cols == (1, 2, 3)
    assert mat.regenerated().entries == expected


def test_support_matrix_rejects_bad_input():
    from sdres.diffpoly import uvar

    with pytest.raises(ValueError):
        support_matrix((mono({uvar(0, 0): 1}),), 2)
    with pytest.raises(ValueError):
        support_matrix((mono({yvar(3, 0): 1}),), 2)


# ----------------------------------------------------------------------
# Reduction: reference cases
# ----------------------------------------------------------------------


def _check_audit(mat, res):
    """The trace must replay to the reduced matrix and its row labels must
    regenerate the entries exactly."""
    assert replay(mat, res.trace).entries == res.matrix.entries
    assert res.matrix.regenerated().entries == res.matrix.entries


def test_rdm_full_rank_triple(reduced_triple_monomials):
    mat = support_matrix(reduced_triple_monomials, 3)
    t0 = time.monotonic()
    res = rdm(mat)
    assert time.monotonic() - t0 < 1.0
    assert res.rank == 3
    assert res.index[0] + res.index[1] == 3
    assert is_tshape(res.matrix, res.index)
    assert is_reduced(res.matrix)
    _check_audit(mat, res)
    assert dtrdeg_monomials(reduced_triple_monomials, 3) == 3


def test_rdm_tshape_five(tshape_five_monomials):
    mat = support_matrix(tshape_five_monomials, 5)
    t0 = time.monotonic()
    res = rdm(mat)
    assert time.monotonic() - t0 < 1.0
    assert res.index == (1, 2)
    assert res.rank == 3
    assert is_tshape(res.matrix, res.index)
    _check_audit(mat, res)
    assert dtrdeg_monomials(tshape_five_monomials, 5) == 3


def test_rdm_zero_matrix():
    mats = support_matrix((mono({}),), 2)
    res = rdm(mats)
    assert res.index == (0, 0) and res.rank == 0


def test_rdm_rank_one_repeats():
    b = mono({yvar(1, 0): 1, yvar(2, 1): 2})
    res = rdm(support_matrix((b, b, b), 2))
    assert res.rank == 1
    assert is_tshape(res.matrix, res.index)


def test_rdm_duplicate_column_structure():
    # rows proportional in one variable but independent in the other
    ms = (
        mono({yvar(1, 0): -1, yvar(2, 0): 1}),
        mono({yvar(1, 0): -1, yvar(2, 1): 1}),
        mono({yvar(1, 0): 1, yvar(2, 0): 1, yvar(2, 1): 1}),
    )
    res = rdm(support_matrix(ms, 3))
    assert res.rank == 2
    assert is_tshape(res.matrix, res.index)


# ----------------------------------------------------------------------
# Randomized audit against a numeric rank oracle
# ----------------------------------------------------------------------


def _numeric_rank(mat: SupportMatrix, rng: random.Random, trials: int = 6) -> int:
    """Rank of the evaluated matrix, maximized over random points: a lower
    bound on the symbolic rank that is exact with overwhelming probability."""
    best = 0
    for _ in range(trials):
        vals = [Fraction(rng.randrange(10**6, 10**7)) for _ in range(mat.n)]
        best = max(best, rank_exact(mat.evaluated(vals)))
    return best


_rand_mono = st.dictionaries(
    st.tuples(st.integers(1, 4), st.integers(0, 3)).map(lambda t: yvar(*t)),
    st.integers(-3, 3).filter(bool),
    min_size=0,
    max_size=5,
).map(mono)


@settings(max_examples=120, deadline=None)
@given(st.lists(_rand_mono, min_size=1, max_size=5), st.integers(0, 10**6))
def test_rdm_matches_numeric_rank(monos, seed):
    mat = support_matrix(monos, 4)
    res = rdm(mat)
    assert is_tshape(res.matrix, res.index)
    _check_audit(mat, res)
    rng = random.Random(seed)
    assert res.rank == _numeric_rank(mat, rng)
