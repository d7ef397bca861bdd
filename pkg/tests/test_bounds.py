"""Order matrices, Jacobi numbers, and degree bounds."""

import random
import time
from fractions import Fraction

import pytest

from sdres.diffpoly import DiffSystem, NEG_INF, ONE, mono, yvar
from sdres.bounds import (
    bezout_block_bound,
    cofactor_degree_bound,
    degree_bound,
    jacobi_number,
    jacobi_number_bruteforce,
    order_bounds,
    order_matrix,
)


def _m(**kw):
    exps = {}
    for name, e in kw.items():
        j, order = name[1:].split("_")
        exps[yvar(int(j), int(order))] = e
    return mono(exps)


# ----------------------------------------------------------------------
# Jacobi numbers
# ----------------------------------------------------------------------


def _deleted(a, i):
    return [row for k, row in enumerate(a) if k != i]


def test_jacobi_reference_matrix(order_matrix_4x3):
    a = order_matrix_4x3
    jac = tuple(jacobi_number(_deleted(a, i)) for i in range(4))
    assert jac == (12, 12, 7, 10)
    assert jac == tuple(jacobi_number_bruteforce(_deleted(a, i)) for i in range(4))


def test_jacobi_neg_inf_distinction():
    # every entry is >= 0 in the finite positions, yet one deletion admits
    # no full diagonal at all
    a = (
        (1, 2, NEG_INF),
        (1, 2, NEG_INF),
        (0, 0, NEG_INF),
        (1, NEG_INF, 0),
    )
    assert jacobi_number(_deleted(a, 2)) == 3
    assert jacobi_number(_deleted(a, 3)) == NEG_INF


def test_jacobi_trivia():
    assert jacobi_number([]) == 0
    assert jacobi_number([[NEG_INF]]) == NEG_INF
    assert jacobi_number([[4]]) == 4
    assert jacobi_number([[1, 2], [3, 4]]) == 5


def test_jacobi_random_vs_bruteforce():
    rng = random.Random(3)
    t0 = time.monotonic()
    for _ in range(200):
        m = rng.randrange(1, 7)
        n = rng.randrange(1, 7)
        a = [
            [NEG_INF if rng.random() < 0.3 else rng.randrange(0, 10) for _ in range(n)]
            for _ in range(m)
        ]
        assert jacobi_number(a) == jacobi_number_bruteforce(a)
    assert time.monotonic() - t0 < 5.0


# ----------------------------------------------------------------------
# Order bounds on concrete systems
# ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def high_order_system():
    """Essential n=3 system realizing the reference 4x3 order matrix."""
    return DiffSystem(
        n=3,
        supports=(
            (ONE, _m(y1_5=1), _m(y3_0=1)),
            (ONE, _m(y1_5=1), _m(y2_0=1)),
            (ONE, _m(y1_0=1), _m(y2_3=1), _m(y3_5=1)),
            (ONE, _m(y1_5=1), _m(y2_2=1)),
        ),
    )


def test_order_bounds_reference(high_order_system, order_matrix_4x3):
    rep = order_bounds(high_order_system)
    assert rep.order_matrix == order_matrix_4x3
    assert rep.jacobi == (12, 12, 7, 10)
    assert rep.gamma == 0
    assert rep.modified == rep.jacobi
    assert rep.alt_L == (13, 13, 13, 13)
    assert rep.alt_E == (15, 15, 15, 15)
    assert rep.subset == (0, 1, 2, 3)
    assert rep.effective == rep.jacobi


def test_order_bounds_product_pair(product_pair_system):
    rep = order_bounds(product_pair_system)
    assert rep.order_matrix == ((0, 0), (0, 1), (1, 1))
    assert rep.modified == (2, 1, 1)
    assert rep.effective == (2, 1, 1)


def test_order_bounds_masked_product(masked_product_system):
    rep = order_bounds(masked_product_system)
    assert rep.jacobi == (11, 11, 11, 1)
    assert rep.subset == (0, 1, 2)
    assert rep.effective == (1, 1, 1, NEG_INF)


def test_order_bounds_requires_essential():
    s = (ONE, _m(y1_0=1))
    with pytest.raises(ValueError):
        order_bounds(DiffSystem(n=2, supports=(s, s, s)))


def test_gamma_shifts_bounds():
    # every occurrence of y1 is at order >= 1, so gamma = 1
    supports = (
        (ONE, _m(y1_1=1)),
        (ONE, _m(y1_2=1, y2_0=1)),
        (ONE, _m(y2_1=1)),
    )
    rep = order_bounds(DiffSystem(n=2, supports=supports))
    assert rep.gamma == 1
    assert rep.modified == tuple(x - 1 for x in rep.jacobi)


# ----------------------------------------------------------------------
# Degree bounds
# ----------------------------------------------------------------------


def test_degree_bound_product_pair(product_pair_system):
    assert degree_bound(product_pair_system, (1, 0, 0)) == 81
    assert degree_bound(product_pair_system, (0, 0, 0)) == 27
    # None marks a block that does not appear
    assert degree_bound(product_pair_system, (1, 0, None)) == 27
    with pytest.raises(ValueError):
        degree_bound(product_pair_system, (-1, 0, 0))


def test_cofactor_degree_bound(product_pair_system):
    b = cofactor_degree_bound(product_pair_system, (1, 0, 0), 5)
    # m = 2, all N_i0 trivial: head = 3, bound = 3*5 - 2 - 1 per block
    assert b == {0: 12, 1: 12, 2: 12}
    b2 = cofactor_degree_bound(product_pair_system, (1, None, 0), 5)
    assert set(b2) == {0, 2}


def test_bezout_block_bound(dense_linear_system):
    for i in range(3):
        assert bezout_block_bound(dense_linear_system, i) == 1


def test_bezout_block_bound_orders(cascade_system):
    # s = 1 + 0 + 1 = 2; degs = (2, 1, 1)
    assert bezout_block_bound(cascade_system, 0) == Fraction(2, 2) * 4
    assert bezout_block_bound(cascade_system, 1) == 3 * 4
