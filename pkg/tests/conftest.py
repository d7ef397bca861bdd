"""Shared fixtures: small reference systems with known resultants and the
reference matrices used by the oracle tests."""

import pytest

from sdres.diffpoly import DiffSystem, ONE, mono, parse_poly, yvar


def _m(**kw):
    """Monomial shorthand: _m(y1_0=2, y2_1=1) = y1^2 * y2'."""
    exps = {}
    for name, e in kw.items():
        j, order = name[1:].split("_")
        exps[yvar(int(j), int(order))] = e
    return mono(exps)


# ----------------------------------------------------------------------
# Systems
# ----------------------------------------------------------------------


@pytest.fixture(scope="session")
def derivative_triple():
    """n=2; every support is {y1'', y1''', y2'''}; the resultant is the
    3x3 coefficient determinant."""
    s = (_m(y1_2=1), _m(y1_3=1), _m(y2_3=1))
    return DiffSystem(n=2, supports=(s, s, s))


@pytest.fixture(scope="session")
def derivative_triple_sr():
    return parse_poly(
        "u0_0*u1_1*u2_2 - u0_0*u1_2*u2_1 - u0_1*u1_0*u2_2"
        " + u0_1*u1_2*u2_0 + u0_2*u1_0*u2_1 - u0_2*u1_1*u2_0"
    ).normalized()


@pytest.fixture(scope="session")
def cascade_system():
    """n=2; supports {1, y1*y1'}, {1, y1}, {1, y2'}; the third block is
    absent from the resultant."""
    return DiffSystem(
        n=2,
        supports=(
            (ONE, _m(y1_0=1, y1_1=1)),
            (ONE, _m(y1_0=1)),
            (ONE, _m(y2_1=1)),
        ),
    )


@pytest.fixture(scope="session")
def cascade_sr():
    return parse_poly(
        "u0_1*u1_0*u1_1*u1_0' - u0_1*u1_0^2*u1_1' + u0_0*u1_1^3"
    ).normalized()


@pytest.fixture(scope="session")
def product_pair_system():
    """n=2; supports {1, y1*y2}, {1, y1*y2'}, {1, y1'*y2'}."""
    return DiffSystem(
        n=2,
        supports=(
            (ONE, _m(y1_0=1, y2_0=1)),
            (ONE, _m(y1_0=1, y2_1=1)),
            (ONE, _m(y1_1=1, y2_1=1)),
        ),
    )


@pytest.fixture(scope="session")
def product_pair_sr():
    return parse_poly(
        "u1_0*u0_1*u2_1*u1_1*u0_0' - u1_0*u0_0*u1_1*u2_1*u0_1'"
        " - u0_1^2*u2_1*u1_0^2 - u0_1*u0_0*u1_1^2*u2_0"
    ).normalized()


@pytest.fixture(scope="session")
def quadratic_single_system():
    """n=1; both supports are {y1, y1', y1^2}; 16-term resultant."""
    s = (_m(y1_0=1), _m(y1_1=1), _m(y1_0=2))
    return DiffSystem(n=1, supports=(s, s))


@pytest.fixture(scope="session")
def quadratic_single_sr():
    return parse_poly(
        "-u1_2*u0_1*u0_0*u1_0 - u1_2*u0_1^2*u1_0' + u1_2*u0_1*u1_1'*u0_0"
        " + u1_2*u0_1*u1_1*u0_0' - u1_1*u0_2*u0_0*u1_0 + u1_1*u0_2*u1_0'*u0_1"
        " + u0_2*u0_1*u1_0^2 - u1_1^2*u0_2*u0_0' + u1_1*u0_2*u0_1'*u1_0"
        " + u1_1*u0_0^2*u1_2 + u1_1^2*u0_2'*u0_0 - u1_1*u0_2'*u0_1*u1_0"
        " - u1_1*u0_1*u1_2'*u0_0 + u0_1^2*u1_2'*u1_0 - u1_1*u0_1'*u1_2*u0_0"
        " - u1_1'*u0_2*u0_1*u1_0"
    ).normalized()


@pytest.fixture(scope="session")
def masked_product_system():
    """n=3; y1*y2 only ever appears as a product, so {P0, P1, P2} is the
    rank-essential subset while P3 (high-order dense row) is redundant."""
    o = 10
    return DiffSystem(
        n=3,
        supports=(
            (_m(y1_0=1, y2_0=1), _m(y3_0=1)),
            (_m(y1_0=1, y2_0=1), _m(y3_0=1, y3_1=1)),
            (_m(y1_0=1, y2_0=1), _m(y3_1=1)),
            (_m(y1_10=1), _m(y2_10=1), _m(y3_10=1)),
        ),
    )


@pytest.fixture(scope="session")
def dense_linear_system():
    """n=2; three dense blocks {1, y1, y2}: the algebraic 3x3 case used by
    the recovery tests."""
    s = (ONE, _m(y1_0=1), _m(y2_0=1))
    return DiffSystem(n=2, supports=(s, s, s))


# ----------------------------------------------------------------------
# Reference matrices
# ----------------------------------------------------------------------


@pytest.fixture(scope="session")
def reduced_triple_monomials():
    """Three order-3 monomials in y1..y3 whose support matrix reduces to a
    full-rank (index (3,0)) matrix."""
    return (
        _m(y1_0=1, y1_1=1, y2_3=1, y3_0=1, y3_1=1),
        _m(y1_0=3, y1_1=2, y2_2=1, y2_3=2, y3_0=3, y3_1=2),
        _m(y1_0=2, y1_1=3, y2_1=1, y2_3=3, y3_0=3, y3_1=3),
    )


@pytest.fixture(scope="session")
def tshape_five_monomials():
    """Five monomials in y1..y5 whose support matrix is T-shape of index
    (1,2), rank 3."""
    return (
        _m(y1_3=1, y2_3=1, y3_1=1, y4_0=1, y5_0=2),
        _m(y1_2=1, y2_3=1, y3_1=1, y3_2=1, y4_0=1, y5_0=2),
        _m(y1_1=1, y3_0=1, y3_1=1),
        _m(y1_1=1),
        _m(y1_0=2),
    )


@pytest.fixture(scope="session")
def order_matrix_4x3():
    """Reference 4x3 order matrix with row-deletion Jacobi numbers
    (12, 12, 7, 10)."""
    from sdres.diffpoly import NEG_INF

    return (
        (5, NEG_INF, 0),
        (5, 0, NEG_INF),
        (0, 3, 5),
        (5, 2, NEG_INF),
    )
