"""Core arithmetic on Laurent differential polynomials."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sdres.diffpoly import (
    NEG_INF,
    ONE,
    DiffSystem,
    Poly,
    differentiate,
    effective_order,
    euler_apply,
    format_mono,
    format_poly,
    mono,
    mono_key,
    mono_mul,
    mono_pow,
    norm_form,
    parse_mono,
    parse_poly,
    uvar,
    yvar,
)

# ----------------------------------------------------------------------
# Monomials
# ----------------------------------------------------------------------


def test_mono_mul_and_pow():
    a = mono({yvar(1, 0): 2, yvar(2, 1): -1})
    b = mono({yvar(2, 1): 1, yvar(1, 1): 3})
    assert mono_mul(a, b) == mono({yvar(1, 0): 2, yvar(1, 1): 3})
    assert mono_pow(a, -2) == mono({yvar(1, 0): -4, yvar(2, 1): 2})
    assert mono_mul(a, mono_pow(a, -1)) == ONE


def test_mono_key_graded():
    low = mono({yvar(1, 0): 1})
    high = mono({yvar(1, 0): 2})
    assert mono_key(high) > mono_key(low)
    assert mono_key(low) > mono_key(ONE)


# ----------------------------------------------------------------------
# Polynomial arithmetic
# ----------------------------------------------------------------------


def test_poly_ring_ops():
    p = parse_poly("y1 + 2*y2'")
    q = parse_poly("y1 - 2*y2'")
    assert p + q == parse_poly("2*y1")
    assert p * q == parse_poly("y1^2 - 4*y2'^2")
    assert p - p == Poly()
    assert (p * q).degree_y() == 2


def test_diff_product_rule():
    p = parse_poly("y1*y2")
    assert p.diff() == parse_poly("y1'*y2 + y1*y2'")
    # Leibniz on a product of two random-ish polynomials
    a = parse_poly("y1^2 + 3*y2'")
    b = parse_poly("y2 - y1'")
    assert (a * b).diff() == a.diff() * b + a * b.diff()


def test_diff_laurent_exponent():
    p = Poly.monomial(mono({yvar(1, 0): -1}))
    # (y1^-1)' = -y1' * y1^-2
    assert p.diff() == Poly.monomial(
        mono({yvar(1, 1): 1, yvar(1, 0): -2}), Fraction(-1)
    )


def test_differentiate_iterates():
    p = parse_poly("y1")
    assert differentiate(p, 3) == parse_poly("y1^(3)")


def test_partial():
    p = parse_poly("u0_0^2*y1 + u0_1")
    assert p.partial(uvar(0, 0)) == parse_poly("2*u0_0*y1")
    assert p.partial(uvar(0, 1)) == parse_poly("1")
    assert p.partial(uvar(1, 0)) == Poly()


def test_orders_and_degrees():
    p = parse_poly("y1''*y2^2 + u0_1'*y1")
    assert p.order_in(("y", 1)) == 2
    assert p.order_in(("y", 2)) == 0
    assert p.order_in(("u", 0)) == 1
    assert p.order_in(("y", 3)) == NEG_INF
    assert p.y_order() == 2
    assert p.degree_y() == 3
    assert p.degree_u() == 1


def test_content_and_normalized():
    p = parse_poly("4*y1 - 6*y2")
    assert p.content() == 2
    q = p.normalized()
    assert q.content() == 1 and q.leading()[1] > 0
    assert q == parse_poly("3*y2 - 2*y1")
    # normalization of a negative-leading polynomial flips the sign
    assert parse_poly("-2*y1").normalized() == parse_poly("y1")


# ----------------------------------------------------------------------
# Norm form and effective order
# ----------------------------------------------------------------------


def test_norm_form_clears_denominators():
    f = Poly.monomial(mono({yvar(1, 0): -2, yvar(2, 1): 1})) + parse_poly("y1")
    nf, shift = norm_form(f)
    assert shift == mono({yvar(1, 0): 2})
    assert nf == parse_poly("y2' + y1^3")


def test_norm_form_strips_common_monomial():
    f = parse_poly("y1^2*y2 + y1^3")
    nf, shift = norm_form(f)
    assert nf == parse_poly("y2 + y1")
    assert shift == mono({yvar(1, 0): -2})


def test_effective_order():
    # dividing out the common monomial y1'' lowers the order to 0
    f = parse_poly("y1''*y2 + y1''*y1")
    assert effective_order(f) == 0
    assert effective_order(parse_poly("y1''' + y2")) == 3


# ----------------------------------------------------------------------
# Euler operators
# ----------------------------------------------------------------------


def test_euler_order_zero_counts_block_degree():
    p = parse_poly("u0_0*u0_1 + u0_1^2")
    assert euler_apply(p, 0, 0) == p * Fraction(2)


def test_euler_higher_order_annihilates_order_zero_poly():
    p = parse_poly("u0_0*u0_1 + u0_1^2")
    assert euler_apply(p, 0, 1) == Poly()


def test_euler_detects_inhomogeneity():
    p = parse_poly("u0_0 + u0_1^2")
    assert euler_apply(p, 0, 0) != p
    assert euler_apply(p, 0, 0) != p * Fraction(2)


# ----------------------------------------------------------------------
# Systems
# ----------------------------------------------------------------------


def test_diffsystem_accessors(cascade_system):
    sys = cascade_system
    assert sys.size == 3
    assert sys.n == 2
    assert sys.l(0) == 1
    assert sys.s_order(0) == 1
    assert sys.s_order(2) == 1
    p0 = sys.poly(0)
    assert p0 == parse_poly("u0_0 + u0_1*y1*y1'")
    q = sys.quotient_monomial(0, 1)
    assert q == mono({yvar(1, 0): 1, yvar(1, 1): 1})


def test_diffsystem_rejects_empty_support():
    with pytest.raises(ValueError):
        DiffSystem(n=1, supports=((),))


# ----------------------------------------------------------------------
# Parsing / printing round trips
# ----------------------------------------------------------------------


def test_parse_format_examples():
    for text in (
        "y1", "y1'", "y1^(4)", "y1^-2*y2''", "u0_0", "u1_2'",
        "1",
    ):
        assert format_mono(parse_mono(text)) == text
    p = parse_poly("3/2*y1*y2' - u0_0^2 + 1")
    assert parse_poly(format_poly(p)) == p


_var = st.one_of(
    st.tuples(st.integers(1, 3), st.integers(0, 3)).map(lambda t: yvar(*t)),
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)).map(
        lambda t: uvar(*t)
    ),
)
# Laurent exponents are allowed on y-variables only
_mono = st.dictionaries(_var, st.integers(-3, 3).filter(bool), max_size=4).map(
    lambda d: mono({v: (abs(e) if v[0] == "u" else e) for v, e in d.items()})
)
_poly = st.dictionaries(
    _mono, st.fractions(max_denominator=20).filter(bool), min_size=0, max_size=5
).map(Poly)


@settings(max_examples=80, deadline=None)
@given(_poly)
def test_print_parse_roundtrip(p):
    assert parse_poly(format_poly(p)) == p


@settings(max_examples=60, deadline=None)
@given(_poly, _poly)
def test_diff_is_additive_and_leibniz(p, q):
    assert (p + q).diff() == p.diff() + q.diff()
    assert (p * q).diff() == p.diff() * q + p * q.diff()


@settings(max_examples=60, deadline=None)
@given(_poly, _poly, _poly)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
