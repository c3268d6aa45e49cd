from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mirror_stokes.errors import SingularSystem
from mirror_stokes.exact import (RatFunc, ThetaLaurent, ThetaMatrix, format_fraction,
                                 fraction_free_solve, laurent_divexact, laurent_gcd)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
laurents = st.dictionaries(st.integers(-4, 4), fractions, max_size=4).map(ThetaLaurent)
nonzero_laurents = laurents.filter(bool)


@settings(max_examples=60)
@given(laurents, laurents, laurents)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == ThetaLaurent.zero()
    assert p * ThetaLaurent.one() == p


@settings(max_examples=60)
@given(laurents, laurents)
def test_theta_derivative_is_a_derivation(p, q):
    assert (p * q).theta_derivative() == p.theta_derivative() * q + p * q.theta_derivative()


@settings(max_examples=60)
@given(laurents)
def test_substitute_neg_is_an_involution(p):
    assert p.substitute_neg().substitute_neg() == p


@settings(max_examples=40)
@given(nonzero_laurents, nonzero_laurents)
def test_divexact_and_gcd(p, q):
    assert laurent_divexact(p * q, q) == p
    g = laurent_gcd(p * q, q)
    assert laurent_divexact(q, g) * g == q


@settings(max_examples=40)
@given(laurents, nonzero_laurents, laurents, nonzero_laurents)
def test_ratfunc_field_ops(a, b, c, d):
    x, y = RatFunc(a, b), RatFunc(c, d)
    assert x + y == y + x
    assert (x + y) - y == x
    if not y.is_zero():
        assert (x / y) * y == x


def test_ratfunc_canonical_form():
    th = ThetaLaurent.monomial(1, 1)
    r = RatFunc(th * th - ThetaLaurent.one(), (th - ThetaLaurent.one()).scale(2))
    # (theta^2 - 1) / (2 theta - 2) == (theta + 1) / 2
    assert r.is_laurent()
    assert r.as_laurent() == ThetaLaurent({0: Fraction(1, 2), 1: Fraction(1, 2)})
    assert RatFunc(ThetaLaurent.monomial(3, -4)) == RatFunc(3, ThetaLaurent.monomial(1, 4))
    assert RatFunc(ThetaLaurent.monomial(5, -2)).ord == -2


def test_ord_deg_and_format():
    p = ThetaLaurent({-4: Fraction(-256, 27), 2: 1})
    assert (p.ord, p.deg) == (-4, 2)
    assert format_fraction(Fraction(-256, 27)) == "-256/27"
    assert format_fraction(Fraction(4)) == "4"


def test_scalar_solve():
    x = fraction_free_solve([[2, 1], [1, 3]], [3, 5])
    assert [r.as_laurent().constant_value() for r in x] == [Fraction(4, 5), Fraction(7, 5)]


def test_solve_with_theta_entries():
    th = ThetaLaurent.monomial(1, 1)
    one = ThetaLaurent.one()
    A = ThetaMatrix([[th, one], [one, th]])
    y = [one, one]
    x = fraction_free_solve(A, y)
    # both unknowns equal 1 / (theta + 1)
    assert x[0] == x[1] == RatFunc(one, th + one)


def test_singular_system():
    with pytest.raises(SingularSystem):
        fraction_free_solve([[1, 2], [2, 4]], [1, 1])


def test_cyclic_relation_for_x_plus_x_minus3():
    """Solve for nabla^4 m in terms of m, nabla m, nabla^2 m, nabla^3 m."""
    from mirror_stokes.gaussmanin import _power_vectors, gm_connection
    from mirror_stokes.geometry import parse_laurent

    conn = gm_connection(parse_laurent("x + x^-3"))
    one, zero = ThetaLaurent.one(), ThetaLaurent.zero()
    vecs = _power_vectors(conn, [one, zero, zero, zero])
    A = ThetaMatrix([[vecs[k][r] for k in range(4)] for r in range(4)])
    c = fraction_free_solve(A, vecs[4])
    # nabla^4 m = c0 m + c1 nabla m + c2 nabla^2 m + c3 nabla^3 m
    assert c[3] == RatFunc(-4)
    assert c[2] == RatFunc(Fraction(-32, 9))
    assert c[1] == RatFunc(0)
    assert c[0] == RatFunc(ThetaLaurent.monomial(Fraction(256, 27), -4))
