from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from motivic_loci.exactalg import (
    UniSeries,
    YPolynomial,
    bernoulli,
    chern_from_powersums,
    format_rational,
    inv_qy_coeffs,
    log_qy_coeffs,
    parse_rational,
    powersums_from_chern,
    qy_series,
    series_exp,
    series_invert,
    series_log,
)
from motivic_loci.rings import free_ring

Y = YPolynomial((0, 1))

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
ypolys = st.lists(rationals, max_size=5).map(YPolynomial)


def to_sympy(p: YPolynomial, y):
    return sum(sp.Rational(c.numerator, c.denominator) * y ** e for e, c in enumerate(p.coeffs))


# -- rationals and y-polynomials ---------------------------------------------

def test_rational_text_round_trip():
    for text in ["0", "-3", "7/12", "-5/9"]:
        assert format_rational(parse_rational(text)) == text
    assert format_rational(Fraction(4, 6)) == "2/3"


def test_polynomial_normal_form():
    p = YPolynomial((1, 0, 0))
    assert p.coeffs == (Fraction(1),)
    assert YPolynomial((0, 0)).is_zero()
    assert (Y - Y).is_zero()
    assert (Y ** 2 - 2 * Y + 1).format() == "y^2 - 2*y + 1"
    assert YPolynomial.const(Fraction(-1, 2)).format() == "-1/2"
    assert YPolynomial().format() == "0"


def test_polynomial_json_round_trip():
    p = YPolynomial((Fraction(2, 45), Fraction(-1, 9), Fraction(2, 45)))
    assert YPolynomial.from_json(p.to_json()) == p
    assert p.to_json() == [["2/45", 0], ["-1/9", 1], ["2/45", 2]]


@given(ypolys, ypolys, rationals)
def test_evaluation_is_a_ring_homomorphism(f, g, y0):
    assert (f * g)(y0) == f(y0) * g(y0)
    assert (f + g)(y0) == f(y0) + g(y0)


@given(ypolys, ypolys)
def test_polynomial_product_matches_sympy(f, g):
    y = sp.Symbol("y")
    assert sp.expand(to_sympy(f * g, y) - to_sympy(f, y) * to_sympy(g, y)) == 0


# -- Bernoulli numbers and Q_y -------------------------------------------------

def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(3) == 0
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_bernoulli_against_generating_function():
    t = sp.Symbol("t")
    ser = sp.series(t / (1 - sp.exp(-t)), t, 0, 15).removeO()
    for n in range(15):
        expected = ser.coeff(t, n) * sp.factorial(n)
        assert sp.Rational(bernoulli(n).numerator, bernoulli(n).denominator) == expected


def test_qy_series_order_two():
    q = qy_series(2)
    assert q[0] == 1
    assert q[1] == (1 - Y) * Fraction(1, 2)
    assert q[2] == (1 + Y) ** 2 * Fraction(1, 12)


def test_qy_specializations():
    csm = qy_series(6).evaluate_y(-1)
    assert csm == UniSeries([1, 1], 6)
    todd = qy_series(3).evaluate_y(0)
    assert [todd[n] for n in range(4)] == [1, Fraction(1, 2), Fraction(1, 12), 0]


def test_qy_series_against_symbolic_expansion():
    a, y = sp.symbols("a y")
    order = 12
    u = sp.Symbol("u")
    # expand u/(1-e^{-u}) once, then put u = a(1+y)
    base = sp.series(u / (1 - sp.exp(-u)), u, 0, order + 1).removeO()
    ser = sp.expand(base.subs(u, a * (1 + y)) - a * y)
    q = qy_series(order)
    for n in range(order + 1):
        assert sp.expand(ser.coeff(a, n) - to_sympy(q[n], y)) == 0
        closed = YPolynomial((1, 1)) ** n * (bernoulli(n) / sp.factorial(n).p)
        if n == 1:
            closed = closed - Y
        assert q[n] == closed


def test_log_qy_coefficients():
    g = log_qy_coeffs(4)
    assert g[0] == (1 - Y) * Fraction(1, 2)
    assert g[0](-1) == 1 and g[1](-1) == Fraction(-1, 2)
    log_series = UniSeries([0] + g, 4)
    assert series_exp(log_series) == qy_series(4)
    with pytest.raises(ValueError):
        log_qy_coeffs(0)


def test_inverse_series_examples():
    geo = series_invert(UniSeries([1, 1], 5))
    assert geo == UniSeries([1, -1, 1, -1, 1, -1], 5)
    q = qy_series(2)
    inv = series_invert(q)
    assert inv[1] == -(1 - Y) * Fraction(1, 2)
    assert inv[2] == (1 - Y) ** 2 * Fraction(1, 4) - (1 + Y) ** 2 * Fraction(1, 12)
    assert series_invert(qy_series(8)) * qy_series(8) == UniSeries([1], 8)
    assert list(inv_qy_coeffs(2)) == list(inv.coeffs)


def test_series_preconditions():
    with pytest.raises(ValueError):
        series_invert(UniSeries([2, 1], 3))
    with pytest.raises(ValueError):
        series_log(UniSeries([0, 1], 3))
    with pytest.raises(ValueError):
        series_exp(UniSeries([1, 1], 3))


def test_mixed_orders_take_the_minimum():
    s = UniSeries([1, 1, 1], 2) * UniSeries([1, 1, 1, 1, 1], 4)
    assert s.order == 2


unit_series = st.lists(ypolys, min_size=1, max_size=8).map(
    lambda cs: UniSeries([1] + cs, len(cs)))


@settings(max_examples=100, deadline=None)
@given(unit_series)
def test_exp_log_and_double_inverse_round_trip(s):
    assert series_exp(series_log(s)) == s
    assert series_invert(series_invert(s)) == s


# -- Newton identities -----------------------------------------------------------

def test_newton_line_bundle():
    ring = free_ring(["x"], 6)
    x = ring.gen("x")
    p = powersums_from_chern([ring.one(), x], ring.one(), 6)
    assert all(p[n] == x ** n for n in range(1, 7))


def test_newton_rank_two():
    ring = free_ring([("c1", 1), ("c2", 2)], 4)
    c1, c2 = ring.gen("c1"), ring.gen("c2")
    p = powersums_from_chern([ring.one(), c1, c2], ring.one() * 2, 4)
    assert p[2] == c1 * c1 - c2 * 2


def test_exponential_chern_class():
    ring = free_ring(["t"], 6)
    t = ring.gen("t")
    c = chern_from_powersums([ring.zero(), t] + [ring.zero()] * 5, 6, ring.one())
    for j in range(7):
        assert c[j] == t ** j * Fraction(1, sp.factorial(j).p)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(-3, 3), st.data())
def test_newton_round_trip_over_free_ring(length, rank, data):
    ring = free_ring([(f"c{j}", j) for j in range(1, length + 1)], length)
    chern = [ring.one()] + [ring.gen(f"c{j}") * data.draw(rationals.filter(bool))
                            for j in range(1, length + 1)]
    p = powersums_from_chern(chern, ring.one() * rank, length)
    back = chern_from_powersums(p, length, ring.one())
    assert back == chern
