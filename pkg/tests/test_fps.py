from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_mul, poch
from qcalc.errors import NonUnitConstantTerm, OrderTooSmall, UnknownVariable, VarSetMismatch
from qcalc.fps import (
    TruncatedSeries as TS, coefficient, euler_pochhammer_inverse_series, euler_pochhammer_series,
    series_add, series_invert, series_mul, series_qpartial, series_qshift, series_scale,
)

T = ("t",)
XY = ("x", "y")


def poly(vars, order, terms):
    return TS(vars, order, terms)


def test_ring_examples():
    one_p = poly(T, 6, {(0,): 1, (1,): 1})
    one_m = poly(T, 6, {(0,): 1, (1,): -1})
    assert series_mul(one_p, one_m) == poly(T, 6, {(0,): 1, (2,): -1})
    assert series_scale(one_p, 0).is_zero()
    assert series_add(one_p, one_m) == TS.constant(T, 6, 2)
    assert coefficient(poly(T, 6, {(0,): 1, (2,): -1}), (2,)) == -1
    assert coefficient(TS(T, 6), (3,)) == 0
    q = F(2, 9)
    assert coefficient(poly(("x",), 3, {(0,): 1, (1,): q}), (1,)) == q


def test_invert_examples():
    geo = series_invert(poly(T, 9, {(0,): 1, (1,): -1}))
    assert geo == TS(T, 9, {(n,): 1 for n in range(10)})
    assert series_invert(TS.constant(T, 9)) == TS.constant(T, 9)
    with pytest.raises(NonUnitConstantTerm):
        series_invert(TS.variable(T, 9, "t"))


def test_euler_examples():
    q, c = F(1, 3), F(3, 5)
    assert euler_pochhammer_series(0, "t", q, 8) == TS.constant(T, 8)
    e = euler_pochhammer_series(c, "t", q, 8)
    assert series_invert(e) * e == TS.constant(T, 8)
    assert coefficient(e, (1,)) == -c / (1 - q)


def test_euler_against_finite_product():
    # (ct;q)_inf agrees with (ct;q)_N through degree N - 1 beyond which q^N terms enter
    q, c, order = F(2, 5), F(-3, 4), 7
    dense = [F(1)]
    for k in range(60):
        dense = dense_mul(dense, [F(1), -c * q ** k], order)
    e = euler_pochhammer_series(c, "t", q, order)
    for n in range(order + 1):
        # the truncated product differs by O(q^60) which is far below any coefficient here
        assert abs(coefficient(e, (n,)) - dense[n]) < F(1, 10 ** 20)
    # exact closed form of the inverse: c^n/(q;q)_n
    inv = euler_pochhammer_inverse_series(c, "t", q, order)
    assert inv == series_invert(e)
    assert all(coefficient(inv, (n,)) == c ** n / poch(q, q, n) for n in range(order + 1))


def test_qshift_and_qpartial_examples():
    q = F(3, 7)
    s = poly(("x",), 4, {(0,): 1, (1,): 1, (2,): 1})
    assert series_qshift(s, "x", q) == poly(("x",), 4, {(0,): 1, (1,): q, (2,): q * q})
    assert series_qshift(s, "x", 1) == s
    y3 = poly(XY, 5, {(0, 3): 1})
    assert series_qshift(y3, "x", q) == y3
    for k in range(1, 5):
        xk = poly(("x",), 6, {(k,): 1})
        assert series_qpartial(xk, "x", q) == poly(("x",), 5, {(k - 1,): 1 - q ** k})
    assert series_qpartial(TS.constant(("x",), 6, 5), "x", q).is_zero()
    assert series_qpartial(poly(XY, 4, {(1, 1): 1}), "x", q) == poly(XY, 3, {(0, 1): 1 - q})
    with pytest.raises(OrderTooSmall):
        series_qpartial(TS.constant(("x",), 0), "x", q)


def test_validation_errors():
    with pytest.raises(VarSetMismatch):
        TS(("x", "x"), 3)
    with pytest.raises(VarSetMismatch):
        TS.constant(T, 3) + TS.constant(XY, 3)
    with pytest.raises(UnknownVariable):
        series_qshift(TS.constant(T, 3), "z", F(1, 2))


def test_dump_is_canonical():
    s = poly(XY, 3, {(1, 0): F(1, 2), (0, 0): -2, (0, 2): 3})
    assert s.dump() == "vars: x,y\norder: 3\n-2 1\n1/2 x\n3 y^2\n"


# -- properties ------------------------------------------------------------

coef = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@st.composite
def series(draw, vars=XY, order=5):
    idxs = [(i, j) for i in range(order + 1) for j in range(order + 1 - i)]
    chosen = draw(st.lists(st.sampled_from(idxs), max_size=8, unique=True))
    return TS(vars, order, {i: draw(coef) for i in chosen})


@settings(max_examples=40, deadline=None)
@given(f=series(), g=series(), h=series())
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == TS(XY, 5)


@settings(max_examples=40, deadline=None)
@given(f=series(), g=series(), q=st.fractions(min_value=-1, max_value=1, max_denominator=15))
def test_qpartial_product_rule_and_shift_morphism(f, g, q):
    lhs = series_qpartial(f * g, "x", q)
    rhs = f.truncate(4) * series_qpartial(g, "x", q) + \
        series_qpartial(f, "x", q) * series_qshift(g, "x", q).truncate(4)
    assert lhs == rhs
    assert series_qshift(f * g, "y", q) == series_qshift(f, "y", q) * series_qshift(g, "y", q)


@settings(max_examples=30, deadline=None)
@given(c=coef, q=st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=20))
def test_euler_inverse_pair(c, q):
    e = euler_pochhammer_series(c, "t", q, 10)
    assert e * euler_pochhammer_inverse_series(c, "t", q, 10) == TS.constant(T, 10)


@settings(max_examples=30, deadline=None)
@given(f=series())
def test_invert_unit_series(f):
    u = f + TS.constant(XY, 5, 1 - coefficient(f, (0, 0)))
    assert u * series_invert(u) == TS.constant(XY, 5)
