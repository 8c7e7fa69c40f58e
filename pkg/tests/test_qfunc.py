from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from oracles import phi_brute, poch
from qcalc.errors import Divergent, ZeroDenominator
from qcalc.fps import TruncatedSeries as TS
from qcalc.qcore import EvalContext, qpoch_infinite
from qcalc.qfunc import (
    HyperSpec, PhiSpec, QPow, hahn, phi_coefficients, phi_eval, phi_series, rogers_szego,
    rphis_eval, rphis_series, ultraspherical,
)

r = st.fractions(min_value=-3, max_value=3, max_denominator=20)
qs = st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=20)


def test_phi_examples():
    al, be, x, y, q = F(2, 3), F(-1, 5), F(3, 7), F(5, 4), F(1, 3)
    assert phi_eval(PhiSpec(0, al, be), x, y, q) == 1
    assert phi_eval(PhiSpec(1, al, be), x, y, q) == (1 - al) * x + (1 - be) * y
    for n in range(6):
        assert phi_eval(PhiSpec(n, al, be), 0, y, q) == poch(be, q, n) * y ** n
        assert phi_eval(PhiSpec(n, al, be), x, 0, q) == poch(al, q, n) * x ** n


def test_rogers_szego_and_specializations():
    q = F(2, 5)
    assert rogers_szego(2, 1, 1, q) == 3 + q
    for n in range(21):
        assert ultraspherical(n, F(1, 3), F(2, 7), F(-1, 2), q) == \
            phi_eval(PhiSpec(n, F(1, 3), F(1, 3)), F(2, 7), F(-1, 2), q)
    assert hahn(4, F(1, 3), F(2, 7), F(-1, 2), q) == phi_eval(PhiSpec(4, F(1, 3), 0), F(2, 7), F(-1, 2), q)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(0, 8), al=r, be=r, x=r, y=r, q=r, lam=r)
def test_phi_against_brute_force_and_symmetries(n, al, be, x, y, q, lam):
    v = phi_eval(PhiSpec(n, al, be), x, y, q)
    assert v == phi_brute(n, al, be, x, y, q)
    assert phi_eval(PhiSpec(n, al, be), lam * x, lam * y, q) == lam ** n * v
    assert phi_eval(PhiSpec(n, be, al), y, x, q) == v


def test_phi_series_is_the_polynomial():
    spec, q = PhiSpec(4, F(1, 2), F(-2, 3)), F(3, 5)
    s = phi_series(spec, "x", "y", q, 6)
    c = phi_coefficients(spec, q)
    assert s == TS(("x", "y"), 6, {(k, 4 - k): c[k] for k in range(5)})
    assert s.evaluate({"x": F(1, 3), "y": F(2, 9)}) == phi_eval(spec, F(1, 3), F(2, 9), q)


def test_rphis_trivial_cases():
    q = F(1, 3)
    assert rphis_eval(HyperSpec([F(1, 2)], [F(1, 5)], 0), q).value == 1
    assert rphis_eval(HyperSpec([QPow(0), F(1, 2)], [F(1, 5)], F(7, 2)), q).value == 1


def test_one_phi_zero_is_a_product_ratio():
    q, a, z = F(3, 10), F(1, 4), F(1, 5)
    ctx = EvalContext(q, 50)
    s = rphis_eval(HyperSpec([a], [], z), q, ctx)
    rhs = qpoch_infinite(a * z, ctx) / qpoch_infinite(z, ctx)
    assert abs(s.value - rhs.value) <= ctx.num(F(1, 10 ** 30))
    assert s.error < ctx.mp.mpf(10) ** -40


@pytest.mark.parametrize("upper,lower,z,q", [
    ([F(1, 3), F(-2, 5)], [F(1, 7)], F(1, 2), F(2, 5)),
    ([F(1, 3)], [F(-1, 2), F(3, 4)], F(5, 2), F(-1, 3)),
    ([F(1, 3), F(2, 3), F(1, 5)], [F(1, 7), F(1, 9)], F(-3, 5), F(7, 10)),
])
def test_rphis_against_independent_library(upper, lower, z, q):
    ctx = EvalContext(q, 50)
    s = rphis_eval(HyperSpec(upper, lower, z), q, ctx)
    mf = lambda v: mpmath.mpf(v.numerator) / v.denominator
    with mpmath.workdps(70):
        ref = mpmath.qhyper([mf(u) for u in upper], [mf(l) for l in lower], mf(q), mf(z))
        assert abs(s.value - ref) <= s.error + mpmath.mpf(10) ** -55


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 8), b=r.filter(lambda v: v != 0), c=r, q=qs.filter(lambda v: v != 0))
def test_terminating_q_chu_vandermonde(n, b, c, q):
    # 2phi1(q^-n, b; c; q, q) = (c/b;q)_n / (c;q)_n * b^n
    if poch(c, q, n) == 0:
        return
    lhs = rphis_eval(HyperSpec([QPow(-n), b], [c], q), q).value
    assert lhs == poch(c / b, q, n) / poch(c, q, n) * b ** n


@settings(max_examples=30, deadline=None)
@given(n=st.integers(0, 6), a=r, c=r, w=r, z=r, q=qs.filter(lambda v: v != 0))
def test_matched_pairs_cancel(n, a, c, w, z, q):
    if any(poch(v, q, n) == 0 for v in (c, w)):
        return
    base = rphis_eval(HyperSpec([QPow(-n), a], [c], z), q).value
    padded = rphis_eval(HyperSpec([QPow(-n), a, w], [c, w], z), q).value
    assert base == padded


def test_rphis_errors():
    ctx = EvalContext(F(1, 2))
    with pytest.raises(Divergent):
        rphis_eval(HyperSpec([F(1, 3)], [], F(3, 2)), F(1, 2), ctx)
    with pytest.raises(Divergent):
        rphis_eval(HyperSpec([F(1, 3), F(1, 3), F(1, 3)], [F(1, 5)], F(1, 9)), F(1, 2), ctx)
    with pytest.raises(ZeroDenominator):
        rphis_eval(HyperSpec([F(1, 3)], [QPow(-1)], F(1, 3)), F(1, 2), ctx)


def test_rphis_series_matches_pointwise_evaluation():
    q, m = F(1, 3), 3
    vars = ("t",)
    t = TS.variable(vars, 8, "t")
    x, y, a, b = F(1, 2), F(-2, 5), F(3, 7), F(1, 4)
    s = rphis_series([QPow(-m), t.scale(x), t.scale(y)], [t.scale(a * x), t.scale(b * y)], q, q, vars, 8)
    # the terminating sum is a rational function of t: compare Taylor data with a small t
    for tv in (F(1, 1000), F(-1, 997)):
        val = rphis_eval(HyperSpec([QPow(-m), x * tv, y * tv], [a * x * tv, b * y * tv], q), q).value
        assert abs(s.evaluate({"t": tv}) - val) < F(1, 10 ** 20)
