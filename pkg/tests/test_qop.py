from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from qcalc.errors import IndexOutOfRange, ZeroPoint
from qcalc.fps import TruncatedSeries as TS, series_qpartial
from qcalc.qop import SampledFunction, dq, dq_iter, eta, partial, qpartial, shifted

r = st.fractions(min_value=-4, max_value=4, max_denominator=20)
nz = r.filter(lambda v: v != 0)


def test_dq_examples():
    q = F(1, 3)
    assert dq(lambda x: F(7), F(2, 5), q) == 0
    for k in range(1, 6):
        assert dq(lambda x: x ** k, F(2, 5), q) == (1 - q ** k) * F(2, 5) ** (k - 1)
    assert dq(lambda x: x, F(5), F(1, 2)) == F(1, 2)
    with pytest.raises(ZeroPoint):
        dq(lambda x: x, 0, q)


def test_dq_iter_examples():
    f = lambda x: x ** 2
    q = F(1, 2)
    assert dq_iter(f, F(3), q, 0) == 9
    assert dq_iter(f, F(3), q, 1) == dq(f, F(3), q)
    assert dq_iter(f, F(1), q, 2) == (1 - q) * (1 - q ** 2) == F(3, 8)


@settings(max_examples=40, deadline=None)
@given(x=nz, q=nz, k=st.integers(0, 8), n=st.integers(0, 8))
def test_dq_iter_on_monomials(x, q, k, n):
    # D_q^n x^k = (q^(k-n+1);q)_n x^(k-n), zero when n > k
    expected = F(0) if n > k else x ** (k - n)
    if n <= k:
        for i in range(n):
            expected *= 1 - q ** (k - i)
    assert dq_iter(lambda z: z ** k, x, q, n) == expected


def test_partial_and_eta_examples():
    f = SampledFunction(2, lambda x, y: x * y)
    q, p = F(2, 7), (F(3, 5), F(-4, 3))
    assert eta(f, 0, p, q) == q * p[0] * p[1]
    assert qpartial(f, 0, p, q) == (1 - q) * p[1]
    assert qpartial(f, 1, p, q) == (1 - q) * p[0]
    # mixed check: d_x eta_y f = eta_y d_x f
    assert partial(shifted(f, 1, q), 0, q)(*p) == shifted(partial(f, 0, q), 1, q)(*p)
    with pytest.raises(IndexOutOfRange):
        eta(f, 2, p, q)
    with pytest.raises(ZeroPoint):
        qpartial(f, 0, (0, F(1)), q)


def _poly(x, y):
    return 3 * x ** 3 * y - F(1, 2) * x * y ** 2 + 5 * y + x ** 2


@settings(max_examples=40, deadline=None)
@given(x=nz, y=nz, q=nz)
def test_commutation_and_agreement_with_series(x, y, q):
    f = SampledFunction(2, _poly)
    for i, j in ((0, 1), (1, 0)):
        assert partial(shifted(f, j, q), i, q)(x, y) == shifted(partial(f, i, q), j, q)(x, y)
    s = TS(("x", "y"), 6, {(3, 1): 3, (1, 2): F(-1, 2), (0, 1): 5, (2, 0): 1})
    assert series_qpartial(s, "x", q).evaluate({"x": x, "y": y}) == qpartial(f, 0, (x, y), q)
    assert series_qpartial(s, "y", q).evaluate({"x": x, "y": y}) == qpartial(f, 1, (x, y), q)


def test_classical_limit():
    with mpmath.workdps(40):
        q = 1 - mpmath.mpf(10) ** -6
        x = mpmath.mpf("0.7")
        f = lambda z: z ** 4 - 2 * z ** 2 + z
        deriv = 4 * x ** 3 - 4 * x + 1
        # this q-derivative carries no 1/(1-q) normalization
        assert abs(dq(f, x, q) / (1 - q) - deriv) < 1e-5
