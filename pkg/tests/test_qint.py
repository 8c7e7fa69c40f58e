from fractions import Fraction as F

import pytest

from qcalc.errors import IntegrandUndefined, PreconditionViolated
from qcalc.qcore import Certified, EvalContext
from qcalc.qfunc import PhiSpec, phi_eval, rogers_szego
from qcalc.qint import (
    ProductIntegrand, QIntegral, jackson_integral, phi_qint_representation, rhs_alsalam_verma,
    rhs_andrews_askey, rhs_liu_qint, rhs_wang_moment, rs_qint_representation,
)


def close(ctx, a, b, tol):
    a, b = Certified.lift(a), Certified.lift(b)
    scale = max(abs(a.value), abs(b.value), ctx.floor)
    return abs(a.value - b.value) / scale <= ctx.num(tol)


TOL = F(1, 10 ** 25)


def test_elementary_integrals():
    q = F(2, 5)
    ctx = EvalContext(q)
    one = jackson_integral(QIntegral(lambda z: 1, 0, 1, ctx))
    assert close(ctx, one, 1, F(1, 10 ** 40))
    lin = jackson_integral(QIntegral(lambda z: z, 0, 1, ctx))
    assert close(ctx, lin, ctx.num(1 / (1 + q)), F(1, 10 ** 40))


def test_andrews_askey_instance():
    u, v, c, d, q = F(1, 2), F(1), F(1, 4), F(1, 5), F(3, 10)
    ctx = EvalContext(q)
    f = ProductIntegrand(ctx, numer=[q / u, q / v], denom=[c, d])
    lhs = jackson_integral(QIntegral(f, u, v, ctx))
    assert close(ctx, lhs, rhs_andrews_askey(u, v, c, d, q, ctx), TOL)


def test_wang_moment_instance_and_degenerations():
    u, v, c, d, q = F(1, 3), F(1), F(1, 4), F(1, 6), F(2, 7)
    ctx = EvalContext(q)
    f = ProductIntegrand(ctx, numer=[q / u, q / v], denom=[c, d], power=3)
    lhs = jackson_integral(QIntegral(f, u, v, ctx))
    assert close(ctx, lhs, rhs_wang_moment(u, v, c, d, 3, q, ctx), TOL)
    aa = rhs_andrews_askey(u, v, c, d, q, ctx)
    assert close(ctx, rhs_wang_moment(u, v, c, d, 0, q, ctx), aa, F(1, 10 ** 45))
    assert close(ctx, rhs_liu_qint(u, v, 0, 0, c, d, F(1, 3), F(1, 2), q, ctx), aa, F(1, 10 ** 45))


def test_alsalam_verma():
    x, y, a, b, c, q = F(1, 2), F(-1, 3), F(1, 5), F(1, 4), F(1, 3), F(1, 2)
    ctx = EvalContext(q)
    f = ProductIntegrand(ctx, numer=[q / x, q / y, a * b * c], denom=[a / y, b / x, c])
    lhs = jackson_integral(QIntegral(f, x, y, ctx))
    assert close(ctx, lhs, rhs_alsalam_verma(x, y, a, b, c, q, ctx), TOL)
    # c = 0 collapses the c-dependent factors
    plain = rhs_alsalam_verma(x, y, a, b, 0, q, ctx)
    f0 = ProductIntegrand(ctx, numer=[q / x, q / y], denom=[a / y, b / x])
    assert close(ctx, jackson_integral(QIntegral(f0, x, y, ctx)), plain, TOL)
    with pytest.raises(PreconditionViolated):
        rhs_alsalam_verma(x, y, F(2), b, c, q, ctx)


def test_phi_representation():
    a, b, x, y, q = F(1, 3), F(-1, 4), F(1, 2), F(-2, 3), F(3, 5)
    ctx = EvalContext(q)
    assert close(ctx, phi_qint_representation(0, a, b, x, y, q, ctx), 1, TOL)
    for k in range(1, 9):
        exact = phi_eval(PhiSpec(k, a, b), x, y, q)
        assert close(ctx, phi_qint_representation(k, a, b, x, y, q, ctx), ctx.num(exact), TOL)
        rs = phi_qint_representation(k, 0, 0, x, y, q, ctx)
        assert close(ctx, rs, rs_qint_representation(k, x, y, q, ctx), TOL)
        assert close(ctx, rs, ctx.num(rogers_szego(k, x, y, q)), TOL)


def test_linearity_and_orientation():
    q = F(1, 3)
    ctx = EvalContext(q)
    f = ProductIntegrand(ctx, numer=[F(1, 2)], denom=[F(1, 5)])
    g = ProductIntegrand(ctx, numer=[F(-1, 3)], denom=[F(2, 7)], power=2)
    lo, hi = F(1, 4), F(9, 10)
    I = lambda h, a, b: jackson_integral(QIntegral(h, a, b, ctx))
    lam, mu = ctx.num(F(3, 7)), ctx.num(F(-5, 2))
    combo = I(lambda z: Certified.lift(f(z)) * lam + Certified.lift(g(z)) * mu, lo, hi)
    sep = I(f, lo, hi) * lam + I(g, lo, hi) * mu
    assert abs(combo.value - sep.value) <= combo.error + sep.error
    fwd, back = I(f, lo, hi), I(f, hi, lo)
    assert fwd.value == -back.value


def test_refinement_stays_within_reported_bound():
    u, v, c, d, q = F(1, 2), F(1), F(1, 4), F(1, 5), F(3, 10)
    coarse_ctx = EvalContext(q, tail_epsilon=F(1, 10 ** 30))
    fine_ctx = EvalContext(q, tail_epsilon=F(1, 10 ** 32))
    vals = []
    for ctx in (coarse_ctx, fine_ctx):
        f = ProductIntegrand(ctx, numer=[q / u, q / v], denom=[c, d])
        vals.append(jackson_integral(QIntegral(f, u, v, ctx)))
    assert abs(vals[0].value - vals[1].value) < vals[0].error


def test_zero_denominator_detected():
    q = F(1, 2)
    ctx = EvalContext(q)
    # (c z;q)_inf with c u = 1 vanishes at the grid point z = u
    f = ProductIntegrand(ctx, numer=[q / F(1, 2), q], denom=[F(2), F(1, 5)])
    with pytest.raises(IntegrandUndefined):
        jackson_integral(QIntegral(f, F(1, 2), F(1), ctx))
