"""Jackson q-integrals and the closed forms they are compared against."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import IntegrandUndefined, PreconditionViolated, ZeroDenominator
from .qcore import (
    Certified,
    EvalContext,
    empirical_geometric_sum,
    qpoch_infinite,
)
from .qfunc import PhiSpec, phi_coefficients, phi_eval


class ProductIntegrand:
    """``scale * z^power * prod (n_i z; q)_inf / prod (d_i z; q)_inf``.

    Unlike an opaque callable, this exposes its denominator so that zero
    factors on a q-grid can be detected before summation.
    """

    def __init__(self, ctx: EvalContext, numer: Sequence = (), denom: Sequence = (),
                 power: int = 0, scale=1, q=None):
        self.ctx = ctx
        self.q = ctx.qn if q is None else ctx.num(q)
        self.numer = [ctx.num(c) for c in numer]
        self.denom = [ctx.num(c) for c in denom]
        self.power = power
        self.scale = ctx.num(scale)
        self.arity = 1

    def with_power(self, power: int) -> "ProductIntegrand":
        out = ProductIntegrand.__new__(ProductIntegrand)
        out.__dict__.update(self.__dict__)
        out.power = power
        return out

    def products(self, z) -> Certified:
        ctx = self.ctx
        out = Certified(self.scale, 0)
        for c in self.numer:
            out = out * qpoch_infinite(c * z, ctx, self.q)
        for c in self.denom:
            d = qpoch_infinite(c * z, ctx, self.q)
            if d.value == 0:
                raise IntegrandUndefined(f"zero denominator factor at z = {z}")
            out = out / d
        return out

    def __call__(self, z) -> Certified:
        return self.products(z) * (z ** self.power)

    def grid_sampler(self, endpoint) -> Callable[[int], Certified]:
        """``n -> f(endpoint * q^n)``, walking down the q-grid.

        Uses ``(w q^n;q)_inf = (1 - w q^n) (w q^(n+1);q)_inf``, so each further
        grid point costs one division per factor instead of a fresh product.
        Factors that come numerically close to zero are recomputed directly.
        """
        ctx = self.ctx
        q = self.q
        e = ctx.num(endpoint)
        tiny = ctx.mp.mpf(10) ** (-ctx.precision_digits // 2)
        ws = [c * e for c in self.numer] + [c * e for c in self.denom]
        prods = [qpoch_infinite(w, ctx, q) for w in ws]
        split = len(self.numer)
        values = []
        zk = [e]

        def advance():
            for i, w in enumerate(ws):
                f = 1 - w
                if abs(f) < tiny:
                    prods[i] = qpoch_infinite(w * q, ctx, q)
                else:
                    p = prods[i] / f
                    p.error += abs(p.value) * ctx.rounding_error(1)
                    prods[i] = p
                ws[i] = w * q
            zk[0] = zk[0] * q

        def at(n: int) -> Certified:
            while len(values) <= n:
                out = Certified(self.scale, 0)
                for p in prods[:split]:
                    out = out * p
                for p in prods[split:]:
                    if p.value == 0:
                        raise IntegrandUndefined(f"zero denominator factor at z = {zk[0]}")
                    out = out / p
                values.append(out * (zk[0] ** self.power))
                advance()
            return values[n]

        return at

    def scan_zero_factors(self, endpoint, max_terms: int):
        """Fail if some ``1 - d_i * endpoint * q^m`` (m >= 0) is numerically zero."""
        ctx = self.ctx
        tol = ctx.mp.mpf(10) ** (-ctx.precision_digits + 2)
        for c in self.denom:
            w = c * endpoint
            for m in range(max_terms):
                if abs(w) < 0.5:
                    break
                if abs(1 - w) < tol:
                    raise IntegrandUndefined(
                        f"denominator factor (1 - {c} * {endpoint} * q^{m}) vanishes"
                    )
                w *= self.q


class CachedIntegrand:
    """Memoise a one-variable integrand over the grid points it is sampled at."""

    def __init__(self, f: Callable):
        self.f = f
        self.cache: dict = {}

    def __call__(self, z):
        try:
            return self.cache[z]
        except KeyError:
            v = self.cache[z] = self.f(z)
            return v

    def scan_zero_factors(self, endpoint, max_terms):
        scan = getattr(self.f, "scan_zero_factors", None)
        if scan is not None:
            scan(endpoint, max_terms)

    @property
    def q(self):
        return getattr(self.f, "q", None)

    def grid_sampler(self, endpoint):
        base = getattr(self.f, "grid_sampler", None)
        if base is None:
            return None
        key = ("grid", endpoint)
        if key not in self.cache:
            self.cache[key] = base(endpoint)
        return self.cache[key]


class Moment:
    """``z^power * f(z)`` for a (possibly cached) base integrand ``f``."""

    def __init__(self, f, power: int):
        self.f = f
        self.power = power

    def __call__(self, z):
        return Certified.lift(self.f(z)) * z ** self.power

    @property
    def q(self):
        return getattr(self.f, "q", None)

    def grid_sampler(self, endpoint):
        base = getattr(self.f, "grid_sampler", None)
        sampler = base(endpoint) if base is not None else None
        q = self.q
        if sampler is None or q is None:
            return None
        powers = [endpoint ** self.power]
        step = q ** self.power

        def at(n):
            while len(powers) <= n:
                powers.append(powers[-1] * step)
            return sampler(n) * powers[n]
        return at

    def scan_zero_factors(self, endpoint, max_terms):
        scan = getattr(self.f, "scan_zero_factors", None)
        if scan is not None:
            scan(endpoint, max_terms)


@dataclass
class QIntegral:
    integrand: Callable
    lower: object
    upper: object
    ctx: EvalContext
    q: Optional[object] = None


def jackson_integral(qi: QIntegral) -> Certified:
    """``(1 - q) sum_n [b f(b q^n) - a f(a q^n)] q^n`` with an estimated tail bound.

    The tail uses the observed decay ratio of the last quarter of terms,
    never smaller than ``|q|``.  The returned error adds the tail estimate to
    the certified evaluation errors of the sampled integrand values.
    """
    ctx = qi.ctx
    q = ctx.qn if qi.q is None else ctx.num(qi.q)
    a = ctx.num(qi.lower)
    b = ctx.num(qi.upper)
    f = qi.integrand
    scan = getattr(f, "scan_zero_factors", None)
    if scan is not None:
        for e in (a, b):
            if e != 0:
                scan(e, ctx.max_terms)

    def sample(z):
        try:
            return Certified.lift(f(z))
        except ZeroDivisionError as exc:
            raise IntegrandUndefined(f"integrand undefined at z = {z}: {exc}") from exc

    def pointwise(e):
        qn = [ctx.mp.mpf(1)]

        def at(n):
            while len(qn) <= n:
                qn.append(qn[-1] * q)
            return sample(e * qn[n])
        return at

    # a grid sampler is only valid for the integrand's own base q
    grid = getattr(f, "grid_sampler", None)
    own_q = getattr(f, "q", None)
    use_grid = grid is not None and own_q is not None and own_q == q
    fb = (grid(b) if use_grid else None) or pointwise(b)
    fa = None
    if a != 0:
        fa = (grid(a) if use_grid else None) or pointwise(a)
    qn = [ctx.mp.mpf(1)]

    def term(n):
        while len(qn) <= n:
            qn.append(qn[-1] * q)
        w = qn[n]
        t = fb(n) * (b * w)
        if fa is not None:
            t = t - fa(n) * (a * w)
        return t

    s = empirical_geometric_sum(term, ctx, min_ratio=abs(q))
    scale = 1 - q
    return Certified(s.value * scale, s.error * abs(scale), s.terms)


# ---------------------------------------------------------------------------
# closed forms


def _prod(ctx, q, coeffs) -> Certified:
    out = Certified(ctx.mp.mpf(1), 0)
    for c in coeffs:
        out = out * qpoch_infinite(c, ctx, q)
    return out


def _ratio(ctx, q, numer, denom) -> Certified:
    den = _prod(ctx, q, denom)
    if den.value == 0 or den.error >= abs(den.value):
        raise ZeroDenominator("a denominator product vanishes")
    return _prod(ctx, q, numer) / den


def rhs_alsalam_verma(x, y, a, b, c, q, ctx: EvalContext) -> Certified:
    """``(1-q) y (q, x/y, qy/x, ab, acx, bcy)_inf / (ax/y, by/x, a, b, cx, cy)_inf``."""
    x, y, a, b, c, q = (ctx.num(v) for v in (x, y, a, b, c, q))
    if x == 0 or y == 0:
        raise PreconditionViolated("x and y must be nonzero")
    moduli = [a, b, c * x, c * y, a * x / y, b * y / x]
    if not max(abs(m) for m in moduli) < 1:
        raise PreconditionViolated("max{|a|,|b|,|cx|,|cy|,|ax/y|,|by/x|} < 1 is required")
    out = _ratio(ctx, q, [q, x / y, q * y / x, a * b, a * c * x, b * c * y],
                 [a * x / y, b * y / x, a, b, c * x, c * y])
    return out * ((1 - q) * y)


def rhs_andrews_askey(u, v, c, d, q, ctx: EvalContext) -> Certified:
    """``(1-q) v (q, u/v, qv/u, cduv)_inf / (cu, cv, du, dv)_inf``."""
    u, v, c, d, q = (ctx.num(t) for t in (u, v, c, d, q))
    if u == 0 or v == 0:
        raise PreconditionViolated("u and v must be nonzero")
    out = _ratio(ctx, q, [q, u / v, q * v / u, c * d * u * v],
                 [c * u, c * v, d * u, d * v])
    return out * ((1 - q) * v)


def wang_inner_sums(u, v, c, d, q, ctx: EvalContext):
    """Yield ``sum_j [n,j]_q (cv, dv;q)_j / (cduv;q)_j u^j v^(n-j)`` for n = 0, 1, 2, ..."""
    u, v, c, d, q = (ctx.num(t) for t in (u, v, c, d, q))
    cv, dv, cduv = c * v, d * v, c * d * u * v
    # weights w_j = (cv, dv;q)_j / (cduv;q)_j, extended lazily
    w = [ctx.mp.mpf(1)]
    qj = ctx.mp.mpf(1)
    n = 0
    while True:
        row = phi_coefficients(PhiSpec(n, 0, 0), q)
        total = 0
        upow = ctx.mp.mpf(1)
        vpow = [ctx.mp.mpf(1)]
        for _ in range(n):
            vpow.append(vpow[-1] * v)
        for j in range(n + 1):
            total += row[j] * w[j] * upow * vpow[n - j]
            upow *= u
        yield total
        den = 1 - cduv * qj
        if den == 0:
            raise ZeroDenominator("(cduv;q)_j vanishes")
        w.append(w[-1] * (1 - cv * qj) * (1 - dv * qj) / den)
        qj *= q
        n += 1


def rhs_wang_moment(u, v, c, d, n: int, q, ctx: EvalContext) -> Certified:
    base = rhs_andrews_askey(u, v, c, d, q, ctx)
    gen = wang_inner_sums(u, v, c, d, q, ctx)
    for _ in range(n):
        next(gen)
    inner = next(gen)
    return base * inner


def rhs_liu_qint(u, v, a, b, c, d, alpha, beta, q, ctx: EvalContext) -> Certified:
    """Andrews-Askey product times ``sum_n Phi_n(a, b)/(q;q)_n * inner_n``.

    The outer series has no a-priori tail bound; it is truncated by the same
    empirical geometric policy as the q-integrals.
    """
    base = rhs_andrews_askey(u, v, c, d, q, ctx)
    qn = ctx.num(q)
    a, b, alpha, beta = (ctx.num(t) for t in (a, b, alpha, beta))
    inner = wang_inner_sums(u, v, c, d, qn, ctx)
    qq = [ctx.mp.mpf(1)]

    def term(n):
        while len(qq) <= n:
            qq.append(qq[-1] * (1 - qn ** len(qq)))
        return phi_eval(PhiSpec(n, alpha, beta), a, b, qn) / qq[n] * next(inner)

    series = empirical_geometric_sum(term, ctx)
    out = base * series
    out.terms = series.terms
    return out


def phi_qint_representation(k: int, a, b, x, y, q, ctx: EvalContext) -> Certified:
    """Phi_k^(a,b)(x, y|q) recovered from a Jackson integral over [x, y]."""
    a, b, x, y, q = (ctx.num(t) for t in (a, b, x, y, q))
    if x == 0 or y == 0:
        raise PreconditionViolated("x and y must be nonzero")
    ab = a * b
    abk = Certified(ctx.mp.mpf(1), 0)
    for i in range(k):
        abk = abk * (1 - ab * q ** i)
    pref = _ratio(ctx, q, [a, b, b * y / x, a * x / y], [q, ab, x / y, q * y / x])
    pref = pref * abk / ((1 - q) * y)
    f = ProductIntegrand(ctx, numer=[q / x, q / y], denom=[b / x, a / y], power=k, q=q)
    integral = jackson_integral(QIntegral(f, x, y, ctx, q))
    out = pref * integral
    out.terms = integral.terms
    return out


def rs_qint_representation(k: int, x, y, q, ctx: EvalContext) -> Certified:
    """Homogeneous Rogers-Szego h_k(x, y|q) from ``int_x^y (qz/x, qz/y;q)_inf z^k d_q z``."""
    x, y, q = (ctx.num(t) for t in (x, y, q))
    if x == 0 or y == 0:
        raise PreconditionViolated("x and y must be nonzero")
    pref = _prod(ctx, q, [q, x / y, q * y / x]) * ((1 - q) * y)
    f = ProductIntegrand(ctx, numer=[q / x, q / y], power=k, q=q)
    integral = jackson_integral(QIntegral(f, x, y, ctx, q))
    out = integral / pref
    out.terms = integral.terms
    return out
