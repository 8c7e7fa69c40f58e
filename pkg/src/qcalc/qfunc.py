"""The homogeneous polynomials Phi_n^(alpha,beta)(x, y|q) and basic hypergeometric series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    Divergent,
    OrderTooSmall,
    PreconditionViolated,
    TailNotConverged,
    ZeroDenominator,
)
from .fps import TruncatedSeries, series_invert
from .qcore import Certified, EvalContext, is_exact, qbinomial_row


@dataclass(frozen=True)
class PhiSpec:
    n: int
    alpha: object = 0
    beta: object = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("PhiSpec.n must be >= 0")


def _pochhammer_list(a, q, n):
    out = [1]
    aqk = a
    for _ in range(n):
        out.append(out[-1] * (1 - aqk))
        aqk = aqk * q
    return out


def phi_coefficients(spec: PhiSpec, q) -> list:
    """Coefficients ``[n,k]_q (alpha;q)_k (beta;q)_{n-k}`` of ``x^k y^(n-k)``, k = 0..n."""
    n = spec.n
    row = qbinomial_row(n, q)
    pa = _pochhammer_list(spec.alpha, q, n)
    pb = _pochhammer_list(spec.beta, q, n)
    return [row[k] * pa[k] * pb[n - k] for k in range(n + 1)]


def phi_eval(spec: PhiSpec, x, y, q):
    """Evaluate Phi_n^(alpha,beta)(x, y|q); exact for rational arguments."""
    coeffs = phi_coefficients(spec, q)
    n = spec.n
    total = 0
    xk = 1
    ypow = _powers(y, n)
    for k in range(n + 1):
        total = total + coeffs[k] * xk * ypow[n - k]
        xk = xk * x
    return total


def _powers(x, n):
    out = [1]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def phi_series(spec: PhiSpec, xvar: str, yvar: str, q, order: int,
               vars: Optional[Sequence[str]] = None) -> TruncatedSeries:
    if spec.n > order:
        raise OrderTooSmall(f"Phi_{spec.n} does not fit in order {order}")
    vars = (xvar, yvar) if vars is None else tuple(vars)
    jx, jy = vars.index(xvar), vars.index(yvar)
    out = {}
    for k, c in enumerate(phi_coefficients(spec, Fraction(q))):
        idx = [0] * len(vars)
        idx[jx] = k
        idx[jy] = spec.n - k
        out[tuple(idx)] = c
    return TruncatedSeries(vars, order, out)


def rogers_szego(n, x, y, q):
    return phi_eval(PhiSpec(n, 0, 0), x, y, q)


def hahn(n, alpha, x, y, q):
    return phi_eval(PhiSpec(n, alpha, 0), x, y, q)


def ultraspherical(n, beta, x, y, q):
    return phi_eval(PhiSpec(n, beta, beta), x, y, q)


# ---------------------------------------------------------------------------
# basic hypergeometric series


@dataclass(frozen=True)
class QPow:
    """Exact parameter ``q**exponent``; ``QPow(-m)`` as an upper parameter terminates a series."""

    exponent: int

    def resolve(self, q):
        if is_exact(q):
            return Fraction(q) ** self.exponent
        return q ** self.exponent


HyperParam = Union[QPow, object]


@dataclass(frozen=True)
class HyperSpec:
    upper: tuple
    lower: tuple
    argument: object

    def __init__(self, upper: Sequence[HyperParam], lower: Sequence[HyperParam], argument):
        object.__setattr__(self, "upper", tuple(upper))
        object.__setattr__(self, "lower", tuple(lower))
        object.__setattr__(self, "argument", argument)

    @property
    def terminating_at(self) -> Optional[int]:
        """Index of the last possibly nonzero term, or None if nonterminating."""
        ms = [-u.exponent for u in self.upper if isinstance(u, QPow) and u.exponent <= 0]
        return min(ms) if ms else None

    def check_lower(self, last: Optional[int]):
        for l in self.lower:
            if isinstance(l, QPow) and l.exponent <= 0:
                # (q^-J; q)_n vanishes for n > J
                if last is None or last > -l.exponent:
                    raise ZeroDenominator(
                        f"lower parameter q^{l.exponent} zeroes a denominator within range"
                    )


def _resolve(p, q, ctx):
    if isinstance(p, QPow):
        return p.resolve(q)
    if ctx is not None and not is_exact(q):
        return ctx.num(p)
    return p


def rphis_eval(spec: HyperSpec, q, ctx: Optional[EvalContext] = None) -> Certified:
    """Sum the r-phi-s series by its consecutive-term ratio.

    Terminating series are summed exactly over Q (when every input is rational)
    or in working precision.  Nonterminating series need a context and stop
    once a certified geometric bound on the tail meets ``ctx.tail_epsilon``.
    """
    last = spec.terminating_at
    spec.check_lower(last)
    if isinstance(spec.argument, (int, Fraction)) and spec.argument == 0:
        # only the n = 0 term survives, whatever the parameters
        return Certified(Fraction(1) if ctx is None else ctx.mp.mpf(1), 0, 1)
    exact = (last is not None and is_exact(q) and is_exact(spec.argument)
             and all(isinstance(p, QPow) or is_exact(p) for p in spec.upper + spec.lower))
    if not exact:
        if ctx is None:
            raise PreconditionViolated("numeric evaluation needs an EvalContext")
        q = ctx.num(q)
    up = [_resolve(p, q, None if exact else ctx) for p in spec.upper]
    lo = [_resolve(p, q, None if exact else ctx) for p in spec.lower]
    z = spec.argument if exact else ctx.num(spec.argument)
    e = 1 + len(lo) - len(up)

    if z == 0:
        one = Fraction(1) if exact else ctx.mp.mpf(1)
        return Certified(one, 0, 1)

    def ratio(n, qn):
        num = z
        for u in up:
            num = num * (1 - u * qn)
        den = 1 - qn * q
        for l in lo:
            f = 1 - l * qn
            if f == 0 or (not exact and abs(f) < ctx.floor * 100):
                raise ZeroDenominator(f"denominator factor vanishes at n = {n}")
            den = den * f
        if den == 0:
            raise ZeroDenominator(f"(q;q)_{n + 1} vanishes")
        if e:
            num = num * (-qn) ** e
        return num / den

    if last is not None:
        term = Fraction(1) if exact else ctx.mp.mpf(1)
        total = term
        qn = Fraction(1) if exact else ctx.mp.mpf(1)
        for n in range(last):
            term = term * ratio(n, qn)
            total = total + term
            qn = qn * q
        err = 0 if exact else abs(total) * ctx.rounding_error(3 * last)
        return Certified(total, err, last + 1)

    if ctx is None:
        raise PreconditionViolated("nonterminating series need an EvalContext")
    if e < 0:
        raise Divergent(f"{len(up)}phi{len(lo)} with r > s + 1 diverges")
    if e == 0 and not abs(z) < 1:
        raise Divergent("|argument| < 1 is required when r = s + 1")

    mp = ctx.mp
    qa = abs(q)
    ua = [abs(u) for u in up]
    la = [abs(l) for l in lo]
    za = abs(z)
    term = mp.mpf(1)
    total = mp.mpf(1)
    qn = mp.mpf(1)
    for n in range(ctx.max_terms):
        term = term * ratio(n, qn)
        qn = qn * q
        # term == t_{n+1}; bound |t_{m+1}/t_m| for every m >= n + 1
        qN = qa ** (n + 1)
        num = za * qN ** e
        for u in ua:
            num *= 1 + u * qN
        den = 1 - qN * qa
        for l in la:
            den *= 1 - l * qN
        if den > 0:
            rho = num / den
            if rho < 1:
                tail = abs(term) / (1 - rho)
                if tail <= ctx.tail_epsilon * max(abs(total), ctx.floor):
                    err = tail + abs(total) * ctx.rounding_error(3 * n)
                    return Certified(total, err, n + 1)
        total = total + term
    raise TailNotConverged(f"series not certified within {ctx.max_terms} terms")


def rphis_series(upper: Sequence, lower: Sequence, argument, q, vars, order) -> TruncatedSeries:
    """Terminating r-phi-s whose parameters may themselves be truncated series.

    Parameters are rationals, :class:`QPow` markers or :class:`TruncatedSeries`
    over ``vars``; at least one upper parameter must be ``QPow(-m)``.
    """
    spec = HyperSpec(upper, lower, 0)
    last = spec.terminating_at
    if last is None:
        raise PreconditionViolated("rphis_series needs a terminating upper parameter QPow(-m)")
    spec.check_lower(last)
    q = Fraction(q)

    def lift(p):
        if isinstance(p, TruncatedSeries):
            return p
        return TruncatedSeries.constant(vars, order, _resolve(p, q, None))

    up = [lift(p) for p in upper]
    lo = [lift(p) for p in lower]
    z = lift(argument)
    e = 1 + len(lo) - len(up)
    one = TruncatedSeries.constant(vars, order)
    term = one
    total = one
    qn = Fraction(1)
    for n in range(last):
        num = z
        for u in up:
            num = num * (one - u.scale(qn))
        den = one.scale(1 - qn * q)
        for l in lo:
            den = den * (one - l.scale(qn))
        if e:
            num = num.scale((-qn) ** e)
        term = term * num * series_invert(den)
        total = total + term
        qn = qn * q
    return total
