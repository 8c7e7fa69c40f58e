"""Scalars, evaluation contexts, q-shifted factorials and q-binomial coefficients.

Two kinds of scalars flow through the library:

* exact rationals (``int`` / :class:`fractions.Fraction`), for which every
  finite operation here is exact, and
* high-precision numbers (``mpf`` / ``mpc``) owned by the private mpmath
  context of an :class:`EvalContext`.

Infinite sums and products return :class:`Certified` values carrying an
absolute error bound and the truncation index that produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Optional

from mpmath import MPContext

from .errors import (
    NegativeIndexUndefined,
    PreconditionViolated,
    TailNotConverged,
    ZeroDenominator,
)

INFINITY = math.inf

#: extra decimal digits carried by every numeric intermediate
GUARD_DIGITS = 10


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def as_fraction(x) -> Fraction:
    """Parse ``"p/q"``, ints, or Fractions into a Fraction (floats are refused)."""
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string 'p/q' or a Fraction")
    return Fraction(x)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class EvalContext:
    """Global evaluation policy: the base ``q`` plus precision and truncation limits.

    ``tail_epsilon`` is a *relative* target: truncation stops once the
    certified (or, for q-integrals, estimated) tail is below
    ``tail_epsilon * max(|partial sum|, 10**-precision_digits)``.
    """

    q: object
    precision_digits: int = 50
    tail_epsilon: Optional[object] = None
    max_terms: int = 5000
    mp: MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.precision_digits < 30:
            raise PreconditionViolated("precision_digits must be at least 30")
        if self.max_terms < 16:
            raise PreconditionViolated("max_terms must be at least 16")
        mp = MPContext()
        mp.dps = self.precision_digits + GUARD_DIGITS
        object.__setattr__(self, "mp", mp)
        floor = mp.mpf(10) ** (-self.precision_digits + 5)
        eps = floor if self.tail_epsilon is None else mp.mpf(self.num(self.tail_epsilon))
        if eps <= 0 or eps < floor * (1 - mp.mpf(10) ** -20):
            raise PreconditionViolated(
                f"tail_epsilon must be >= 10^-{self.precision_digits - 5}"
            )
        object.__setattr__(self, "tail_epsilon", eps)
        if not abs(self.q) < 1:
            raise PreconditionViolated("|q| < 1 is required")

    def num(self, x):
        """Convert an exact or foreign-context scalar into this context."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        if isinstance(x, complex):
            return self.mp.mpc(x.real, x.imag)
        return self.mp.convert(x)

    @property
    def qn(self):
        return self.num(self.q)

    @property
    def floor(self):
        """Magnitude below which a value is treated as zero for relative comparisons."""
        return self.mp.mpf(10) ** (-self.precision_digits)

    def with_q(self, q) -> "EvalContext":
        return EvalContext(q, self.precision_digits, self.tail_epsilon, self.max_terms)

    def rounding_error(self, n_ops: int):
        """Crude bound on accumulated relative rounding after ``n_ops`` operations."""
        return (n_ops + 1) * self.mp.mpf(10) ** (-self.mp.dps + 1)


class Certified:
    """A numeric value together with an absolute error bound.

    Arithmetic between Certified values (or plain scalars) propagates first
    order and second order error terms rigorously, ignoring rounding, which
    the guard digits of the context absorb.
    """

    __slots__ = ("value", "error", "terms")

    def __init__(self, value, error=0, terms=None):
        self.value = value
        self.error = abs(error)
        self.terms = terms

    def __repr__(self):
        return f"Certified({self.value!r}, error={self.error!r}, terms={self.terms!r})"

    @property
    def rel_error(self):
        mag = abs(self.value)
        if mag == 0:
            return math.inf if self.error else 0
        return self.error / mag

    @staticmethod
    def lift(x) -> "Certified":
        return x if isinstance(x, Certified) else Certified(x, 0)

    def __add__(self, other):
        o = Certified.lift(other)
        return Certified(self.value + o.value, self.error + o.error)

    __radd__ = __add__

    def __neg__(self):
        return Certified(-self.value, self.error, self.terms)

    def __sub__(self, other):
        return self + (-Certified.lift(other))

    def __rsub__(self, other):
        return Certified.lift(other) - self

    def __mul__(self, other):
        o = Certified.lift(other)
        err = abs(self.value) * o.error + abs(o.value) * self.error + self.error * o.error
        return Certified(self.value * o.value, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Certified.lift(other)
        mag = abs(o.value)
        if mag == 0 or o.error >= mag:
            raise ZeroDenominator("divisor is not certified to be nonzero")
        err = (self.error * mag + abs(self.value) * o.error) / (mag * (mag - o.error))
        return Certified(self.value / o.value, err)

    def __rtruediv__(self, other):
        return Certified.lift(other) / self

    def __pow__(self, n: int):
        out = Certified(1, 0)
        for _ in range(n):
            out = out * self
        return out


# ---------------------------------------------------------------------------
# q-shifted factorials


def qpoch_finite(a, q, n: int):
    """``(a;q)_n``; exact when ``a`` and ``q`` are rational."""
    if n < 0:
        raise NegativeIndexUndefined("qpoch_finite needs n >= 0")
    out = 1
    aqk = a
    for _ in range(n):
        out *= 1 - aqk
        aqk *= q
    return out


def qpoch_infinite(a, ctx: EvalContext, q=None) -> Certified:
    """``(a;q)_inf`` with a certified bound on the neglected tail.

    After ``k`` factors the remaining product differs from 1 by at most
    ``exp(s) - 1 <= s + s**2`` where ``s = |a q^k| / (1 - |q|)``.
    """
    mp = ctx.mp
    q = ctx.qn if q is None else ctx.num(q)
    a = ctx.num(a)
    if a == 0:
        return Certified(mp.mpf(1), 0, 0)
    aq = abs(q)
    if not aq < 1:
        raise PreconditionViolated("|q| < 1 is required for an infinite product")
    eps = ctx.tail_epsilon
    one_minus = 1 - aq
    # factors needed for s <= eps/2, so that s + s^2 <= eps; checked again below
    if aq == 0:
        need = 1
    else:
        target = eps * one_minus / (2 * abs(a))
        need = 0 if target >= 1 else int(mp.ceil(mp.log(target) / mp.log(aq)))
    if need > ctx.max_terms:
        raise TailNotConverged(f"(a;q)_inf needs {need} factors, more than max_terms")
    prod = mp.mpf(1)
    aqk = a
    for _ in range(need):
        prod *= 1 - aqk
        aqk *= q
    k = need
    while True:
        s = abs(aqk) / one_minus
        if s <= 0.5 and s + s * s <= eps:
            break
        if k >= ctx.max_terms:
            raise TailNotConverged(f"(a;q)_inf not certified after {k} factors")
        prod *= 1 - aqk
        aqk *= q
        k += 1
    rel = s + s * s + ctx.rounding_error(k)
    return Certified(prod, abs(prod) * rel, k)


def qpoch_multi(a_list: Iterable, q, n, ctx: Optional[EvalContext] = None):
    """``(a_1, ..., a_m; q)_n`` for integer ``n`` or ``INFINITY``."""
    a_list = list(a_list)
    if n == INFINITY:
        if ctx is None:
            raise PreconditionViolated("an EvalContext is needed for n = INFINITY")
        out = Certified(ctx.mp.mpf(1), 0, 0)
        terms = 0
        for a in a_list:
            f = qpoch_infinite(a, ctx, q)
            terms = max(terms, f.terms)
            out = out * f
        out.terms = terms
        return out
    out = 1
    for a in a_list:
        out *= qpoch_finite(a, q, n)
    return out


def qpoch_recip(a, q, n, ctx: Optional[EvalContext] = None):
    """``1/(a;q)_n``, with the convention ``1/(q;q)_n = 0`` for ``n < 0``."""
    if n == INFINITY:
        if ctx is None:
            raise PreconditionViolated("an EvalContext is needed for n = INFINITY")
        return 1 / qpoch_infinite(a, ctx, q)
    if n < 0:
        if a == q:
            return 0
        raise NegativeIndexUndefined(f"1/(a;q)_{n} is undefined unless a = q")
    p = qpoch_finite(a, q, n)
    if p == 0:
        raise ZeroDenominator(f"(a;q)_{n} vanishes")
    if is_exact(p):
        return Fraction(1) / p
    return 1 / p


def qbinomial(n: int, k: int, q):
    """Gaussian binomial coefficient, zero outside ``0 <= k <= n``.

    Evaluated through the product ``prod (1 - q^(n-k+i)) / (1 - q^i)``, which
    involves no subtractive cancellation for |q| < 1 and is exact over Q.  At
    roots of unity, where the product is 0/0, the polynomial value is taken
    from the q-Pascal recurrence instead.
    """
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    if q == 1:
        return math.comb(n, k)
    num = 1
    den = 1
    qi = q
    for _ in range(k):
        den *= 1 - qi
        qi *= q
    if den == 0:
        return qbinomial_row(n, q)[k]
    qj = q ** (n - k + 1)
    for _ in range(k):
        num *= 1 - qj
        qj *= q
    if is_exact(num) and is_exact(den):
        return Fraction(num) / den
    return num / den


def qbinomial_row(n: int, q) -> list:
    """All ``[n, k]_q`` for ``k = 0..n`` by ``[n,k] = [n-1,k-1] + q^k [n-1,k]``.

    Division free, so it is valid at every q including roots of unity.
    """
    qpow = [1]
    for _ in range(n):
        qpow.append(qpow[-1] * q)
    row = [1]
    for m in range(1, n + 1):
        row = [1] + [row[k - 1] + qpow[k] * row[k] for k in range(1, m)] + [1]
    return [Fraction(c) for c in row] if is_exact(q) else row


# ---------------------------------------------------------------------------
# truncation helpers shared by the series and integral modules


def abs_product_upper(a_abs, ctx: EvalContext, q_abs=None):
    """Upper bound of ``(-|a|; |q|)_inf``, which dominates ``|(a;q)_n|`` for all n."""
    q_abs = abs(ctx.qn) if q_abs is None else q_abs
    p = qpoch_infinite(-abs(ctx.num(a_abs)), ctx, q_abs)
    return p.value + p.error


def abs_product_lower(a_abs, ctx: EvalContext, q_abs=None):
    """Lower bound of ``(|a|; |q|)_inf`` for |a| < 1, which bounds ``|(a;q)_n|`` from below."""
    q_abs = abs(ctx.qn) if q_abs is None else q_abs
    a_abs = abs(ctx.num(a_abs))
    if not a_abs < 1:
        raise PreconditionViolated("|a| < 1 is needed for a lower product bound")
    p = qpoch_infinite(a_abs, ctx, q_abs)
    low = p.value - p.error
    if low <= 0:
        raise ZeroDenominator("product lower bound is not positive")
    return low


def binomial_geometric_tail(N: int, d: int, R, ctx: EvalContext):
    """Bound on ``sum_{M > N} C(M+d-1, d-1) R^M`` for 0 <= R < 1, or None if not yet valid.

    Consecutive ratios ``(M+d)/(M+1) * R`` decrease in M, so the tail is
    dominated by a geometric series started at ``M = N + 1``.
    """
    mp = ctx.mp
    R = mp.mpf(R)
    if R == 0:
        return mp.mpf(0)
    M = N + 1
    rho = mp.mpf(M + d) / (M + 1) * R
    if rho >= 1:
        return None
    first = mp.binomial(M + d - 1, d - 1) * R**M
    return first / (1 - rho)


def certified_sum(term: Callable[[int], object], tail_bound: Callable[[int], object],
                  ctx: EvalContext, start: int = 0) -> Certified:
    """Sum ``term(n)`` for ``n >= start`` until the a-priori tail bound is small.

    ``tail_bound(n)`` must bound ``sum_{m > n} |term(m)|`` (or return None
    when it cannot yet).  Terms may be plain scalars or Certified values.
    """
    s = Certified(ctx.mp.mpf(0), 0)
    eps = ctx.tail_epsilon
    for n in range(start, start + ctx.max_terms):
        s = s + term(n)
        t = tail_bound(n)
        if t is not None and t <= eps * max(abs(s.value), ctx.floor):
            out = Certified(s.value, s.error + t, n + 1)
            return out
    raise TailNotConverged(f"series tail not certified within {ctx.max_terms} terms")


def empirical_geometric_sum(term: Callable[[int], object], ctx: EvalContext, *,
                            min_ratio=0, start: int = 0, min_terms: int = 16) -> Certified:
    """Sum a series whose terms eventually decay geometrically.

    The decay ratio is the largest observed ``|t_{n+1}/t_n|`` over the last
    quarter of computed terms, clamped below by ``min_ratio``.  The tail after
    the last term ``t_N`` is estimated as ``|t_N| rho / (1 - rho)``.  This is
    an empirical, not a-priori, bound.
    """
    mp = ctx.mp
    eps = ctx.tail_epsilon
    min_ratio = mp.mpf(min_ratio)
    mags = []
    s = Certified(mp.mpf(0), 0)
    for i, n in enumerate(range(start, start + ctx.max_terms)):
        t = Certified.lift(term(n))
        s = s + t
        mags.append(abs(t.value))
        if i + 1 < min_terms:
            continue
        lo = len(mags) - max(4, len(mags) // 4)
        rho = min_ratio
        for a, b in zip(mags[lo:-1], mags[lo + 1:]):
            if a == 0:
                r = mp.mpf(0) if b == 0 else mp.inf
            else:
                r = b / a
            rho = max(rho, r)
        if rho >= 1:
            continue
        tail = mags[-1] * rho / (1 - rho)
        if tail <= eps * max(abs(s.value), ctx.floor):
            out = Certified(s.value, s.error + tail, i + 1)
            return out
    raise TailNotConverged(f"no geometric decay established within {ctx.max_terms} terms")
