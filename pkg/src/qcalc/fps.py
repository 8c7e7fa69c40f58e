"""Exact multivariate power series over Q, truncated at a total degree."""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import (
    NonUnitConstantTerm,
    OrderTooSmall,
    UnknownVariable,
    VarSetMismatch,
    ZeroDenominator,
)
from .qcore import fraction_str, qpoch_finite


class TruncatedSeries:
    """Sparse series ``sum c_e x^e`` with all ``|e| <= order``; immutable.

    Coefficients are Fractions, zero coefficients are never stored and every
    arithmetic result is re-truncated to ``order``.
    """

    __slots__ = ("vars", "order", "_coeffs")

    def __init__(self, vars: Sequence[str], order: int,
                 coeffs: Optional[Mapping[tuple, object]] = None):
        vars = tuple(vars)
        if not vars:
            raise VarSetMismatch("a series needs at least one variable")
        if len(set(vars)) != len(vars):
            raise VarSetMismatch(f"duplicate variable names in {vars}")
        if order < 0:
            raise OrderTooSmall("order must be >= 0")
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(int(e) for e in idx)
            if len(idx) != len(vars) or min(idx) < 0:
                raise VarSetMismatch(f"bad exponent tuple {idx} for variables {vars}")
            if sum(idx) > order:
                continue
            c = Fraction(c)
            if c:
                clean[idx] = clean.get(idx, 0) + c
                if not clean[idx]:
                    del clean[idx]
        self.vars = vars
        self.order = order
        self._coeffs = clean

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, vars, order, c=1):
        return cls(vars, order, {(0,) * len(tuple(vars)): c})

    @classmethod
    def variable(cls, vars, order, name, coeff=1):
        return cls.monomial(vars, order, {name: 1}, coeff)

    @classmethod
    def monomial(cls, vars, order, powers: Mapping[str, int], coeff=1):
        vars = tuple(vars)
        idx = [0] * len(vars)
        for name, e in powers.items():
            idx[_position(vars, name)] += e
        return cls(vars, order, {tuple(idx): coeff})

    @classmethod
    def _raw(cls, vars, order, coeffs):
        s = cls.__new__(cls)
        s.vars = vars
        s.order = order
        s._coeffs = coeffs
        return s

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (self.vars == other.vars and self.order == other.order
                    and self._coeffs == other._coeffs)
        if isinstance(other, (int, Fraction)):
            return self == TruncatedSeries.constant(self.vars, self.order, other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({self.vars}, order={self.order}, terms={len(self)})"

    def __str__(self):
        return self.dump()

    def dump(self) -> str:
        """Canonical text: one term per line sorted by (total degree, exponents)."""
        lines = [f"vars: {','.join(self.vars)}", f"order: {self.order}"]
        for idx in sorted(self._coeffs, key=lambda e: (sum(e), e)):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, idx) if e
            ) or "1"
            lines.append(f"{fraction_str(self._coeffs[idx])} {mono}")
        return "\n".join(lines) + "\n"

    # -- ring operations --------------------------------------------------

    def _check(self, other: "TruncatedSeries"):
        if self.vars != other.vars or self.order != other.order:
            raise VarSetMismatch(
                f"series over {self.vars}@{self.order} vs {other.vars}@{other.order}"
            )

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(self.vars, self.order, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._coeffs)
        for idx, c in o._coeffs.items():
            v = out.get(idx, 0) + c
            if v:
                out[idx] = v
            else:
                out.pop(idx, None)
        return TruncatedSeries._raw(self.vars, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.vars, self.order,
                                    {i: -c for i, c in self._coeffs.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        if not c:
            return TruncatedSeries._raw(self.vars, self.order, {})
        return TruncatedSeries._raw(self.vars, self.order,
                                    {i: v * c for i, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        order = self.order
        rhs = sorted(((sum(i), i, c) for i, c in other._coeffs.items()))
        out: dict = {}
        for ia, ca in self._coeffs.items():
            room = order - sum(ia)
            for d, ib, cb in rhs:
                if d > room:
                    break
                idx = tuple(x + y for x, y in zip(ia, ib))
                v = out.get(idx, 0) + ca * cb
                if v:
                    out[idx] = v
                else:
                    del out[idx]
        return TruncatedSeries._raw(self.vars, order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return series_invert(self) ** (-n)
        out = TruncatedSeries.constant(self.vars, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def homogeneous_parts(self) -> list:
        parts = [dict() for _ in range(self.order + 1)]
        for idx, c in self._coeffs.items():
            parts[sum(idx)][idx] = c
        return [TruncatedSeries._raw(self.vars, self.order, p) for p in parts]

    # -- substitution -----------------------------------------------------

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise OrderTooSmall(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.vars, order, self._coeffs)

    def with_vars(self, vars: Sequence[str], order: Optional[int] = None) -> "TruncatedSeries":
        """Re-embed into a larger (or reordered) variable set."""
        vars = tuple(vars)
        order = self.order if order is None else order
        pos = [_position(vars, v) for v in self.vars]
        out = {}
        for idx, c in self._coeffs.items():
            new = [0] * len(vars)
            for p, e in zip(pos, idx):
                new[p] = e
            out[tuple(new)] = c
        return TruncatedSeries(vars, order, out)

    def set_zero(self, var: str) -> "TruncatedSeries":
        """Substitute ``var = 0`` (the variable stays in the VarSet)."""
        j = _position(self.vars, var)
        return TruncatedSeries._raw(
            self.vars, self.order, {i: c for i, c in self._coeffs.items() if i[j] == 0}
        )

    def coefficient_in(self, var: str, e: int) -> "TruncatedSeries":
        """Coefficient of ``var**e``, as a series in the remaining variables.

        The variable is kept (with exponent 0) and the order is lowered by ``e``.
        """
        j = _position(self.vars, var)
        if e > self.order:
            return TruncatedSeries(self.vars, 0)
        out = {}
        for i, c in self._coeffs.items():
            if i[j] == e:
                out[i[:j] + (0,) + i[j + 1:]] = c
        return TruncatedSeries._raw(self.vars, self.order - e, out)

    def evaluate(self, point: Mapping[str, object]):
        """Sum the stored terms at a point; exact for rational inputs."""
        xs = [point[v] for v in self.vars]
        total = 0
        for idx, c in self._coeffs.items():
            term = c
            for x, e in zip(xs, idx):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    def map_powers(self, var: str, weight: Callable[[int], object]) -> "TruncatedSeries":
        """Replace ``var**e`` by the rational ``weight(e)`` in every term."""
        j = _position(self.vars, var)
        cache: dict = {}
        out: dict = {}
        for i, c in self._coeffs.items():
            e = i[j]
            if e not in cache:
                cache[e] = Fraction(weight(e))
            idx = i[:j] + (0,) + i[j + 1:]
            v = out.get(idx, 0) + c * cache[e]
            if v:
                out[idx] = v
            else:
                out.pop(idx, None)
        return TruncatedSeries._raw(self.vars, self.order, out)


def _position(vars: Sequence[str], name: str) -> int:
    try:
        return vars.index(name)
    except ValueError:
        raise UnknownVariable(f"{name!r} is not one of {tuple(vars)}") from None


# ---------------------------------------------------------------------------
# module-level operations


def series_add(s1: TruncatedSeries, s2) -> TruncatedSeries:
    return s1 + s2


def series_mul(s1: TruncatedSeries, s2) -> TruncatedSeries:
    return s1 * s2


def series_scale(s: TruncatedSeries, c) -> TruncatedSeries:
    return s.scale(c)


def coefficient(s: TruncatedSeries, idx: Sequence[int]) -> Fraction:
    return s.coeffs.get(tuple(idx), Fraction(0))


def series_invert(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to ``s.order``.

    Uses the degree-graded recurrence ``g_d = -(1/c0) sum_{k=1..d} s_k g_{d-k}``.
    """
    c0 = s.coeffs.get((0,) * len(s.vars), 0)
    if not c0:
        raise NonUnitConstantTerm("constant term is zero")
    inv0 = 1 / Fraction(c0)
    parts = s.homogeneous_parts()
    g = [TruncatedSeries.constant(s.vars, s.order, inv0)]
    for d in range(1, s.order + 1):
        acc = TruncatedSeries(s.vars, s.order)
        for k in range(1, d + 1):
            if parts[k].is_zero() or g[d - k].is_zero():
                continue
            acc = acc + parts[k] * g[d - k]
        g.append(acc.scale(-inv0))
    out = g[0]
    for part in g[1:]:
        out = out + part
    return out


def euler_pochhammer_series(coeff, var: str, q, order: int,
                            vars: Optional[Sequence[str]] = None) -> TruncatedSeries:
    """``(coeff * var; q)_inf`` expanded in ``var`` by Euler's formula.

    ``sum_n (-1)^n q^(n(n-1)/2) coeff^n var^n / (q;q)_n``.
    """
    vars = (var,) if vars is None else tuple(vars)
    j = _position(vars, var)
    coeff = Fraction(coeff)
    q = Fraction(q)
    out = {}
    term = Fraction(1)
    for n in range(order + 1):
        idx = [0] * len(vars)
        idx[j] = n
        out[tuple(idx)] = term
        den = 1 - q ** (n + 1)
        if den == 0:
            raise ZeroDenominator(f"(q;q)_{n + 1} vanishes")
        term = term * (-coeff) * q ** n / den
    return TruncatedSeries(vars, order, out)


def euler_pochhammer_inverse_series(coeff, var: str, q, order: int,
                                    vars: Optional[Sequence[str]] = None) -> TruncatedSeries:
    """``1/(coeff * var; q)_inf`` via its direct expansion ``sum coeff^n var^n/(q;q)_n``."""
    vars = (var,) if vars is None else tuple(vars)
    j = _position(vars, var)
    coeff = Fraction(coeff)
    q = Fraction(q)
    out = {}
    for n in range(order + 1):
        den = qpoch_finite(q, q, n)
        if den == 0:
            raise ZeroDenominator(f"(q;q)_{n} vanishes")
        idx = [0] * len(vars)
        idx[j] = n
        out[tuple(idx)] = coeff ** n / den
    return TruncatedSeries(vars, order, out)


def series_qshift(s: TruncatedSeries, var: str, q) -> TruncatedSeries:
    """Substitute ``var -> q * var``."""
    j = _position(s.vars, var)
    q = Fraction(q)
    return TruncatedSeries(s.vars, s.order,
                           {i: c * q ** i[j] for i, c in s.coeffs.items()})


def series_qpartial(s: TruncatedSeries, var: str, q) -> TruncatedSeries:
    """q-partial derivative ``(f - f|var->q var)/var``; the order drops by one."""
    j = _position(s.vars, var)
    if s.order < 1:
        raise OrderTooSmall("q-derivative of an order-0 series has no valid terms")
    q = Fraction(q)
    out = {}
    for i, c in s.coeffs.items():
        e = i[j]
        if e == 0:
            continue
        out[i[:j] + (e - 1,) + i[j + 1:]] = c * (1 - q ** e)
    return TruncatedSeries(s.vars, s.order - 1, out)


def series_sum(terms: Iterable[TruncatedSeries], vars, order) -> TruncatedSeries:
    out = TruncatedSeries(vars, order)
    for t in terms:
        out = out + t
    return out
