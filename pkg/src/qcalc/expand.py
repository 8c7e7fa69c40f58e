"""Expansion of series that satisfy the q-PDE system in products of Phi polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .errors import PdeNotSatisfied, UnknownVariable, VarSetMismatch, ZeroDenominator
from .fps import TruncatedSeries, series_qpartial, series_qshift
from .qcore import qpoch_finite
from .qfunc import PhiSpec, phi_series


@dataclass(frozen=True)
class PdePair:
    """One equation ``d_x (1 - b eta_y) f = d_y (1 - a eta_x) f``."""

    xvar: str
    yvar: str
    a: object = 0
    b: object = 0

    def __post_init__(self):
        if self.xvar == self.yvar:
            raise VarSetMismatch("a PDE pair needs two distinct variables")


@dataclass
class ExpansionResult:
    lambdas: Dict[Tuple[int, ...], Fraction] = field(default_factory=dict)
    order: int = 0


def pde_residual(f: TruncatedSeries, pair: PdePair, q) -> TruncatedSeries:
    """``d_x (f - b eta_y f) - d_y (f - a eta_x f)``, valid to order ``f.order - 1``."""
    for v in (pair.xvar, pair.yvar):
        if v not in f.vars:
            raise UnknownVariable(f"{v!r} is not one of {f.vars}")
    q = Fraction(q)
    lhs = series_qpartial(f - series_qshift(f, pair.yvar, q).scale(pair.b), pair.xvar, q)
    rhs = series_qpartial(f - series_qshift(f, pair.xvar, q).scale(pair.a), pair.yvar, q)
    return lhs - rhs


def _check_pairs(f: TruncatedSeries, pairs: Sequence[PdePair]):
    used = [v for p in pairs for v in (p.xvar, p.yvar)]
    if len(set(used)) != len(used):
        raise VarSetMismatch("PDE pairs must not share variables")
    missing = set(f.vars) - set(used)
    if missing:
        raise VarSetMismatch(f"variables {sorted(missing)} are not covered by any pair")
    for v in used:
        if v not in f.vars:
            raise UnknownVariable(f"{v!r} is not one of {f.vars}")


def extract_lambdas(f: TruncatedSeries, pairs: Sequence[PdePair], q) -> ExpansionResult:
    """Coefficients of ``f`` in the basis ``prod_j Phi_{n_j}^{(a_j,b_j)}(x_j, y_j|q)``.

    Pairs are peeled off in order: setting ``x_j = 0`` turns
    ``Phi_n(x_j, y_j)`` into ``(b_j;q)_n y_j^n``, so the coefficient series of
    ``Phi_n`` is the ``y_j^n`` coefficient divided by ``(b_j;q)_n``.
    """
    pairs = list(pairs)
    _check_pairs(f, pairs)
    q = Fraction(q)
    if f.order >= 1:
        for p in pairs:
            res = pde_residual(f, p, q)
            if not res.is_zero():
                raise PdeNotSatisfied(
                    f"residual of pair ({p.xvar},{p.yvar}) has {len(res)} nonzero terms",
                    residual=res, pair=p,
                )

    lambdas: Dict[Tuple[int, ...], Fraction] = {}

    def peel(g: TruncatedSeries, j: int, prefix: Tuple[int, ...]):
        if g.is_zero():
            return
        if j == len(pairs):
            c = g.coeffs.get((0,) * len(g.vars), Fraction(0))
            if c:
                lambdas[prefix] = c
            return
        p = pairs[j]
        g0 = g.set_zero(p.xvar)
        for n in range(g.order + 1):
            c = g0.coefficient_in(p.yvar, n)
            if c.is_zero():
                continue
            bn = qpoch_finite(Fraction(p.b), q, n)
            if bn == 0:
                raise ZeroDenominator(f"(b;q)_{n} vanishes for pair ({p.xvar},{p.yvar})")
            peel(c.scale(1 / bn), j + 1, prefix + (n,))

    peel(f, 0, ())
    return ExpansionResult(lambdas, f.order)


def reconstruct(res: ExpansionResult, pairs: Sequence[PdePair], q, order: int,
                vars: Sequence[str] = None) -> TruncatedSeries:
    """``sum lambda_n prod_j Phi_{n_j}^{(a_j,b_j)}(x_j, y_j|q)`` truncated at ``order``."""
    pairs = list(pairs)
    if vars is None:
        vars = tuple(v for p in pairs for v in (p.xvar, p.yvar))
    q = Fraction(q)
    cache: dict = {}

    def basis(j, n):
        key = (j, n)
        if key not in cache:
            p = pairs[j]
            cache[key] = phi_series(PhiSpec(n, p.a, p.b), p.xvar, p.yvar, q, order, vars)
        return cache[key]

    out = TruncatedSeries(vars, order)
    for idx, lam in sorted(res.lambdas.items()):
        if sum(idx) > order or not lam:
            continue
        term = TruncatedSeries.constant(vars, order, lam)
        for j, n in enumerate(idx):
            term = term * basis(j, n)
        out = out + term
    return out
