"""Cases, reports and the verification engine."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

import mpmath

from .. import __version__
from ..errors import ConstraintViolated, QCalcError
from ..fps import TruncatedSeries
from ..qcore import Certified, EvalContext, fraction_str
from .registry import Backend, get_identity

SCHEMA_VERSION = 1

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"

#: report fields that vary run to run and are ignored by golden comparisons
VOLATILE_FIELDS = ("timestamp", "wall_time_s")


@dataclass(frozen=True)
class IdentityCase:
    identity: str
    binding: dict
    backend: Backend = Backend.NUMERIC
    k: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None
    order: Optional[int] = None
    digits: int = 50
    tolerance: Optional[Fraction] = None
    seed: Optional[int] = None
    trial: Optional[int] = None
    check_constraints: bool = True

    def __post_init__(self):
        object.__setattr__(self, "backend", Backend(self.backend))
        object.__setattr__(self, "binding",
                           {k: Fraction(v) for k, v in self.binding.items()})

    def with_binding(self, binding: dict) -> "IdentityCase":
        return replace(self, binding=dict(binding))

    def settings(self) -> dict:
        out = {"k": self.k, "m": self.m, "n": self.n}
        if self.backend is Backend.EXACT_FPS:
            out["order"] = self.order
        else:
            out["digits"] = self.digits
        return out


@dataclass
class VerificationReport:
    case: IdentityCase
    outcome: str
    metric: dict = field(default_factory=dict)
    tail_bounds: dict = field(default_factory=dict)
    truncation: dict = field(default_factory=dict)
    anchors: tuple = ()
    cause: Optional[str] = None
    wall_time_s: float = 0.0
    timestamp: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    def to_dict(self, volatile: bool = True) -> dict:
        c = self.case
        out = {
            "schema_version": SCHEMA_VERSION,
            "identity_id": c.identity,
            "anchors": list(self.anchors),
            "binding": {k: fraction_str(v) for k, v in sorted(c.binding.items())},
            "settings": c.settings(),
            "backend": c.backend.value,
            "outcome": self.outcome,
            "metric": self.metric,
            "tail_bounds": self.tail_bounds,
            "truncation": self.truncation,
            "seed": c.seed,
            "trial": c.trial,
            "version": __version__,
        }
        if self.cause is not None:
            out["cause"] = self.cause
        if volatile:
            out["wall_time_s"] = round(self.wall_time_s, 3)
            out["timestamp"] = self.timestamp
        return out

    def to_json(self, volatile: bool = True) -> str:
        return json.dumps(self.to_dict(volatile), indent=2, sort_keys=True)


def _fmt(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 6) if x != 0 else "0"


def compare_series(lhs: TruncatedSeries, rhs: TruncatedSeries) -> dict:
    if lhs.vars != rhs.vars or lhs.order != rhs.order:
        raise ConstraintViolated("sides were built over different variables or orders")
    keys = sorted(set(lhs.coeffs) | set(rhs.coeffs), key=lambda e: (sum(e), e))
    bad = [k for k in keys if lhs.coeffs.get(k, 0) != rhs.coeffs.get(k, 0)]
    return {
        "mismatches": len(bad),
        "first_mismatch": list(bad[0]) if bad else None,
        "compared_terms": len(keys),
        "vars": list(lhs.vars),
        "order": lhs.order,
    }


def default_tolerance(identity, digits: int) -> Fraction:
    return Fraction(1, 10 ** (digits - identity.tolerance_offset))


def relative_difference(lhs: Certified, rhs: Certified, ctx: EvalContext):
    scale = max(abs(lhs.value), abs(rhs.value), ctx.floor)
    diff = abs(ctx.num(lhs.value) - ctx.num(rhs.value))
    return diff / scale, (lhs.error + rhs.error) / scale, scale


def verify(case: IdentityCase) -> VerificationReport:
    """Build both sides of a registered identity with the chosen backend and compare."""
    identity = get_identity(case.identity)
    if case.backend not in identity.backends:
        raise ConstraintViolated(
            f"{identity.id} supports {[b.value for b in identity.backends]}, not {case.backend.value}"
        )
    if case.check_constraints:
        identity.validate(case)
    report = VerificationReport(case, ERROR, anchors=identity.anchors)
    report.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    start = time.perf_counter()
    try:
        if case.backend is Backend.EXACT_FPS:
            lhs, rhs, extra = identity.exact(case)
            metric = compare_series(lhs, rhs)
            metric.update(extra)
            report.metric = metric
            report.truncation = {"order": lhs.order}
            report.outcome = PASS if metric["mismatches"] == 0 and not extra.get(
                "extra_mismatches", 0) else FAIL
        else:
            ctx = EvalContext(case.binding["q"], precision_digits=case.digits)
            lhs, rhs, trunc = identity.numeric(case, ctx)
            lhs, rhs = Certified.lift(lhs), Certified.lift(rhs)
            rel, bound, scale = relative_difference(lhs, rhs, ctx)
            tol = case.tolerance if case.tolerance is not None else default_tolerance(
                identity, case.digits)
            tol_mp = ctx.num(Fraction(tol))
            report.metric = {
                "max_rel_error": _fmt(rel),
                "tolerance": _fmt(tol_mp),
                "certified_bound": _fmt(bound),
                "lhs": mpmath.nstr(lhs.value, 20),
                "rhs": mpmath.nstr(rhs.value, 20),
            }
            report.tail_bounds = {
                "lhs": _fmt(lhs.error / scale),
                "rhs": _fmt(rhs.error / scale),
            }
            report.truncation = trunc
            report.outcome = PASS if rel <= tol_mp and bound <= tol_mp else FAIL
    except QCalcError as exc:
        report.outcome = ERROR
        report.cause = f"{type(exc).__name__}: {exc}"
    report.wall_time_s = time.perf_counter() - start
    return report
