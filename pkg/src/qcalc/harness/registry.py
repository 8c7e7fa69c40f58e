"""Identity declarations: parameters, constraints, backends and settings."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import ConstraintViolated, EmptyDomain, UnknownIdentity


class Backend(str, Enum):
    EXACT_FPS = "fps"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Param:
    """A rational parameter; ``bound`` is the strict modulus bound used for sampling."""

    name: str
    bound: Fraction = Fraction(1)
    nonzero: bool = False
    positive: bool = False


@dataclass(frozen=True)
class Constraint:
    label: str
    check: Callable[[dict], bool]


@dataclass(frozen=True)
class Setting:
    """An integer index of a case (``k`` pairs, ``n`` degree, ``m`` shift)."""

    default: int
    lo: int
    hi: int


class Identity:
    """Base class of a registered identity; subclasses fill in the builders.

    ``exact(case)`` returns ``(lhs, rhs, extra)`` as TruncatedSeries;
    ``numeric(case, ctx)`` returns ``(lhs, rhs, truncation)`` as Certified values.
    """

    id: str = ""
    description: str = ""
    anchors: Tuple[str, ...] = ()
    backends: Tuple[Backend, ...] = ()
    #: NUMERIC tolerance is 10^-(digits - tolerance_offset)
    tolerance_offset: int = 20
    settings: Dict[str, Setting] = {}
    default_order: int = 12

    def params(self, case) -> List[Param]:
        raise NotImplementedError

    def constraints(self, case) -> List[Constraint]:
        return []

    def derive(self, binding: dict, case) -> dict:
        """Fill in parameters fixed by equality constraints."""
        return binding

    def exact(self, case):
        raise NotImplementedError

    def numeric(self, case, ctx):
        raise NotImplementedError

    # -- helpers shared by every identity --------------------------------

    def setting(self, case, name: str) -> int:
        value = getattr(case, name)
        s = self.settings[name]
        return s.default if value is None else value

    def validate(self, case):
        names = [p.name for p in self.params(case)]
        missing = [n for n in names if n not in case.binding]
        if missing:
            raise ConstraintViolated(f"{self.id}: missing parameters {missing}")
        extra = sorted(set(case.binding) - set(names))
        if extra:
            raise ConstraintViolated(f"{self.id}: unknown parameters {extra}")
        for name, s in self.settings.items():
            v = self.setting(case, name)
            if not s.lo <= v <= s.hi:
                raise ConstraintViolated(f"{self.id}: {name}={v} outside [{s.lo}, {s.hi}]")
        for p in self.params(case):
            if p.nonzero and case.binding[p.name] == 0:
                raise ConstraintViolated(f"{self.id}: {p.name} must be nonzero")
        for c in self.constraints(case):
            try:
                ok = c.check(case.binding)
            except ZeroDivisionError:
                ok = False
            if not ok:
                raise ConstraintViolated(f"{self.id}: constraint violated: {c.label}")


REGISTRY: Dict[str, Identity] = {}


def register(cls):
    inst = cls()
    if inst.id in REGISTRY:
        raise ValueError(f"duplicate identity id {inst.id}")
    REGISTRY[inst.id] = inst
    return cls


def get_identity(identity_id: str) -> Identity:
    from . import identities  # noqa: F401  (populates REGISTRY)

    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentity(identity_id) from None


def all_identities() -> List[Identity]:
    from . import identities  # noqa: F401

    return list(REGISTRY.values())


def modulus_lt(label: str, *exprs: Callable[[dict], Fraction], bound=1) -> Constraint:
    return Constraint(label, lambda b: max(abs(e(b)) for e in exprs) < bound)


def sample_binding(identity: Identity, case, rng, domain: Optional[dict] = None,
                   tries: int = 500) -> dict:
    """Draw ``p/d`` (``2 <= d <= 64``, ``|p| < d``) scaled into each parameter's bound.

    Dependent parameters come from ``identity.derive``; draws violating a
    constraint are rejected and redrawn.
    """
    domain = domain or {}
    params = identity.params(case)
    for _ in range(tries):
        binding = {}
        for p in params:
            bound = Fraction(domain.get(p.name, p.bound))
            if bound <= 0:
                raise EmptyDomain(f"{p.name}: modulus bound must be positive")
            while True:
                d = int(rng.integers(2, 65))
                lo = 1 if p.positive else -(d - 1)
                num = int(rng.integers(lo, d))
                if num or not (p.nonzero or p.positive):
                    break
            binding[p.name] = Fraction(num, d) * bound
        binding = identity.derive(binding, case)
        trial = case.with_binding(binding)
        try:
            identity.validate(trial)
        except ConstraintViolated:
            continue
        return binding
    raise EmptyDomain(f"{identity.id}: no admissible binding found in {tries} draws")


@dataclass
class Manifest:
    """The identity ids the registry must contain, one per verified result."""

    ids: Tuple[str, ...] = field(default=(
        "pde-phi",
        "expansion-roundtrip",
        "andrews-lauricella",
        "liu-lauricella",
        "genfun-shifted",
        "genfun-basic",
        "genfun-saalschutz",
        "alsalam-verma",
        "phi-qint-rep",
        "rs-qint-rep",
        "multilinear-qint",
        "multilinear-qint-m",
        "andrews-askey",
        "wang-moment",
        "liu-qint",
    ))
