"""Pointwise q-derivative, q-partial derivative and q-shift of black-box functions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import IndexOutOfRange, ZeroPoint


@dataclass(frozen=True)
class SampledFunction:
    """A deterministic function of ``arity`` scalars, evaluated one point at a time."""

    arity: int
    evaluator: Callable

    def __call__(self, *point):
        if len(point) != self.arity:
            raise IndexOutOfRange(f"expected {self.arity} coordinates, got {len(point)}")
        return self.evaluator(*point)


def _as_sampled(f, arity=1) -> SampledFunction:
    return f if isinstance(f, SampledFunction) else SampledFunction(arity, f)


def dq(f, x, q):
    """``(f(x) - f(qx)) / x``."""
    if x == 0:
        raise ZeroPoint("the q-derivative divides by x; x = 0 is excluded")
    f = _as_sampled(f)
    return (f(x) - f(q * x)) / x


def dq_iter(f, x, q, n: int):
    """``D_q^n f(x)`` from the samples ``f(x q^j)``, ``j = 0..n``.

    Level ``i`` holds ``D_q^i f`` at the grid points ``x q^j``; each level is
    one difference quotient of the previous one.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    f = _as_sampled(f)
    if n == 0:
        return f(x)
    grid = [x]
    for _ in range(n):
        grid.append(grid[-1] * q)
    if any(g == 0 for g in grid[:n]):
        raise ZeroPoint("the q-derivative grid reaches 0")
    vals = [f(g) for g in grid]
    for level in range(n):
        vals = [(vals[j] - vals[j + 1]) / grid[j] for j in range(n - level)]
    return vals[0]


def _check_index(f: SampledFunction, var_index: int, point: Sequence):
    if not 0 <= var_index < f.arity or len(point) != f.arity:
        raise IndexOutOfRange(f"coordinate {var_index} of an arity-{f.arity} function")


def eta(f, var_index: int, point: Sequence, q):
    """Evaluate ``f`` with coordinate ``var_index`` multiplied by ``q``."""
    f = _as_sampled(f, len(point))
    _check_index(f, var_index, point)
    p = list(point)
    p[var_index] = p[var_index] * q
    return f(*p)


def qpartial(f, var_index: int, point: Sequence, q):
    """q-derivative in one coordinate, the others held fixed."""
    f = _as_sampled(f, len(point))
    _check_index(f, var_index, point)
    x = point[var_index]
    if x == 0:
        raise ZeroPoint("the q-partial derivative divides by the coordinate")
    return (f(*point) - eta(f, var_index, point, q)) / x


def shifted(f, var_index: int, q) -> SampledFunction:
    """``eta_{var_index} f`` as a new SampledFunction (for composing operators)."""
    f = _as_sampled(f)
    return SampledFunction(f.arity, lambda *p: eta(f, var_index, p, q))


def partial(f, var_index: int, q) -> SampledFunction:
    """``partial_{q, var_index} f`` as a new SampledFunction."""
    f = _as_sampled(f)
    return SampledFunction(f.arity, lambda *p: qpartial(f, var_index, p, q))
