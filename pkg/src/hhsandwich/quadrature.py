"""Uniform partitions, composite midpoint/trapezoid sums and the two-sided
enclosure they give for convex (or concave) integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .funcspec import FunctionSpec, ShapeError
from .oracle import reference_integral

@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("interval endpoints must be finite")
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class UniformPartition:
    interval: Interval
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def of(cls, a: float, b: float, n: int) -> "UniformPartition":
        return cls(Interval(a, b), n)

    @property
    def a(self) -> float:
        return self.interval.a

    @property
    def b(self) -> float:
        return self.interval.b

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    def node(self, k: int) -> float:
        if not 0 <= k <= self.n:
            raise IndexError(k)
        # clamp the last node: a + n*h can overshoot b
        return self.b if k == self.n else self.a + k * self.h

    def midpoint(self, k: int) -> float:
        if not 1 <= k <= self.n:
            raise IndexError(k)
        return 0.5 * (self.node(k - 1) + self.node(k))

    def nodes(self) -> np.ndarray:
        x = self.a + np.arange(self.n + 1) * self.h
        x[-1] = self.b
        return x

    def midpoints(self) -> np.ndarray:
        x = self.nodes()
        return 0.5 * (x[:-1] + x[1:])


@dataclass(frozen=True)
class Enclosure:
    lower: float
    upper: float
    n_used: int
    orientation: str

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        if self.lower > self.upper + 1e-12 * (1.0 + abs(self.upper)):
            raise ValueError(f"inverted enclosure ({self.lower}, {self.upper})")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol


@dataclass(frozen=True)
class SecondDerivativeBound:
    sup_abs_f2: float

    def __post_init__(self):
        if not (math.isfinite(self.sup_abs_f2) and self.sup_abs_f2 >= 0):
            raise ValueError("sup|f''| must be finite and nonnegative")


class RuleEstimate(NamedTuple):
    value: float
    error_bound: float | None


class OstrowskiChain(NamedTuple):
    lhs_gap: float
    mid_gap: float
    rhs: float


def _ascending_sum(values: np.ndarray) -> float:
    # cumsum reduces strictly left to right
    return float(np.cumsum(values)[-1]) if len(values) else 0.0


def midpoint_sum(f: FunctionSpec, p: UniformPartition) -> float:
    return float(p.h * _ascending_sum(f.values(p.midpoints())))


def _trapezoid_bracket(f: FunctionSpec, p: UniformPartition) -> float:
    """f(a) + 2*sum of interior node values + f(b)."""
    vals = f.values(p.nodes())
    return float(vals[0] + 2.0 * _ascending_sum(vals[1:-1]) + vals[-1])


def trapezoid_sum(f: FunctionSpec, p: UniformPartition) -> float:
    return (p.h / 2.0) * _trapezoid_bracket(f, p)


def _orientation(f: FunctionSpec) -> str:
    if f.is_convex:
        return "convex"
    if f.is_concave:
        return "concave"
    raise ShapeError(f"{f.label}: declare the function convex or concave")


def hh_enclosure(f: FunctionSpec, p: UniformPartition) -> Enclosure:
    """Midpoint sum below, trapezoid sum above (swapped for concave f)."""
    orientation = _orientation(f)
    mid, trap = midpoint_sum(f, p), trapezoid_sum(f, p)
    if orientation == "convex":
        return Enclosure(mid, trap, p.n, orientation)
    return Enclosure(trap, mid, p.n, orientation)


def classical_hh(f: FunctionSpec, interval: Interval) -> Enclosure:
    orientation = _orientation(f)
    a, b = interval.a, interval.b
    fa, fm, fb = f.values(np.array([a, 0.5 * (a + b), b]))
    mid = (b - a) * fm
    trap = (b - a) / 2.0 * (fa + fb)
    if orientation == "convex":
        return Enclosure(mid, trap, 1, orientation)
    return Enclosure(trap, mid, 1, orientation)


def corollary_closed_form(f: FunctionSpec, interval: Interval, n: int) -> Enclosure:
    """The explicit one- to four-panel forms of the enclosure.

    Coefficients are the panel width over 2 on the trapezoid side; for n=4
    that is (b-a)/8.
    """
    orientation = _orientation(f)
    a, b = interval.a, interval.b
    L = b - a

    def F(*pts):
        return f.values(np.array(pts, dtype=float))

    if n == 1:
        lo = L * F((a + b) / 2)[0]
        fa, fb = F(a, b)
        hi = L / 2 * (fa + fb)
    elif n == 2:
        m1, m2 = F((3 * a + b) / 4, (a + 3 * b) / 4)
        lo = L / 2 * (m1 + m2)
        fa, fm, fb = F(a, (a + b) / 2, b)
        hi = L / 4 * (fa + 2 * fm + fb)
    elif n == 3:
        m1, m2, m3 = F((5 * a + b) / 6, (a + b) / 2, (a + 5 * b) / 6)
        lo = L / 3 * (m1 + m2 + m3)
        fa, f1, f2, fb = F(a, (2 * a + b) / 3, (a + 2 * b) / 3, b)
        hi = L / 6 * (fa + 2 * f1 + 2 * f2 + fb)
    elif n == 4:
        m1, m2, m3, m4 = F((7 * a + b) / 8, (5 * a + 3 * b) / 8, (3 * a + 5 * b) / 8, (a + 7 * b) / 8)
        lo = L / 4 * (m1 + m2 + m3 + m4)
        fa, f1, f2, f3, fb = F(a, (3 * a + b) / 4, (a + b) / 2, (a + 3 * b) / 4, b)
        hi = L / 8 * (fa + 2 * f1 + 2 * f2 + 2 * f3 + fb)
    else:
        raise ValueError(f"closed forms exist for n in 1..4, got {n}")
    if orientation == "convex":
        return Enclosure(float(lo), float(hi), n, orientation)
    return Enclosure(float(hi), float(lo), n, orientation)


def midpoint_error_bound(interval: Interval, d2: SecondDerivativeBound) -> float:
    return interval.length**3 / 24.0 * d2.sup_abs_f2


def trapezoid_error_bound(interval: Interval, d2: SecondDerivativeBound) -> float:
    return interval.length**3 / 12.0 * d2.sup_abs_f2


def composite_midpoint_bf(
    f: FunctionSpec, interval: Interval, n: int, d2: SecondDerivativeBound | None = None
) -> RuleEstimate:
    """Textbook composite midpoint rule with n+2 panels of width h.

    Nodes are x_j = a + (j+1)h, j = -1..n+1, and the rule uses the even
    ones: 2h * sum_{j=0}^{n/2} f(x_{2j}). ``n`` must be even.
    """
    if n < 0 or n % 2:
        raise ValueError("the composite midpoint rule needs an even n")
    a, b = interval.a, interval.b
    h = (b - a) / (n + 2)
    xs = a + (2 * np.arange(n // 2 + 1) + 1) * h
    value = 2 * h * _ascending_sum(f.values(xs))
    bound = None if d2 is None else (b - a) / 6.0 * h * h * d2.sup_abs_f2
    return RuleEstimate(float(value), bound)


def composite_trapezoid_bf(
    f: FunctionSpec, interval: Interval, n: int, d2: SecondDerivativeBound | None = None
) -> RuleEstimate:
    p = UniformPartition(interval, n)
    value = trapezoid_sum(f, p)
    bound = None if d2 is None else (interval.b - interval.a) / 12.0 * p.h**2 * d2.sup_abs_f2
    return RuleEstimate(float(value), bound)


def ostrowski_rearrangement(
    f: FunctionSpec, p: UniformPartition, integral: float | None = None
) -> OstrowskiChain:
    """Enclosure divided by h with the interior node values subtracted.

    Returns (sum f(mid) - sum f(x_k), integral/h - sum f(x_k), (f(a)+f(b))/2);
    for convex f the three are nondecreasing.
    """
    if not f.is_convex:
        raise ShapeError(f"{f.label}: the rearranged chain needs a convex function")
    if integral is None:
        integral = reference_integral(f, p.interval).value
    vals = f.values(p.nodes())
    interior = _ascending_sum(vals[1:-1])
    mids = _ascending_sum(f.values(p.midpoints()))
    return OstrowskiChain(
        float(mids - interior),
        float(integral / p.h - interior),
        float((vals[0] + vals[-1]) / 2.0),
    )
