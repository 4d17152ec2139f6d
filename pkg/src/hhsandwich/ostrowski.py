"""Ostrowski-type bounds built on the composite sandwich, their weighted-point
variants, and the identity-map sharpness probes.

Every bound takes the exact integral as an argument; callers normally pass
the oracle value so verdicts do not inherit enclosure slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .funcspec import Const, FunctionSpec, ShapeError, Var, BinOp
from .quadrature import Interval, UniformPartition, midpoint_sum, _trapezoid_bracket

PROBES = ("thm1_left", "thm1_right", "thm2", "thm5")
EXPECTED_CONSTANTS = {"thm1_left": 1.0, "thm1_right": 0.5, "thm2": 0.5, "thm5": 0.5}
SHARPNESS_TOL = 1e-12


def verdict_tol(rhs: float) -> float:
    return 1e-9 * (1.0 + abs(rhs))


@dataclass(frozen=True)
class BoundReport:
    """One inequality instance. ``slack >= 0`` means the inequality holds
    exactly; ``holds`` applies the tolerance."""

    theorem_id: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    y: float | None = None
    n: int = 1

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "n": self.n,
            "y": self.y,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class EvaluationPoint:
    y: float
    interval: Interval

    def __post_init__(self):
        if not self.interval.a <= self.y <= self.interval.b:
            raise ValueError(f"y={self.y} outside [{self.interval.a}, {self.interval.b}]")


@dataclass(frozen=True)
class WeightVector:
    alphas: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if any(a < 0 for a in alphas):
            raise ValueError("weights must be nonnegative")
        if abs(math.fsum(alphas) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        object.__setattr__(self, "alphas", alphas)


@dataclass(frozen=True)
class SharpnessResult:
    theorem_id: str
    fixture: str
    measured_constant: float
    paper_constant: float

    @property
    def passed(self) -> bool:
        return abs(self.measured_constant - self.paper_constant) <= SHARPNESS_TOL


def _point(p: UniformPartition, y) -> float:
    if isinstance(y, EvaluationPoint):
        y = y.y
    y = float(y)
    if not p.a <= y <= p.b:
        raise ValueError(f"y={y} outside [{p.a}, {p.b}]")
    return y


def _mirrored(f: FunctionSpec, need: set) -> bool:
    """False for the stated (convex) case, True for the concave mirror."""
    if need <= f.declared_shape:
        return False
    if f.is_concave and not f.is_convex:
        return True
    missing = sorted(need - f.declared_shape)
    raise ShapeError(f"{f.label}: bound requires {sorted(need)}, missing {missing}")


def _report(tag, lhs, rhs, p, y, mirrored) -> BoundReport:
    slack = (lhs - rhs) if mirrored else (rhs - lhs)
    return BoundReport(tag, float(lhs), float(rhs), float(slack), bool(slack >= -verdict_tol(rhs)), y, p.n)


def thm2_bound(f: FunctionSpec, p: UniformPartition, y, integral: float) -> BoundReport:
    """integral - (b-a) f(y)  <=  (h/2) [f(a) + 2 sum f(x_k) + f(b)]."""
    mirrored = _mirrored(f, {"positive", "convex"})
    y = _point(p, y)
    lhs = integral - (p.b - p.a) * f(y)
    rhs = p.h / 2.0 * _trapezoid_bracket(f, p)
    return _report("thm2", lhs, rhs, p, y, mirrored)


def thm3_bound(f: FunctionSpec, p: UniformPartition, y, integral: float) -> BoundReport:
    """Same left side; right side [h/2 + max_j |y - m_j|] [f(a) + 2 sum f(x_k) + f(b)]."""
    mirrored = _mirrored(f, {"positive", "convex"})
    y = _point(p, y)
    lhs = integral - (p.b - p.a) * f(y)
    spread = float(np.max(np.abs(y - p.midpoints())))
    rhs = (p.h / 2.0 + spread) * _trapezoid_bracket(f, p)
    return _report("thm3", lhs, rhs, p, y, mirrored)


def thm4_bound(f: FunctionSpec, p: UniformPartition, integral: float) -> BoundReport:
    mirrored = _mirrored(f, {"positive", "convex"})
    n = p.n
    nodes = f.values(p.nodes())
    mids = f.values(p.midpoints())
    lhs = integral / (p.b - p.a) - float(np.sum(mids)) / n - float(np.sum(nodes[1:-1])) / n
    # printed as (f(a) + + f(b))/(2n); read as (f(a) + f(b))/(2n)
    rhs = (nodes[0] + nodes[-1]) / (2.0 * n)
    return _report("thm4", lhs, rhs, p, None, mirrored)


def thm5_bound(f: FunctionSpec, p: UniformPartition, y, integral: float) -> BoundReport:
    """Chain integral - ((b-a)/2) f(y) >= (h/2) sum f(m_j) >= 0.

    Reported with lhs = the left member, rhs = the middle member and
    slack = lhs - rhs; ``holds`` also requires the middle member to be
    nonnegative.
    """
    need = {"increasing", "positive", "convex"}
    if not need <= f.declared_shape:
        raise ShapeError(f"{f.label}: bound requires {sorted(need)}")
    y = _point(p, y)
    lhs = integral - (p.b - p.a) / 2.0 * f(y)
    mid = midpoint_sum(f, p) / 2.0
    slack = lhs - mid
    tol = verdict_tol(mid)
    return BoundReport("thm5", float(lhs), float(mid), float(slack), bool(slack >= -tol and mid >= -tol), y, p.n)


def weighted_point(p: UniformPartition, w: WeightVector, unscaled: bool = False) -> float:
    """(1/(n+1)) sum alpha_i x_i, or sum alpha_i x_i with ``unscaled``."""
    if len(w.alphas) != p.n + 1:
        raise ValueError(f"need {p.n + 1} weights, got {len(w.alphas)}")
    total = math.fsum(a * x for a, x in zip(w.alphas, p.nodes()))
    return total if unscaled else total / (p.n + 1)


def weighted_thm3_bound(f, p, w: WeightVector, integral: float, unscaled: bool = False) -> BoundReport:
    r = thm3_bound(f, p, weighted_point(p, w, unscaled), integral)
    return BoundReport("cor_thm3_weighted", r.lhs, r.rhs, r.slack, r.holds, r.y, r.n)


def weighted_thm5_bound(f, p, w: WeightVector, integral: float, unscaled: bool = False) -> BoundReport:
    r = thm5_bound(f, p, weighted_point(p, w, unscaled), integral)
    return BoundReport("cor_thm5_weighted", r.lhs, r.rhs, r.slack, r.holds, r.y, r.n)


def identity_fixture(interval: Interval) -> FunctionSpec:
    """The identity map carried to [a, b]: f(x) = (x - a)/(b - a).

    On [0, 1] this is literally f(x) = x.
    """
    a, b = interval.a, interval.b
    if (a, b) == (0.0, 1.0):
        body = Var()
    else:
        body = BinOp("/", BinOp("-", Var(), Const(a)), Const(b - a))
    return FunctionSpec(body, frozenset({"convex", "concave", "increasing"}), "identity")


def sharpness_probe(theorem_id: str, interval: Interval, n: int) -> SharpnessResult:
    """Solve for the constant that makes the bound tight on the identity fixture.

    The fixture integral is (b-a)/2 in closed form.
    """
    if theorem_id not in PROBES:
        raise ValueError(f"unknown theorem id {theorem_id!r}; expected one of {PROBES}")
    f = identity_fixture(interval)
    p = UniformPartition(interval, n)
    L = interval.b - interval.a
    integral = L / 2.0
    bracket = p.h * _trapezoid_bracket(f, p)
    if theorem_id == "thm1_left":
        c = integral / midpoint_sum(f, p)
    elif theorem_id == "thm1_right":
        c = integral / bracket
    elif theorem_id == "thm2":
        c = (integral - L * f(interval.a)) / bracket
    else:
        c = (integral - L / 2.0 * f(0.5 * (interval.a + interval.b))) / midpoint_sum(f, p)
    return SharpnessResult(theorem_id, "identity", float(c), EXPECTED_CONSTANTS[theorem_id])
