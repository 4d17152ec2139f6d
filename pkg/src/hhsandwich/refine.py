"""Grow n until the sandwich bracket is narrow enough; measure the rate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .funcspec import FunctionSpec
from .quadrature import Enclosure, Interval, UniformPartition, hh_enclosure


@dataclass(frozen=True)
class RefinementPolicy:
    abs_tol: float = 1e-8
    rel_tol: float = 0.0
    n_start: int = 1
    growth: int = 2
    n_max: int = 1 << 20

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be nonnegative")
        if int(self.growth) != self.growth or self.growth < 2:
            raise ValueError("growth must be an integer >= 2")
        if self.n_start < 1 or self.n_max < 1:
            raise ValueError("n_start and n_max must be positive")


class TraceRow(NamedTuple):
    n: int
    lower: float
    upper: float
    width: float


@dataclass
class ConvergenceTrace:
    rows: list = field(default_factory=list)
    status: str = "running"

    @property
    def widths(self) -> np.ndarray:
        return np.array([r.width for r in self.rows])


def integrate_to_tolerance(
    f: FunctionSpec, interval: Interval, policy: RefinementPolicy | None = None
) -> tuple[Enclosure, ConvergenceTrace]:
    policy = policy or RefinementPolicy()
    trace = ConvergenceTrace()
    n = policy.n_start
    enclosure = None
    while n <= policy.n_max:
        enclosure = hh_enclosure(f, UniformPartition(interval, n))
        trace.rows.append(TraceRow(n, enclosure.lower, enclosure.upper, enclosure.width))
        centre = 0.5 * (enclosure.lower + enclosure.upper)
        if enclosure.width <= policy.abs_tol + policy.rel_tol * abs(centre):
            trace.status = "converged"
            return enclosure, trace
        n *= policy.growth
    if enclosure is None:
        raise ValueError("n_start exceeds n_max")
    trace.status = "n_max_reached"
    return enclosure, trace


def convergence_order(trace: ConvergenceTrace) -> float:
    """Least-squares slope of log(width) against log(1/n).

    Returns ``math.inf`` when every width is zero (affine integrands are
    integrated exactly at any n).
    """
    if len(trace.rows) < 3:
        raise ValueError("need at least 3 trace rows")
    widths = trace.widths
    if np.all(widths <= 0):
        return math.inf
    if np.any(widths <= 0):
        raise ValueError("mixed zero and nonzero widths")
    n = np.array([r.n for r in trace.rows], dtype=float)
    slope, _ = np.polyfit(np.log(1.0 / n), np.log(widths), 1)
    return float(slope)
