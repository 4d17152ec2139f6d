"""Brute-force reference integrator.

Deliberately shares no code with :mod:`hhsandwich.quadrature`: points are
generated here and sums are exactly rounded with ``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

CHUNK = 1 << 15


class OracleError(ArithmeticError):
    """The resolution-doubling check failed (pathological integrand)."""


@dataclass(frozen=True)
class OracleConfig:
    panels: int = 1 << 16

    def __post_init__(self):
        p = self.panels
        if p < 1024 or p & (p - 1):
            raise ValueError("oracle panels must be a power of two and at least 1024")


class OracleResult(NamedTuple):
    value: float
    uncertainty: float


def midpoint_rule(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, panels: int) -> float:
    """Composite midpoint rule with ``panels`` equal panels on [lo, hi].

    ``fn`` must accept an array of abscissae. Chunk sums are reduced in
    chunk order so the result does not depend on memory layout.
    """
    width = (hi - lo) / panels
    partial = []
    for start in range(0, panels, CHUNK):
        idx = np.arange(start, min(start + CHUNK, panels), dtype=float)
        partial.append(math.fsum(fn(lo + (idx + 0.5) * width)))
    return math.fsum(partial) * width


def reference_integral(f, interval, config: OracleConfig | None = None, check: bool = True) -> OracleResult:
    config = config or OracleConfig()
    a, b = float(interval.a), float(interval.b)
    value = midpoint_rule(f.values, a, b, config.panels)
    finer = midpoint_rule(f.values, a, b, 2 * config.panels)
    uncertainty = abs(value - finer)
    if check and uncertainty > 1e-9 * (1.0 + abs(value)):
        raise OracleError(
            f"oracle uncertainty {uncertainty:.3e} too large for {f.label} on [{a}, {b}]"
        )
    return OracleResult(value, uncertainty)
