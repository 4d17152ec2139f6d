"""The per-panel interpolating maps H_j, F_j on [0, 1] and their sums H, F.

For a convex f and panel [x_{j-1}, x_j] with midpoint m_j:

    H_j(t) = (1/h) int f(t*u + (1-t)*m_j) du
    F_j(t) = (1/h) int [f((1+t)/2 x_{j-1} + (1-t)/2 u) + f((1+t)/2 x_j + (1-t)/2 u)] du

with u over the panel. ``halved=True`` multiplies F_j by 1/2, which is the
normalisation under which F_j(0) is the panel mean and F_j(1) the endpoint
average; ``halved=False`` keeps the formula above as written.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .funcspec import FunctionSpec, ShapeError
from .oracle import midpoint_rule, reference_integral
from .ostrowski import BoundReport
from .quadrature import UniformPartition

INNER_PANELS = 1 << 16
SWEEP_PANELS = 1 << 18


@dataclass(frozen=True)
class MapEvaluation:
    t: float
    value: float
    inner_quadrature_n: int
    kind: str  # H, F, Hj or Fj
    j: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must lie in [0, 1]")
        if self.inner_quadrature_n < 64:
            raise ValueError("inner quadrature needs at least 64 panels")


def _check(p: UniformPartition, j: int, t: float, inner_n: int) -> None:
    if not 1 <= j <= p.n:
        raise IndexError(f"panel index {j} outside 1..{p.n}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t={t} outside [0, 1]")
    if inner_n < 64:
        raise ValueError("inner quadrature needs at least 64 panels")


def eval_Hj(f: FunctionSpec, p: UniformPartition, j: int, t: float, inner_n: int = INNER_PANELS) -> float:
    _check(p, j, t, inner_n)
    lo, hi = p.node(j - 1), p.node(j)
    m = 0.5 * (lo + hi)
    integral = midpoint_rule(lambda u: f.values(t * u + (1.0 - t) * m), lo, hi, inner_n)
    return integral / p.h


def eval_Fj(
    f: FunctionSpec,
    p: UniformPartition,
    j: int,
    t: float,
    inner_n: int = INNER_PANELS,
    halved: bool = False,
) -> float:
    _check(p, j, t, inner_n)
    lo, hi = p.node(j - 1), p.node(j)
    s, r = (1.0 + t) / 2.0, (1.0 - t) / 2.0

    def integrand(u):
        return f.values(s * lo + r * u) + f.values(s * hi + r * u)

    value = midpoint_rule(integrand, lo, hi, inner_n) / p.h
    return 0.5 * value if halved else value


def eval_H(f: FunctionSpec, p: UniformPartition, t: float, inner_n: int = INNER_PANELS) -> float:
    return float(sum(eval_Hj(f, p, j, t, inner_n) for j in range(1, p.n + 1)))


def eval_F(
    f: FunctionSpec, p: UniformPartition, t: float, inner_n: int = INNER_PANELS, halved: bool = False
) -> float:
    return float(sum(eval_Fj(f, p, j, t, inner_n, halved) for j in range(1, p.n + 1)))


class MapSweep(NamedTuple):
    t: np.ndarray
    H: np.ndarray
    F: np.ndarray
    halved: bool


def sweep_maps(
    f: FunctionSpec,
    p: UniformPartition,
    steps: int,
    halved: bool = False,
    resolution: int = SWEEP_PANELS,
) -> MapSweep:
    """H and F on the grid t = r/steps, r = 0..steps, in one pass.

    Substituting v = t*u + (1-t)*m_j turns H_j(t) into the mean of f over
    [m_j - t*h/2, m_j + t*h/2]; F_j(t) likewise becomes a mean over the two
    end strips of width (1-t)*h/2. One table of cumulative midpoint
    integrals per panel, with cells aligned to the t-grid, serves every t.
    Each value is therefore an ordinary composite midpoint approximation of
    the defining integral, with cell width h/M fixed instead of per-t.
    """
    if steps < 1:
        raise ValueError("need at least one t step")
    M = 2 * steps * -(-resolution // (2 * steps))  # multiple of 2*steps
    cells_per_step = M // (2 * steps)
    r = np.arange(steps + 1)
    t = r / steps
    H = np.zeros(steps + 1)
    F = np.zeros(steps + 1)
    h = p.h
    for j in range(1, p.n + 1):
        lo, hi = p.node(j - 1), p.node(j)
        width = (hi - lo) / M
        cells = f.values(lo + (np.arange(M) + 0.5) * width) * width
        G = np.concatenate(([0.0], np.cumsum(cells)))
        half = M // 2
        reach = r * cells_per_step  # t*M/2 cells either side of the midpoint
        with np.errstate(divide="ignore", invalid="ignore"):
            Hj = (G[half + reach] - G[half - reach]) / (t * h)
            strip = (steps - r) * cells_per_step  # (1-t)*M/2 cells
            Fj = 2.0 * (G[strip] + G[M] - G[M - strip]) / ((1.0 - t) * h)
        ends = f.values(np.array([lo, 0.5 * (lo + hi), hi]))
        Hj[0] = ends[1]
        Fj[-1] = ends[0] + ends[2]
        H += Hj
        F += Fj
    if halved:
        F = 0.5 * F
    return MapSweep(t, H, F, halved)


def _monotone_report(name: str, values: np.ndarray, t: np.ndarray, n: int, tol: float) -> BoundReport:
    steps = values[1:] - values[:-1]
    i = int(np.argmin(steps))
    return BoundReport(
        f"{name}_monotone", float(values[i]), float(values[i + 1]), float(steps[i]), bool(steps[i] >= -tol), y=float(t[i]), n=n
    )


def _convex_report(
    name: str, fine: np.ndarray, t_fine: np.ndarray, pairs: np.ndarray, n: int, tol: float
) -> BoundReport:
    # fine holds values on the half-step grid; coarse index i sits at 2*i
    i, k = pairs[:, 0], pairs[:, 1]
    mid = fine[i + k]
    chord = 0.5 * (fine[2 * i] + fine[2 * k])
    slack = chord - mid
    w = int(np.argmin(slack))
    return BoundReport(
        f"{name}_convex", float(mid[w]), float(chord[w]), float(slack[w]), bool(slack[w] >= -tol), y=float(t_fine[i[w] + k[w]]), n=n
    )


def _identity_report(tag: str, got: float, expected: float, n: int, tol: float) -> BoundReport:
    gap = -abs(got - expected)
    return BoundReport(tag, float(got), float(expected), float(gap), bool(gap >= -tol), n=n)


def verify_map_properties(
    f: FunctionSpec,
    p: UniformPartition,
    t_grid: int = 101,
    tol: float = 1e-7,
    halved: bool = True,
    max_pairs: int = 5000,
    seed: int = 0,
    integral: float | None = None,
) -> list[BoundReport]:
    """Monotonicity, midpoint convexity in t, and the four endpoint identities.

    Convexity is tested on pairs (t_i, t_k) of the closed grid, at most
    ``max_pairs`` of them drawn with ``seed``. The identity for F(0) (and
    F(1)) only holds with ``halved=True``.
    """
    if t_grid < 3:
        raise ValueError("t grid needs at least 3 points")
    if not f.is_convex:
        raise ShapeError(f"{f.label}: map properties are stated for convex functions")
    steps = t_grid - 1
    sweep = sweep_maps(f, p, 2 * steps, halved)
    coarse = slice(None, None, 2)

    all_pairs = np.array([(i, k) for i in range(t_grid) for k in range(i + 1, t_grid)])
    if len(all_pairs) > max_pairs:
        rng = np.random.default_rng(seed)
        chosen = np.sort(rng.choice(len(all_pairs), size=max_pairs, replace=False))
        all_pairs = all_pairs[chosen]

    if integral is None:
        integral = reference_integral(f, p.interval).value
    vals = f.values(p.nodes())
    mids = f.values(p.midpoints())
    trap_half = 0.5 * (vals[0] + 2.0 * float(np.sum(vals[1:-1])) + vals[-1])
    mean = integral / p.h

    return [
        _monotone_report("H", sweep.H[coarse], sweep.t[coarse], p.n, tol),
        _convex_report("H", sweep.H, sweep.t, all_pairs, p.n, tol),
        _monotone_report("F", sweep.F[coarse], sweep.t[coarse], p.n, tol),
        _convex_report("F", sweep.F, sweep.t, all_pairs, p.n, tol),
        _identity_report("H0_midpoints", sweep.H[0], float(np.sum(mids)), p.n, tol),
        _identity_report("H1_mean", sweep.H[-1], mean, p.n, tol),
        _identity_report("F1_endpoints", sweep.F[-1], trap_half, p.n, tol),
        _identity_report("F0_mean", sweep.F[0], mean, p.n, tol),
    ]
