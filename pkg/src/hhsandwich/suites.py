"""Seeded property suites behind ``hhsandwich verify``.

Each suite yields ``(trial, BoundReport)`` pairs in a fixed
(trial, function, n, y) order so reports are byte-reproducible.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .funcspec import ConvexGeneratorConfig, generate_convex
from .hhmaps import verify_map_properties
from .oracle import reference_integral
from .ostrowski import (
    BoundReport,
    WeightVector,
    thm2_bound,
    thm3_bound,
    thm4_bound,
    thm5_bound,
    weighted_point,
    weighted_thm3_bound,
    weighted_thm5_bound,
)
from .quadrature import Interval, UniformPartition, midpoint_sum, trapezoid_sum

SUITES = ("hh", "ostrowski", "maps")
HH_NS = (1, 2, 3, 4, 8, 16, 64)
OSTROWSKI_NS = (1, 2, 4, 8)
MAP_NS = (1, 2, 4)
Y_POINTS = 33
MAX_LENGTH = 5.0

_STREAMS = {"hh": 1, "ostrowski": 2, "maps": 3}


def trial_rng(seed: int, suite: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, _STREAMS[suite], trial])


def random_interval(rng: np.random.Generator) -> Interval:
    a = float(rng.uniform(-3.0, 3.0))
    return Interval(a, a + float(rng.uniform(0.1, MAX_LENGTH)))


def random_function(rng: np.random.Generator, target: str, interval: Interval):
    seed = int(rng.integers(0, 2**63))
    return generate_convex(ConvexGeneratorConfig(seed=seed, shape_target=target), interval)


def hh_suite(trials: int, seed: int) -> Iterator[tuple[int, BoundReport]]:
    for trial in range(trials):
        rng = trial_rng(seed, "hh", trial)
        interval = random_interval(rng)
        f = random_function(rng, "convex", interval)
        exact = reference_integral(f, interval).value
        tol = 1e-9 * (1.0 + abs(exact))
        for n in HH_NS:
            p = UniformPartition(interval, n)
            lower, upper = midpoint_sum(f, p), trapezoid_sum(f, p)
            yield trial, BoundReport("hh_left", lower, exact, exact - lower, exact - lower >= -tol, n=n)
            yield trial, BoundReport("hh_right", exact, upper, upper - exact, upper - exact >= -tol, n=n)


def ostrowski_suite(trials: int, seed: int, unscaled: bool = False) -> Iterator[tuple[int, BoundReport]]:
    """thm2-thm4 on positive convex draws, thm5 on increasing ones,
    plus both weighted-point corollaries. Weighted points that land outside
    [a, b] (possible in the scaled mode) are skipped."""
    for trial in range(trials):
        rng = trial_rng(seed, "ostrowski", trial)
        interval = random_interval(rng)
        f = random_function(rng, "positive_convex", interval)
        g = random_function(rng, "increasing_positive_convex", interval)
        f_int = reference_integral(f, interval).value
        g_int = reference_integral(g, interval).value
        ys = np.linspace(interval.a, interval.b, Y_POINTS)
        for n in OSTROWSKI_NS:
            p = UniformPartition(interval, n)
            for y in ys:
                yield trial, thm2_bound(f, p, y, f_int)
                yield trial, thm3_bound(f, p, y, f_int)
            yield trial, thm4_bound(f, p, f_int)
            w = WeightVector(tuple(_dirichlet(rng, n + 1)))
            if interval.a <= weighted_point(p, w, unscaled) <= interval.b:
                yield trial, weighted_thm3_bound(f, p, w, f_int, unscaled)
        for n in OSTROWSKI_NS:
            p = UniformPartition(interval, n)
            for y in ys:
                yield trial, thm5_bound(g, p, y, g_int)
            w = WeightVector(tuple(_dirichlet(rng, n + 1)))
            if interval.a <= weighted_point(p, w, unscaled) <= interval.b:
                yield trial, weighted_thm5_bound(g, p, w, g_int, unscaled)


def _dirichlet(rng: np.random.Generator, k: int) -> list[float]:
    w = rng.dirichlet(np.ones(k))
    w[-1] = 1.0 - float(np.sum(w[:-1]))
    return [max(0.0, float(v)) for v in w]


def maps_suite(trials: int, seed: int, halved: bool = True, t_steps: int = 100) -> Iterator[tuple[int, BoundReport]]:
    for trial in range(trials):
        rng = trial_rng(seed, "maps", trial)
        interval = random_interval(rng)
        f = random_function(rng, "convex", interval)
        exact = reference_integral(f, interval).value
        for n in MAP_NS:
            p = UniformPartition(interval, n)
            for report in verify_map_properties(f, p, t_steps + 1, halved=halved, seed=trial, integral=exact):
                yield trial, report


def run_suite(name: str, trials: int, seed: int, halved: bool = True, unscaled: bool = False, t_steps: int = 100):
    if name == "hh":
        return hh_suite(trials, seed)
    if name == "ostrowski":
        return ostrowski_suite(trials, seed, unscaled)
    if name == "maps":
        return maps_suite(trials, seed, halved, t_steps)
    raise ValueError(f"unknown suite {name!r}")
