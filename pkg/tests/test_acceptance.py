"""Acceptance criteria, one test per criterion (criterion 7 has two parts).

The terminal summary hook in conftest.py prints a pass/fail line per
criterion after the run.
"""

import math
import os
import subprocess
import sys
import time
from collections import Counter
from functools import lru_cache

import numpy as np
import pytest

from hhsandwich.funcspec import ConvexGeneratorConfig, FunctionSpec, generate_convex
from hhsandwich.oracle import reference_integral
from hhsandwich.ostrowski import EXPECTED_CONSTANTS, PROBES, sharpness_probe
from hhsandwich.quadrature import (
    Interval,
    SecondDerivativeBound,
    UniformPartition,
    classical_hh,
    composite_midpoint_bf,
    composite_trapezoid_bf,
    corollary_closed_form,
    hh_enclosure,
    midpoint_error_bound,
    midpoint_sum,
    trapezoid_error_bound,
    trapezoid_sum,
)
from hhsandwich.refine import RefinementPolicy, convergence_order, integrate_to_tolerance
from hhsandwich.suites import HH_NS, random_function, random_interval, run_suite

pytestmark = pytest.mark.acceptance

SEED = 42
UNIT = Interval(0.0, 1.0)


def _draws(count, seed, target="convex"):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        interval = random_interval(rng)
        yield random_function(rng, target, interval), interval


def _tally(reports):
    checked, failed, worst = Counter(), Counter(), {}
    for _, r in reports:
        checked[r.theorem_id] += 1
        if not r.holds:
            failed[r.theorem_id] += 1
            if r.theorem_id not in worst or r.slack < worst[r.theorem_id].slack:
                worst[r.theorem_id] = r
    return checked, failed, worst


def test_criterion_01_sandwich():
    start = time.perf_counter()
    checked = 0
    for f, interval in _draws(1000, SEED):
        exact = reference_integral(f, interval).value
        tol = 1e-9 * (1.0 + abs(exact))
        for n in HH_NS:
            p = UniformPartition(interval, n)
            lower, upper = midpoint_sum(f, p), trapezoid_sum(f, p)
            assert exact - lower >= -tol, (f.label, interval, n, lower, exact)
            assert upper - exact >= -tol, (f.label, interval, n, upper, exact)
            checked += 1
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {checked} instances in {elapsed:.1f}s")
    assert elapsed < 60.0


@pytest.mark.parametrize("n", [1, 2, 8, 64])
def test_criterion_02_sharpness(n):
    for tid in PROBES:
        r = sharpness_probe(tid, UNIT, n)
        assert abs(r.measured_constant - EXPECTED_CONSTANTS[tid]) <= 1e-12, (tid, n, r.measured_constant)


def test_criterion_03_single_panel():
    for f, interval in _draws(100, SEED + 3):
        a = hh_enclosure(f, UniformPartition(interval, 1))
        b = classical_hh(f, interval)
        assert (a.lower, a.upper) == (b.lower, b.upper), f.label


@pytest.mark.parametrize("n", [2, 3, 4])
def test_criterion_04_closed_forms(n):
    for f, interval in _draws(100, SEED + 4):
        enc = hh_enclosure(f, UniformPartition(interval, n))
        cf = corollary_closed_form(f, interval, n)
        for got, want in ((cf.lower, enc.lower), (cf.upper, enc.upper)):
            assert abs(got - want) <= 1e-12 * abs(want), (f.label, n, got, want)


def test_criterion_05_equality_fixtures():
    f = FunctionSpec.from_text("x^2", {"convex"})
    d2 = SecondDerivativeBound(2.0)
    exact = 1.0 / 3.0
    oracle = reference_integral(f, UNIT)
    assert abs(oracle.value - exact) <= 1e-10
    one = UniformPartition(UNIT, 1)
    cases = [
        ("midpoint", exact - midpoint_sum(f, one), midpoint_error_bound(UNIT, d2), 1 / 12),
        ("trapezoid", trapezoid_sum(f, one) - exact, trapezoid_error_bound(UNIT, d2), 1 / 6),
    ]
    mid = composite_midpoint_bf(f, UNIT, 2, d2)
    trap = composite_trapezoid_bf(f, UNIT, 2, d2)
    cases.append(("composite midpoint", exact - mid.value, mid.error_bound, 1 / 48))
    cases.append(("composite trapezoid", trap.value - exact, trap.error_bound, 1 / 24))
    for name, error, bound, value in cases:
        assert abs(error - value) <= 1e-12, name
        assert abs(bound - value) <= 1e-12, name


def test_criterion_06_maps():
    checked, failed, worst = _tally(run_suite("maps", 100, SEED, halved=True, t_steps=100))
    print(f"criterion 6: {dict(checked)}")
    assert set(checked) == {
        "H_monotone", "H_convex", "F_monotone", "F_convex",
        "H0_midpoints", "H1_mean", "F1_endpoints", "F0_mean",
    }
    assert not failed, {k: worst[k] for k in failed}


@lru_cache(maxsize=1)
def _ostrowski():
    return _tally(run_suite("ostrowski", 500, SEED))


def test_criterion_07_thm2_thm3_thm4():
    checked, failed, worst = _ostrowski()
    ids = ("thm2", "thm3", "thm4")
    print("criterion 7:", {k: (checked[k], failed[k]) for k in ids})
    assert all(checked[k] for k in ids)
    assert not any(failed[k] for k in ids), {k: worst[k] for k in ids if failed[k]}


def test_criterion_07_thm5():
    # expected red: for y past the midpoint the left member can drop below
    # the middle one (identity map, y = b gives 0 against (b-a)/4)
    checked, failed, worst = _ostrowski()
    print(f"criterion 7 thm5: {failed['thm5']} of {checked['thm5']} instances fail")
    assert checked["thm5"] == 500 * 4 * 33
    assert failed["thm5"] == 0, worst.get("thm5")


def test_criterion_08_convergence_order():
    f = FunctionSpec.from_text("exp(x)", {"convex"})
    _, trace = integrate_to_tolerance(f, UNIT, RefinementPolicy(abs_tol=1e-300, n_start=16, n_max=1024))
    assert [r.n for r in trace.rows] == [16, 32, 64, 128, 256, 512, 1024]
    order = convergence_order(trace)
    ratios = trace.widths[1:] / trace.widths[:-1]
    print(f"criterion 8: order {order:.4f}, ratios {np.round(ratios, 4).tolist()}")
    assert 1.9 <= order <= 2.1
    assert np.all((ratios >= 0.2) & (ratios <= 0.3))


def _hinge_mixtures():
    out = []
    for seed in range(3):
        cfg = ConvexGeneratorConfig(seed=seed, hinge_count_range=(2, 4), quadratic_coeff_range=(0.0, 0.0))
        out.append((generate_convex(cfg, UNIT), UNIT, None))
    text = "max(0, x - 0.3) + 2*max(0, 0.7 - x) + abs(x - 1/3)"
    exact = 0.5 * 0.7**2 + 0.7**2 + 0.5 * ((1 / 3) ** 2 + (2 / 3) ** 2)
    out.append((FunctionSpec.from_text(text, {"convex"}), UNIT, exact))
    return out


@pytest.mark.parametrize(
    "f, interval, exact",
    [
        (FunctionSpec.from_text("x^2", {"convex"}), UNIT, 1 / 3),
        (FunctionSpec.from_text("exp(x)", {"convex"}), UNIT, math.e - 1),
        *_hinge_mixtures(),
    ],
    ids=["square", "exp", "hinge0", "hinge1", "hinge2", "hinge_explicit"],
)
def test_criterion_09_adaptive(f, interval, exact):
    start = time.perf_counter()
    enc, trace = integrate_to_tolerance(f, interval, RefinementPolicy(abs_tol=1e-8))
    elapsed = time.perf_counter() - start
    if exact is None:
        exact = reference_integral(f, interval).value
    tol = 1e-12 * (1.0 + abs(exact))
    assert trace.status == "converged" and enc.width <= 1e-8
    assert enc.contains(exact, tol), (enc, exact)
    assert elapsed < 5.0


def test_criterion_10_determinism(tmp_path):
    argv = [sys.executable, "-m", "hhsandwich", "verify", "--suite", "all", "--trials", "200", "--seed", "42"]
    env = {k: v for k, v in os.environ.items() if k != "HH_SEED"}
    procs = []
    for k in range(2):
        out = open(tmp_path / f"run{k}.json", "wb")
        procs.append((subprocess.Popen(argv, stdout=out, env=env), out))
    for proc, out in procs:
        proc.wait(timeout=600)
        out.close()
    first, second = ((tmp_path / f"run{k}.json").read_bytes() for k in range(2))
    assert len(first) > 0
    assert first == second
