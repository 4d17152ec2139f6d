import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hhsandwich.funcspec import FunctionSpec, ShapeError
from hhsandwich.hhmaps import (
    MapEvaluation,
    eval_F,
    eval_Fj,
    eval_H,
    eval_Hj,
    sweep_maps,
    verify_map_properties,
)
from hhsandwich.quadrature import Interval, UniformPartition, midpoint_sum

from conftest import convex_function, intervals, seeds

SQ = FunctionSpec.from_text("x^2", {"convex"})
EXP = FunctionSpec.from_text("exp(x)", {"convex"})
ONE = UniformPartition.of(0.0, 1.0, 1)


def test_Hj_endpoints():
    p = UniformPartition.of(0.0, 2.0, 4)
    for j in (1, 3):
        assert eval_Hj(EXP, p, j, 0.0) == pytest.approx(float(np.exp(p.midpoint(j))), rel=1e-14)
        lo, hi = p.node(j - 1), p.node(j)
        assert eval_Hj(EXP, p, j, 1.0) == pytest.approx((np.exp(hi) - np.exp(lo)) / p.h, rel=1e-10)


def test_Hj_square_half():
    # int_0^1 (u/2 + 1/4)^2 du = 13/48
    assert eval_Hj(SQ, ONE, 1, 0.5) == pytest.approx(13 / 48, abs=1e-10)


def test_Fj_endpoints_verbatim_and_halved():
    p = UniformPartition.of(0.0, 2.0, 4)
    j = 2
    lo, hi = p.node(j - 1), p.node(j)
    ends = np.exp(lo) + np.exp(hi)
    assert eval_Fj(EXP, p, j, 1.0) == pytest.approx(ends, rel=1e-14)
    assert eval_Fj(EXP, p, j, 1.0, halved=True) == pytest.approx(ends / 2, rel=1e-14)
    mean = (np.exp(hi) - np.exp(lo)) / p.h
    assert eval_Fj(EXP, p, j, 0.0, halved=True) == pytest.approx(mean, rel=1e-10)
    assert eval_Fj(EXP, p, j, 0.0) == pytest.approx(2 * mean, rel=1e-10)


def test_F_square_at_zero_as_printed():
    # int_0^1 [(u/2)^2 + ((1+u)/2)^2] du = 1/12 + 7/12
    assert eval_Fj(SQ, ONE, 1, 0.0) == pytest.approx(2 / 3, abs=1e-10)
    assert eval_Fj(SQ, ONE, 1, 0.0, halved=True) == pytest.approx(1 / 3, abs=1e-10)


def test_sums_of_maps():
    p = UniformPartition.of(-1.0, 1.0, 3)
    assert eval_H(EXP, p, 0.0) == pytest.approx(midpoint_sum(EXP, p) / p.h, rel=1e-14)
    assert eval_H(EXP, p, 1.0) == pytest.approx((np.e - np.exp(-1)) / p.h, rel=1e-10)
    nodes = np.exp(p.nodes())
    assert eval_F(EXP, p, 1.0, halved=True) == pytest.approx(
        0.5 * (nodes[0] + 2 * nodes[1:-1].sum() + nodes[-1]), rel=1e-14
    )


def test_argument_checks():
    with pytest.raises(IndexError):
        eval_Hj(SQ, ONE, 2, 0.5)
    with pytest.raises(ValueError):
        eval_Hj(SQ, ONE, 1, 1.5)
    with pytest.raises(ValueError):
        eval_Fj(SQ, ONE, 1, 0.5, inner_n=32)
    with pytest.raises(ValueError):
        MapEvaluation(t=-0.1, value=0.0, inner_quadrature_n=64, kind="H")


@pytest.mark.parametrize("n", [1, 2, 4])
def test_sweep_agrees_with_direct_evaluation(n):
    f = convex_function(5, Interval(-1.0, 2.5), hinge_count_range=(2, 4))
    p = UniformPartition.of(-1.0, 2.5, n)
    sweep = sweep_maps(f, p, 8, halved=True)
    for t, H, F in zip(sweep.t, sweep.H, sweep.F):
        assert H == pytest.approx(eval_H(f, p, t), abs=1e-8)
        assert F == pytest.approx(eval_F(f, p, t, halved=True), abs=1e-8)


def test_affine_H_is_constant():
    f = FunctionSpec.from_text("3*x + 1", {"convex", "concave"})
    sweep = sweep_maps(f, UniformPartition.of(0.0, 2.0, 2), 10, halved=True)
    np.testing.assert_allclose(sweep.H, sweep.H[0], rtol=1e-12)
    np.testing.assert_allclose(sweep.F, sweep.F[0], rtol=1e-12)
    reports = {r.theorem_id: r for r in verify_map_properties(f, UniformPartition.of(0.0, 2.0, 2), 11)}
    assert reports["H_monotone"].holds and abs(reports["H_monotone"].slack) < 1e-12


def test_square_one_panel_bounds():
    sweep = sweep_maps(SQ, ONE, 4, halved=True)
    assert sweep.H[0] == 0.25 and sweep.H[-1] == pytest.approx(1 / 3, abs=1e-10)
    assert sweep.F[-1] == 0.5 and sweep.F[0] == pytest.approx(1 / 3, abs=1e-10)
    assert sweep.H[0] <= sweep.H[-1] and sweep.F[-1] >= sweep.F[0]


def test_verbatim_F_fails_its_identities():
    reports = {r.theorem_id: r for r in verify_map_properties(SQ, ONE, 11, halved=False)}
    assert not reports["F0_mean"].holds
    assert not reports["F1_endpoints"].holds
    # shape properties survive the factor of two
    assert reports["F_monotone"].holds and reports["F_convex"].holds


def test_needs_convex():
    with pytest.raises(ShapeError):
        verify_map_properties(FunctionSpec.from_text("x^2"), ONE)


@settings(max_examples=15)
@given(seeds, intervals(), st.sampled_from([1, 2, 4]))
def test_map_properties_hold_for_generated_convex(seed, interval, n):
    f = convex_function(seed, interval)
    reports = verify_map_properties(f, UniformPartition(interval, n), 101, tol=1e-7)
    failed = [r for r in reports if not r.holds]
    assert not failed, failed
    assert len(reports) == 8
