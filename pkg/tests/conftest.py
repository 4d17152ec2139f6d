import re

import pytest
from hypothesis import settings, strategies as st

from hhsandwich.funcspec import ConvexGeneratorConfig, generate_convex
from hhsandwich.quadrature import Interval

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def intervals(draw, max_length=5.0):
    a = draw(st.floats(-3.0, 3.0, allow_nan=False))
    length = draw(st.floats(0.1, max_length, allow_nan=False))
    return Interval(a, a + length)


def convex_function(seed, interval, target="convex", **kw):
    return generate_convex(ConvexGeneratorConfig(seed=seed, shape_target=target, **kw), interval)


@pytest.fixture
def unit():
    return Interval(0.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", getattr(rep, "nodeid", ""))
            if m and rep.when == "call" or (m and status == "error"):
                key = int(m.group(1))
                ok = status == "passed"
                prev = outcomes.get(key, (True, []))
                outcomes[key] = (prev[0] and ok, prev[1] + [f"{m.group(2)}={'PASS' if ok else 'FAIL'}"])
    if outcomes:
        terminalreporter.section("acceptance criteria")
        for key in sorted(outcomes):
            ok, parts = outcomes[key]
            terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  ({', '.join(parts)})")
