import math
import sys

import pytest
from hypothesis import strategies as st

from squeezed_otto import CycleConfig


def cosh_series(z, terms=40):
    """cosh by its Taylor series; independent of math.cosh."""
    total, term = 0.0, 1.0
    for k in range(terms):
        total += term
        term *= z * z / ((2 * k + 1) * (2 * k + 2))
    return total


temperatures = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)
squeezes = st.floats(min_value=0.0, max_value=2.0, allow_nan=False)
ratios = st.floats(min_value=1e-3, max_value=0.999, allow_nan=False)


@st.composite
def configs(draw):
    tc, th = draw(temperatures), draw(temperatures)
    rc, rh = draw(squeezes), draw(squeezes)
    wh = draw(st.floats(min_value=1e-2, max_value=1e2))
    x = draw(ratios)
    return CycleConfig.from_values(tc, th, rc, rh, x * wh, wh)


def random_feasible(rng, n, tau=(0.05, 0.99), r=(0.0, 1.5)):
    """n configs with T_h = 1 and 0 < b/a < 1, drawn from ``rng`` (random.Random)."""
    out = []
    while len(out) < n:
        cfg = CycleConfig.from_values(rng.uniform(*tau), 1.0, rng.uniform(*r), rng.uniform(*r))
        if cfg.feasibility_ratio < 1.0:
            out.append(cfg)
    return out


@pytest.fixture
def classical():
    """T_c/T_h = 0.25, no squeezing, omega_c/omega_h = 0.5."""
    return CycleConfig.from_values(0.25, 1.0, 0.0, 0.0, 1.0, 2.0)


def close(a, b, rel=1e-12, abs_=0.0):
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
