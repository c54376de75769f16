import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_feasible
from squeezed_otto import (
    ConvergenceError,
    CycleConfig,
    DomainError,
    Enhancement,
    InfeasibleError,
    MaximizerSettings,
    Method,
    ca_cop,
    ca_efficiency,
    classify_enhancement,
    engine_metrics,
    engine_optimum_closed,
    engine_optimum_numeric,
    fridge_metrics,
    fridge_optimum_closed,
    fridge_optimum_numeric,
    golden_section_maximize,
    operating_window,
)
from squeezed_otto.cycle import Mode, chi_at_ratio, work_at_ratio

# values recomputed with mpmath at 30 digits
ETA_MP_05_1 = 0.679783560695036      # tau 0.25, r_c 0.5, r_h 1
RATIO_MP_05_1 = 0.320216439304964
ETA_MP_SINGLE = 0.359567121390072    # tau 1, r_c 0.5, r_h 1
EPS_MCHI_05_025 = 0.779529938900981  # tau 0.5, r_c 0.5, r_h 0.25


def grid_argmax(f, lo, hi, n=1_000_001):
    """Brute-force oracle: argmax of a vectorized f on an n-point grid."""
    xs = np.linspace(lo, hi, n)
    return xs[np.argmax(f(xs))], (hi - lo) / (n - 1)


@pytest.mark.parametrize("tau, expected", [(1.0, 0.0), (0.25, 0.5), (0.81, 0.1)])
def test_ca_efficiency(tau, expected):
    assert ca_efficiency(tau) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("tau, expected", [(0.75, 1.0), (1e-12, 0.0), (0.5, math.sqrt(2) - 1)])
def test_ca_cop(tau, expected):
    assert ca_cop(tau) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("tau", [0.0, -0.5, 1.5])
def test_ca_efficiency_domain(tau):
    with pytest.raises(DomainError):
        ca_efficiency(tau)


@pytest.mark.parametrize("tau", [0.0, 1.0, 2.0])
def test_ca_cop_domain(tau):
    with pytest.raises(DomainError):
        ca_cop(tau)


class TestGoldenSection:
    def test_parabola(self):
        x, fx, it = golden_section_maximize(lambda x: -(x - 0.3) ** 2, 0.0, 1.0)
        assert abs(x - 0.3) <= 1e-8  # float objective: flat top limits accuracy to ~sqrt(eps)
        assert fx == -(x - 0.3) ** 2
        assert 0 < it <= 200

    def test_exact_objective_reaches_tol(self):
        target = Fraction(3, 10)
        x, _, _ = golden_section_maximize(lambda x: -(Fraction(x) - target) ** 2, 0.0, 1.0)
        assert abs(x - 0.3) <= 1e-10

    def test_classical_work(self):
        a, b, d = 1.0, 0.25, 1e-9
        x, _, _ = golden_section_maximize(lambda x: work_at_ratio(a, b, x), 0.25 + d, 1 - d)
        assert x == pytest.approx(0.5, abs=1e-8)

    def test_chi_against_dense_grid(self):
        a, b = 1.0, 0.75
        x, _, _ = golden_section_maximize(lambda x: chi_at_ratio(a, b, x), 1e-9, 1 - 1e-9)
        x_grid, h = grid_argmax(lambda xs: xs * (b - a * xs) / (1 - xs), 1e-9, 1 - 1e-9)
        assert abs(x_grid - 0.5) <= h
        assert x == pytest.approx(0.5, abs=1e-7)

    def test_rejects_empty_bracket(self):
        with pytest.raises(DomainError):
            golden_section_maximize(lambda x: x, 1.0, 1.0)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError):
            golden_section_maximize(lambda x: -x * x, -1.0, 1.0, MaximizerSettings(max_iters=5))

    def test_monotone_function_goes_to_edge(self):
        x, _, _ = golden_section_maximize(lambda x: x, 0.0, 1.0)
        assert x == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("kwargs", [dict(tol=0.0), dict(max_iters=0), dict(bracket_margin=0.5),
                                    dict(bracket_margin=0.0), dict(max_iters=2.5)])
def test_settings_validation(kwargs):
    with pytest.raises(DomainError):
        MaximizerSettings(**kwargs)


def test_settings_defaults():
    s = MaximizerSettings()
    assert (s.tol, s.max_iters, s.bracket_margin) == (1e-10, 200, 1e-9)


class TestEngineOptimum:
    @pytest.mark.parametrize("r", [0.0, 0.3, 1.0, 2.0])
    def test_symmetric_gives_ca(self, r):
        res = engine_optimum_closed(CycleConfig.from_values(0.25, 1.0, r, r))
        assert res.merit == pytest.approx(0.5, abs=1e-12)
        assert res.method is Method.CLOSED_FORM and res.iterations == 0

    def test_asymmetric_value(self):
        res = engine_optimum_closed(CycleConfig.from_values(0.25, 1.0, 0.5, 1.0))
        assert res.ratio_star == pytest.approx(RATIO_MP_05_1, abs=1e-12)
        assert res.merit == pytest.approx(ETA_MP_05_1, abs=1e-12)

    def test_single_reservoir_positive_merit(self):
        res = engine_optimum_closed(CycleConfig.from_values(1.0, 1.0, 0.5, 1.0))
        assert res.merit == pytest.approx(ETA_MP_SINGLE, abs=1e-12)
        assert res.objective > 0

    def test_objective_is_cycle_work_at_optimum(self):
        cfg = CycleConfig.from_values(0.25, 1.0, 0.5, 1.0)
        res = engine_optimum_closed(cfg)
        assert res.objective == engine_metrics(cfg.with_ratio(res.ratio_star)).w_total

    def test_closed_form_against_dense_grid(self):
        cfg = CycleConfig.from_values(0.25, 1.0, 0.5, 1.0)
        a, b = cfg.hot_weight, cfg.cold_weight
        x_grid, h = grid_argmax(lambda xs: (1 - xs) * (a - b / xs), 1e-6, 1 - 1e-6)
        assert abs(engine_optimum_closed(cfg).ratio_star - x_grid) <= h

    @pytest.mark.parametrize("values, field, expected", [
        ((0.25, 1.0, 0.0, 0.0), "ratio_star", 0.5),
        ((0.25, 1.0, 0.5, 1.0), "ratio_star", RATIO_MP_05_1),
        ((1.0, 1.0, 0.5, 1.0), "merit", ETA_MP_SINGLE),
    ])
    def test_numeric(self, values, field, expected):
        res = engine_optimum_numeric(CycleConfig.from_values(*values))
        assert getattr(res, field) == pytest.approx(expected, abs=1e-8)
        assert res.method is Method.NUMERIC and res.iterations > 0

    def test_infeasible(self):
        cfg = CycleConfig.from_values(0.75, 1.0, 0.5, 0.25)
        with pytest.raises(InfeasibleError):
            engine_optimum_closed(cfg)
        with pytest.raises(InfeasibleError):
            engine_optimum_numeric(cfg)

    def test_degenerate_equal_weights_is_infeasible(self):
        with pytest.raises(InfeasibleError):
            engine_optimum_closed(CycleConfig.from_values(1.0, 1.0, 0.4, 0.4))


class TestFridgeOptimum:
    @pytest.mark.parametrize("r", [0.0, 0.3, 1.2])
    def test_symmetric_gives_ca(self, r):
        res = fridge_optimum_closed(CycleConfig.from_values(0.75, 1.0, r, r))
        assert res.ratio_star == pytest.approx(0.5, abs=1e-12)
        assert res.merit == pytest.approx(1.0, abs=1e-12)

    def test_asymmetric_value(self):
        cfg = CycleConfig.from_values(0.5, 1.0, 0.5, 0.25)
        assert cfg.feasibility_ratio == pytest.approx(0.684216523221344, abs=1e-12)
        res = fridge_optimum_closed(cfg)
        assert res.merit == pytest.approx(EPS_MCHI_05_025, abs=1e-12)
        assert res.merit > ca_cop(0.5)

    @pytest.mark.parametrize("tau", [0.1, 0.5, 0.9])
    def test_unsqueezed_recovers_ca_cop(self, tau):
        res = fridge_optimum_closed(CycleConfig.from_values(tau, 1.0))
        assert res.merit == pytest.approx(ca_cop(tau), abs=1e-12)

    def test_objective_is_chi_at_optimum(self):
        cfg = CycleConfig.from_values(0.5, 1.0, 0.5, 0.25)
        res = fridge_optimum_closed(cfg)
        assert res.objective == fridge_metrics(cfg.with_ratio(res.ratio_star)).chi
        assert res.objective > 0

    def test_closed_form_against_dense_grid(self):
        cfg = CycleConfig.from_values(0.5, 1.0, 0.5, 0.25)
        a, b = cfg.hot_weight, cfg.cold_weight
        x_grid, h = grid_argmax(lambda xs: xs * (b - a * xs) / (1 - xs), 1e-6, 1 - 1e-6)
        assert abs(fridge_optimum_closed(cfg).ratio_star - x_grid) <= h

    @pytest.mark.parametrize("values, ratio, merit", [
        ((0.75, 1.0, 0.0, 0.0), 0.5, 1.0),
        ((0.5, 1.0, 0.5, 0.25), None, EPS_MCHI_05_025),
        ((0.5, 1.0, 0.0, 0.0), None, math.sqrt(2) - 1),
    ])
    def test_numeric(self, values, ratio, merit):
        res = fridge_optimum_numeric(CycleConfig.from_values(*values))
        if ratio is not None:
            assert res.ratio_star == pytest.approx(ratio, abs=1e-8)
        assert res.merit == pytest.approx(merit, abs=1e-7)

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            fridge_optimum_closed(CycleConfig.from_values(0.75, 1.0, 0.5, 0.25))
        with pytest.raises(InfeasibleError):
            fridge_optimum_numeric(CycleConfig.from_values(0.75, 1.0, 0.5, 0.25))


def test_closed_numeric_agreement_random():
    rng = random.Random(11)
    for cfg in random_feasible(rng, 200):
        for closed, numeric in ((engine_optimum_closed, engine_optimum_numeric),
                                (fridge_optimum_closed, fridge_optimum_numeric)):
            c, n = closed(cfg), numeric(cfg)
            assert abs(c.ratio_star - n.ratio_star) < 1e-8
            assert abs(c.merit - n.merit) < 1e-7


@given(st.floats(0.05, 0.99), st.floats(0.0, 1.5), st.floats(0.0, 1.5))
def test_optimum_strictly_inside_window(tau, rc, rh):
    cfg = CycleConfig.from_values(tau, 1.0, rc, rh)
    t = cfg.feasibility_ratio
    if not t < 1:
        return
    e = engine_optimum_closed(cfg)
    f = fridge_optimum_closed(cfg)
    assert t < e.ratio_star < 1
    assert 0 < f.ratio_star < t
    assert e.ratio_star in operating_window(cfg, Mode.ENGINE)
    assert f.ratio_star in operating_window(cfg, Mode.FRIDGE)
    assert e.merit == 1 - e.ratio_star
    assert f.merit == pytest.approx(f.ratio_star / (1 - f.ratio_star), rel=1e-12)


@given(st.floats(1e-3, 0.999), st.floats(0.0, 2.0))
def test_symmetric_invariance(tau, r):
    cfg = CycleConfig.from_values(tau, 1.0, r, r)
    assert abs(engine_optimum_closed(cfg).merit - ca_efficiency(tau)) < 1e-12
    assert abs(fridge_optimum_closed(cfg).merit - ca_cop(tau)) < 1e-12


def test_carnot_exceeded_somewhere():
    tau = 0.25
    found = []
    for rh in np.linspace(0, 1.5, 31):
        res = engine_optimum_closed(CycleConfig.from_values(tau, 1.0, 0.0, rh))
        if res.merit > 1 - tau:
            found.append(rh)
    assert found
    # r_h = 1 is not enough at this tau: 1 - sqrt(0.25/cosh 2) = 0.7422 < 0.75
    assert 1.0 not in found
    assert engine_optimum_closed(CycleConfig.from_values(tau, 1.0, 0.0, 1.5)).merit > 1 - tau


@pytest.mark.parametrize("tau", [0.1, 0.25, 0.6])
@pytest.mark.parametrize("rh", [0.0, 0.5, 1.5])
def test_eta_mp_non_increasing_in_rc(tau, rh):
    merits = []
    for rc in np.linspace(0, 1.5, 60):
        cfg = CycleConfig.from_values(tau, 1.0, rc, rh)
        if cfg.feasibility_ratio < 1:
            merits.append(engine_optimum_closed(cfg).merit)
    assert all(m1 >= m2 for m1, m2 in zip(merits, merits[1:]))


@pytest.mark.parametrize("mode, rc, rh, tau, expected", [
    (Mode.ENGINE, 0.5, 1.0, 0.25, Enhancement.ENHANCED),
    (Mode.ENGINE, 1.0, 0.5, 0.25, Enhancement.SUPPRESSED),
    (Mode.FRIDGE, 0.3, 0.3, 0.75, Enhancement.CA_EQUAL),
    (Mode.FRIDGE, 0.5, 0.25, 0.5, Enhancement.ENHANCED),
    (Mode.FRIDGE, 0.25, 0.5, 0.5, Enhancement.SUPPRESSED),
    (Mode.ENGINE, 0.5, 0.25, 0.75, Enhancement.INFEASIBLE),
    (Mode.FRIDGE, 0.5, 0.25, 0.75, Enhancement.INFEASIBLE),
    (Mode.ENGINE, 0.5, 1.0, 1.0, Enhancement.ENHANCED),
])
def test_classify(mode, rc, rh, tau, expected):
    assert classify_enhancement(CycleConfig.from_values(tau, 1.0, rc, rh), mode) is expected


def test_classify_cold_hotter_than_hot():
    # T_c > T_h but strong hot squeezing still opens the engine window
    cfg = CycleConfig.from_values(1.5, 1.0, 0.0, 1.0)
    assert classify_enhancement(cfg, "engine") is Enhancement.ENHANCED
    assert classify_enhancement(cfg, "fridge") is Enhancement.SUPPRESSED


@pytest.mark.parametrize("tau, mode, sign", [(0.25, Mode.ENGINE, 1), (0.75, Mode.FRIDGE, -1)])
def test_sign_laws_on_grid(tau, mode, sign):
    rs = np.linspace(0, 1.5, 50)
    for rc in rs:
        for rh in rs:
            cls = classify_enhancement(CycleConfig.from_values(tau, 1.0, rc, rh), mode)
            if cls is Enhancement.INFEASIBLE:
                continue
            s = int(np.sign(rh - rc)) * sign
            assert cls is {1: Enhancement.ENHANCED, 0: Enhancement.CA_EQUAL, -1: Enhancement.SUPPRESSED}[s]
