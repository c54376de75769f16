"""Optimal compression ratio for maximum work (engine) and maximum chi (fridge).

Every optimum depends on the baths only through the feasibility ratio
``t = b / a``:

* engine, maximum work:  x* = sqrt(t),          eta_mp  = 1 - sqrt(t)
* fridge, maximum chi:   x* = 1 - sqrt(1 - t),  eps_mchi = 1 / sqrt(1 - t) - 1

The numeric path reaches the same points by golden-section search and
exists to cross-check the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .cycle import (
    CycleConfig,
    Mode,
    chi_at_ratio,
    engine_metrics,
    fridge_metrics,
    work_at_ratio,
)
from .exceptions import ConvergenceError, DomainError, InfeasibleError

#: absolute band inside which a merit counts as equal to its Curzon-Ahlborn reference
CA_EQUAL_ATOL = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

INFEASIBLE_MESSAGE = "no operating window: T_c cosh(2r_c) >= T_h cosh(2r_h)"


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


class Enhancement(str, Enum):
    ENHANCED = "Enhanced"
    CA_EQUAL = "CAEqual"
    SUPPRESSED = "Suppressed"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class OptimumResult:
    """Optimal ratio ``omega_c/omega_h`` and what the cycle delivers there.

    ``objective`` is the work per cycle (engine) or chi (fridge); ``merit``
    is eta_mp or eps_mchi.
    """

    mode: Mode
    ratio_star: float
    objective: float
    merit: float
    method: Method
    iterations: int = 0


@dataclass(frozen=True)
class MaximizerSettings:
    tol: float = 1e-10
    max_iters: int = 200
    bracket_margin: float = 1e-9

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise DomainError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not 0.0 < self.bracket_margin < 0.5:
            raise DomainError(f"bracket_margin must lie in (0, 0.5), got {self.bracket_margin!r}")


def ca_efficiency(tau: float) -> float:
    """Curzon-Ahlborn efficiency 1 - sqrt(tau), tau = T_c/T_h in (0, 1]."""
    if not 0.0 < tau <= 1.0:
        raise DomainError(f"tau must lie in (0, 1], got {tau!r}")
    return 1.0 - math.sqrt(tau)


def ca_cop(tau: float) -> float:
    """Curzon-Ahlborn COP 1/sqrt(1 - tau) - 1, tau = T_c/T_h in (0, 1)."""
    if not 0.0 < tau < 1.0:
        raise DomainError(f"tau must lie in (0, 1), got {tau!r}")
    return 1.0 / math.sqrt(1.0 - tau) - 1.0


def _feasibility_ratio(cfg: CycleConfig, mode: Mode) -> float:
    t = cfg.feasibility_ratio
    if not 0.0 < t < 1.0:
        raise InfeasibleError(f"{mode.value}: {INFEASIBLE_MESSAGE} (b/a = {t:.12g})")
    return t


def _objective(cfg: CycleConfig, mode: Mode, x: float) -> float:
    moved = cfg.with_ratio(x)
    if mode is Mode.ENGINE:
        return engine_metrics(moved).w_total
    return fridge_metrics(moved).chi


def engine_optimum_closed(cfg: CycleConfig) -> OptimumResult:
    t = _feasibility_ratio(cfg, Mode.ENGINE)
    x = math.sqrt(t)
    return OptimumResult(Mode.ENGINE, x, _objective(cfg, Mode.ENGINE, x), 1.0 - x, Method.CLOSED_FORM)


def fridge_optimum_closed(cfg: CycleConfig) -> OptimumResult:
    t = _feasibility_ratio(cfg, Mode.FRIDGE)
    s = math.sqrt(1.0 - t)
    x = 1.0 - s
    return OptimumResult(Mode.FRIDGE, x, _objective(cfg, Mode.FRIDGE, x), 1.0 / s - 1.0, Method.CLOSED_FORM)


def golden_section_maximize(
    f: Callable[[float], object],
    lo: float,
    hi: float,
    settings: MaximizerSettings | None = None,
) -> tuple[float, object, int]:
    """Maximize a unimodal ``f`` on [lo, hi] by golden-section search.

    ``f`` may return anything totally ordered (floats, Fractions, ...). Search
    stops once the bracket is no wider than ``settings.tol``; the midpoint is
    returned, so it lies within tol/2 of the true maximizer.

    Returns ``(x_star, f(x_star), iterations)``.
    """
    settings = settings or MaximizerSettings()
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    iterations = 0
    while b - a > settings.tol:
        if iterations >= settings.max_iters:
            raise ConvergenceError(
                f"bracket width {b - a:.3g} > tol {settings.tol:.3g} after {iterations} iterations"
            )
        iterations += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x_star = 0.5 * (a + b)
    return x_star, f(x_star), iterations


class _Rational:
    """num/den with den > 0, compared exactly by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        self.num = num
        self.den = den

    def __ge__(self, other):
        return self.num * other.den >= other.num * self.den

    def __lt__(self, other):
        return self.num * other.den < other.num * self.den

    def __float__(self):
        return self.num / self.den


# Near its maximum the objective is flat to second order, so rounding in a
# float evaluation hides the argmax below ~sqrt(machine eps). Probe points are
# exact binary fractions, and these objectives are rational in x, so they are
# evaluated exactly instead. The common positive factor 1/(a2*b2) is dropped.

def _exact_work(a: float, b: float) -> Callable[[float], _Rational]:
    a1, a2 = a.as_integer_ratio()
    b1, b2 = b.as_integer_ratio()
    ab, ba = a1 * b2, b1 * a2

    def work(x: float) -> _Rational:
        # (1 - x)(a x - b) / x with x = p/q
        p, q = x.as_integer_ratio()
        return _Rational((q - p) * (ab * p - ba * q), q * p)

    return work


def _exact_chi(a: float, b: float) -> Callable[[float], _Rational]:
    a1, a2 = a.as_integer_ratio()
    b1, b2 = b.as_integer_ratio()
    ab, ba = a1 * b2, b1 * a2

    def chi(x: float) -> _Rational:
        # x (b - a x) / (1 - x) with x = p/q
        p, q = x.as_integer_ratio()
        return _Rational(p * (ba * q - ab * p), q * (q - p))

    return chi


def _numeric(cfg: CycleConfig, mode: Mode, settings: MaximizerSettings | None) -> OptimumResult:
    settings = settings or MaximizerSettings()
    _feasibility_ratio(cfg, mode)
    a, b = cfg.hot_weight, cfg.cold_weight
    f = _exact_work(a, b) if mode is Mode.ENGINE else _exact_chi(a, b)
    m = settings.bracket_margin
    x, _, iterations = golden_section_maximize(f, m, 1.0 - m, settings)
    if mode is Mode.ENGINE:
        objective, merit = work_at_ratio(a, b, x), 1.0 - x
    else:
        objective, merit = chi_at_ratio(a, b, x), x / (1.0 - x)
    return OptimumResult(mode, x, objective, merit, Method.NUMERIC, iterations)


def engine_optimum_numeric(cfg: CycleConfig, settings: MaximizerSettings | None = None) -> OptimumResult:
    return _numeric(cfg, Mode.ENGINE, settings)


def fridge_optimum_numeric(cfg: CycleConfig, settings: MaximizerSettings | None = None) -> OptimumResult:
    return _numeric(cfg, Mode.FRIDGE, settings)


def optimum(cfg: CycleConfig, mode, numeric: bool = False, settings: MaximizerSettings | None = None) -> OptimumResult:
    """Dispatch to the closed-form or numeric optimizer for ``mode``."""
    mode = Mode(mode)
    if numeric:
        return _numeric(cfg, mode, settings)
    if mode is Mode.ENGINE:
        return engine_optimum_closed(cfg)
    return fridge_optimum_closed(cfg)


def reference_value(tau: float, mode) -> float:
    """Curzon-Ahlborn reference for ``mode`` at temperature ratio ``tau``."""
    return ca_efficiency(tau) if Mode(mode) is Mode.ENGINE else ca_cop(tau)


def classify_enhancement(cfg: CycleConfig, mode) -> Enhancement:
    """Compare the optimal merit with its Curzon-Ahlborn value at T_c/T_h."""
    mode = Mode(mode)
    try:
        result = optimum(cfg, mode)
    except InfeasibleError:
        return Enhancement.INFEASIBLE
    tau = cfg.cold.temperature / cfg.hot.temperature
    if tau >= 1.0:
        if mode is Mode.FRIDGE:
            # the reference COP diverges; any finite merit falls short of it
            return Enhancement.SUPPRESSED
        # 1 - sqrt(tau) <= 0 here, while a feasible engine has positive merit
        return _compare(result.merit, 1.0 - math.sqrt(tau))
    return _compare(result.merit, reference_value(tau, mode))


def _compare(merit: float, reference: float) -> Enhancement:
    diff = merit - reference
    if abs(diff) <= CA_EQUAL_ATOL:
        return Enhancement.CA_EQUAL
    return Enhancement.ENHANCED if diff > 0 else Enhancement.SUPPRESSED
