"""Closed-form energetics of an Otto cycle between two squeezed thermal baths.

Natural units are used throughout (k_B = hbar = 1): temperatures are energies
and frequencies are inverse times. The working medium is a single harmonic
oscillator whose frequency is switched between ``omega_c`` and ``omega_h``.

Two numbers control everything:

* ``a`` -- effective weight of the hot bath, ``T_h * cosh(2 r_h)``
* ``b`` -- effective weight of the cold bath, ``T_c * cosh(2 r_c)``

and the compression ratio ``x = omega_c / omega_h`` in (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import DomainError

#: relative round-trip tolerance between quadrature and (T, r) representations
ROUND_TRIP_RTOL = 1e-12
#: first-law residual bound, relative to max(|q_h|, |q_c|, 1)
FIRST_LAW_RTOL = 1e-14
#: half-width of the band around a window edge where sign checks are skipped
WINDOW_BAND = 1e-9


class Mode(str, Enum):
    ENGINE = "engine"
    FRIDGE = "fridge"


class HeatConvention(str, Enum):
    """Sign convention for the refrigerator cooling heat.

    ``ABSORBED`` (default) is ``U_A - U_D``, positive inside the refrigeration
    window. ``PRINTED`` is ``U_D - U_A``, the opposite sign, kept so the two
    can be compared side by side. The COP is identical under both.
    """

    ABSORBED = "absorbed"
    PRINTED = "printed"


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class SqueezedReservoir:
    """A bath at effective temperature ``temperature`` with squeezing ``squeeze``."""

    temperature: float
    squeeze: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "temperature", _check_positive("temperature", self.temperature))
        r = float(self.squeeze)
        if not math.isfinite(r) or r < 0.0:
            # negative r is rejected rather than folded to |r|
            raise DomainError(f"squeeze must be a nonnegative finite number, got {r!r}")
        object.__setattr__(self, "squeeze", r)

    @property
    def effective_weight(self) -> float:
        return effective_weight(self)


@dataclass(frozen=True)
class QuadratureTemps:
    """Fluctuation temperatures of the anti-squeezed (t1) and squeezed (t2) quadratures."""

    t1: float
    t2: float

    def __post_init__(self):
        t1 = _check_positive("t1", self.t1)
        t2 = _check_positive("t2", self.t2)
        if t1 < t2:
            raise DomainError(f"t1 must be >= t2 (anti-squeezed quadrature is hotter), got {t1!r} < {t2!r}")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)


@dataclass(frozen=True)
class CycleConfig:
    cold: SqueezedReservoir
    hot: SqueezedReservoir
    omega_c: float = 1.0
    omega_h: float = 2.0
    hot_weight: float = field(init=False, repr=False, compare=False)
    cold_weight: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        wc = _check_positive("omega_c", self.omega_c)
        wh = _check_positive("omega_h", self.omega_h)
        if not wc < wh:
            raise DomainError("omega_c must be < omega_h")
        object.__setattr__(self, "omega_c", wc)
        object.__setattr__(self, "omega_h", wh)
        # a and b, cached: every cycle quantity needs them
        object.__setattr__(self, "hot_weight", effective_weight(self.hot))
        object.__setattr__(self, "cold_weight", effective_weight(self.cold))

    @classmethod
    def from_values(cls, tc, th, rc=0.0, rh=0.0, wc=1.0, wh=2.0) -> "CycleConfig":
        """Build a config from plain numbers (cold/hot temperature, squeezes, frequencies)."""
        return cls(SqueezedReservoir(tc, rc), SqueezedReservoir(th, rh), wc, wh)

    @property
    def ratio(self) -> float:
        """Compression ratio omega_c / omega_h."""
        return self.omega_c / self.omega_h

    @property
    def feasibility_ratio(self) -> float:
        """b / a; both operating modes need it strictly inside (0, 1).

        Formed as (T_c/T_h) * (cosh 2r_c / cosh 2r_h) so equal squeezing cancels
        exactly; the fridge optimum is ill-conditioned as b/a -> 1.
        """
        temps = self.cold.temperature / self.hot.temperature
        return temps * (math.cosh(2 * self.cold.squeeze) / math.cosh(2 * self.hot.squeeze))

    def with_ratio(self, x: float) -> "CycleConfig":
        """Same baths, ``omega_h`` kept, ``omega_c`` moved so that omega_c/omega_h = x."""
        return CycleConfig(self.cold, self.hot, x * self.omega_h, self.omega_h)


@dataclass(frozen=True)
class CycleStates:
    u_a: float
    u_b: float
    u_c: float
    u_d: float


@dataclass(frozen=True)
class EngineMetrics:
    w_total: float
    q_h: float
    q_c: float
    eta: float


@dataclass(frozen=True)
class FridgeMetrics:
    q_c: float
    q_h: float
    w_in: float
    eps: float
    chi: float
    convention: HeatConvention = HeatConvention.ABSORBED


@dataclass(frozen=True)
class OperatingWindow:
    """Open interval (lo, hi) of compression ratios where ``mode`` does its job."""

    mode: Mode
    lo: float
    hi: float
    feasible: bool

    def __contains__(self, x: float) -> bool:
        return self.feasible and self.lo < x < self.hi


def effective_weight(res: SqueezedReservoir) -> float:
    """Internal energy of the oscillator after equilibrating with ``res``: T cosh(2r).

    It does not depend on the oscillator frequency.
    """
    return res.temperature * math.cosh(2.0 * res.squeeze)


def reservoir_from_quadratures(q: QuadratureTemps) -> SqueezedReservoir:
    return SqueezedReservoir(math.sqrt(q.t1 * q.t2), 0.25 * math.log(q.t1 / q.t2))


def quadratures_from_reservoir(res: SqueezedReservoir) -> QuadratureTemps:
    two_r = 2.0 * res.squeeze
    return QuadratureTemps(res.temperature * math.exp(two_r), res.temperature * math.exp(-two_r))


def cycle_state_energies(cfg: CycleConfig) -> CycleStates:
    a = cfg.hot_weight
    b = cfg.cold_weight
    return CycleStates(
        u_a=b,
        u_b=b * (cfg.omega_h / cfg.omega_c),
        u_c=a,
        u_d=a * (cfg.omega_c / cfg.omega_h),
    )


def engine_metrics(cfg: CycleConfig) -> EngineMetrics:
    """Heats, net work and efficiency of the engine cycle A -> B -> C -> D -> A.

    Negative work is returned as-is; it flags a configuration outside the
    engine window rather than an error.
    """
    s = cycle_state_energies(cfg)
    q_h = s.u_c - s.u_b
    q_c = s.u_d - s.u_a
    return EngineMetrics(w_total=q_h - q_c, q_h=q_h, q_c=q_c, eta=1.0 - cfg.omega_c / cfg.omega_h)


def fridge_metrics(cfg: CycleConfig, convention: HeatConvention = HeatConvention.ABSORBED) -> FridgeMetrics:
    """Heats, input work, COP and chi = eps * q_c of the reversed cycle.

    The COP ``omega_c / (omega_h - omega_c)`` grows without bound as
    omega_c approaches omega_h; large values are reported, never clipped.
    """
    if convention is not HeatConvention.ABSORBED:
        convention = HeatConvention(convention)
    s = cycle_state_energies(cfg)
    q_c = s.u_a - s.u_d
    q_h = s.u_b - s.u_c
    if convention is HeatConvention.PRINTED:
        q_c, q_h = -q_c, -q_h
    eps = cfg.omega_c / (cfg.omega_h - cfg.omega_c)
    return FridgeMetrics(q_c=q_c, q_h=q_h, w_in=q_h - q_c, eps=eps, chi=eps * q_c, convention=convention)


def operating_window(cfg: CycleConfig, mode) -> OperatingWindow:
    mode = Mode(mode)
    t = cfg.feasibility_ratio
    if mode is Mode.ENGINE:
        return OperatingWindow(mode, min(t, 1.0), 1.0, t < 1.0)
    return OperatingWindow(mode, 0.0, min(t, 1.0), 0.0 < t < 1.0)


def work_at_ratio(a: float, b: float, x: float) -> float:
    """Net engine work per cycle at compression ratio ``x``, in factored form (1 - x)(a - b/x)."""
    return (1.0 - x) * (a - b / x)


def chi_at_ratio(a: float, b: float, x: float) -> float:
    """Refrigerator figure of merit eps * q_c at compression ratio ``x``."""
    return x * (b - a * x) / (1.0 - x)


def ratio_scan(cfg: CycleConfig, ratios):
    """Engine work and fridge cooling heat at many compression ratios at once.

    ``omega_h`` is held fixed and ``omega_c = x * omega_h``; the arithmetic is
    the same as ``engine_metrics(cfg.with_ratio(x))`` and
    ``fridge_metrics(cfg.with_ratio(x))`` element by element. Returns
    ``(w_total, q_c)`` arrays, q_c in the absorbed convention.
    """
    x = np.asarray(ratios, dtype=float)
    if np.any((x <= 0.0) | (x >= 1.0)):
        raise DomainError("compression ratios must lie in (0, 1)")
    a, b = cfg.hot_weight, cfg.cold_weight
    wh = cfg.omega_h
    wc = x * wh
    u_b = b * (wh / wc)
    u_d = a * (wc / wh)
    q_h = a - u_b
    q_c = u_d - b
    return q_h - q_c, b - u_d
