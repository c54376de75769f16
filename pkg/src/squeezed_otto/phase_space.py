"""Monte Carlo check of the internal-energy law in phase space.

The oscillator's quadratures are independent zero-mean Gaussians with
variances ``T1/omega`` (anti-squeezed, x0) and ``T2/omega`` (squeezed, p0),
where ``T1,2 = T exp(+-2r)``. The energy per sample is
``(omega/2)(x0**2 + p0**2)``, whose mean should be ``T cosh(2r)`` at any
frequency.

Reproducibility contract
------------------------
* ``n`` samples are split into fixed blocks of ``BLOCK_SIZE``. Block ``i``
  draws from ``PCG64(SeedSequence(seed, spawn_key=(i,)))``, so the sample
  set does not depend on how many workers produce the blocks.
* Gaussians come from the Box-Muller transform of two uniforms; there is no
  rejection step.
* Cycle states A-D use sub-seeds ``seed ^ STATE_SEED_SALT[state]``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cycle import CycleConfig, SqueezedReservoir, effective_weight, quadratures_from_reservoir
from .exceptions import DomainError

MIN_SAMPLES = 1000
BLOCK_SIZE = 1 << 16
_U64 = (1 << 64) - 1

STATE_SEED_SALT = {
    "A": 0x9E3779B97F4A7C15,
    "B": 0xBF58476D1CE4E5B9,
    "C": 0x94D049BB133111EB,
    "D": 0xD6E8FEB86659FD93,
}


@dataclass(frozen=True)
class PhaseSamplePair:
    x0: float
    p0: float


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int
    seed: int


def make_rng(seed: int, block: int = 0) -> np.random.Generator:
    seed = _check_seed(seed)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _check_seed(seed) -> int:
    if int(seed) != seed or not 0 <= seed <= _U64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def _box_muller(rng: np.random.Generator, size):
    u1 = 1.0 - rng.random(size)  # (0, 1], keeps log finite
    u2 = rng.random(size)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return radius * np.cos(angle), radius * np.sin(angle)


def _quadrature_scales(res: SqueezedReservoir, omega: float) -> tuple[float, float]:
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    q = quadratures_from_reservoir(res)
    return math.sqrt(q.t1 / omega), math.sqrt(q.t2 / omega)


def sample_pair(res: SqueezedReservoir, omega: float, rng: np.random.Generator) -> PhaseSamplePair:
    """Draw one (x0, p0) phase-space point for an oscillator in equilibrium with ``res``."""
    sx, sp = _quadrature_scales(res, omega)
    zx, zp = _box_muller(rng, None)
    return PhaseSamplePair(float(sx * zx), float(sp * zp))


def sample_pairs(res: SqueezedReservoir, omega: float, n: int, rng: np.random.Generator):
    """Vectorized :func:`sample_pair`: returns arrays ``(x0, p0)`` of length ``n``."""
    sx, sp = _quadrature_scales(res, omega)
    zx, zp = _box_muller(rng, n)
    return sx * zx, sp * zp


def _block_energies(res, omega, seed, block, size):
    x0, p0 = sample_pairs(res, omega, size, make_rng(seed, block))
    return 0.5 * omega * (x0 * x0 + p0 * p0)


def energy_samples(res: SqueezedReservoir, omega: float, n: int, seed: int, jobs: int = 1) -> np.ndarray:
    """Per-sample energies, identical for any ``jobs``."""
    seed = _check_seed(seed)
    sizes = [BLOCK_SIZE] * (n // BLOCK_SIZE)
    if n % BLOCK_SIZE:
        sizes.append(n % BLOCK_SIZE)
    if jobs > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(lambda i: _block_energies(res, omega, seed, i, sizes[i]), range(len(sizes))))
    else:
        blocks = [_block_energies(res, omega, seed, i, s) for i, s in enumerate(sizes)]
    return np.concatenate(blocks)


def mc_internal_energy(res: SqueezedReservoir, omega: float, n: int, seed: int, jobs: int = 1) -> McEstimate:
    """Estimate the oscillator's mean energy; the standard error comes from the sample variance."""
    if int(n) != n or n < MIN_SAMPLES:
        raise DomainError(f"n must be an integer >= {MIN_SAMPLES}, got {n!r}")
    n = int(n)
    e = energy_samples(res, omega, n, seed, jobs)
    return McEstimate(float(e.mean()), float(e.std(ddof=1) / math.sqrt(n)), n, int(seed))


def analytic_energy(res: SqueezedReservoir) -> float:
    return effective_weight(res)


def analytic_std_error(res: SqueezedReservoir, n: int) -> float:
    """sqrt((T1^2 + T2^2) / (2n)), from the fourth moments of the two Gaussians."""
    q = quadratures_from_reservoir(res)
    return math.sqrt((q.t1**2 + q.t2**2) / (2.0 * n))


def cycle_state_reservoirs(cfg: CycleConfig) -> dict[str, tuple[SqueezedReservoir, float]]:
    """(reservoir-equivalent state, frequency) for each of the four cycle corners."""
    tc, rc = cfg.cold.temperature, cfg.cold.squeeze
    th, rh = cfg.hot.temperature, cfg.hot.squeeze
    wc, wh = cfg.omega_c, cfg.omega_h
    return {
        "A": (SqueezedReservoir(tc, rc), wc),
        "B": (SqueezedReservoir(tc * wh / wc, rc), wh),
        "C": (SqueezedReservoir(th, rh), wh),
        "D": (SqueezedReservoir(th * wc / wh, rh), wc),
    }


def state_seed(seed: int, state: str) -> int:
    return _check_seed(seed) ^ STATE_SEED_SALT[state]


def mc_cycle_work(cfg: CycleConfig, n: int, seed: int, jobs: int = 1) -> McEstimate:
    """Net engine work U_C - U_D - U_B + U_A from four independent state estimates."""
    est = {
        name: mc_internal_energy(res, omega, n, state_seed(seed, name), jobs)
        for name, (res, omega) in cycle_state_reservoirs(cfg).items()
    }
    mean = est["C"].mean - est["D"].mean - est["B"].mean + est["A"].mean
    se = math.sqrt(sum(e.std_error**2 for e in est.values()))
    return McEstimate(mean, se, int(n), int(seed))
