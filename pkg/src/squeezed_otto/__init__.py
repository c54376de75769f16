"""Quantum Otto heat engines and refrigerators between two squeezed thermal reservoirs."""

from .cycle import (
    CycleConfig,
    CycleStates,
    EngineMetrics,
    FridgeMetrics,
    HeatConvention,
    Mode,
    OperatingWindow,
    QuadratureTemps,
    SqueezedReservoir,
    cycle_state_energies,
    effective_weight,
    engine_metrics,
    fridge_metrics,
    operating_window,
    quadratures_from_reservoir,
    reservoir_from_quadratures,
)
from .exceptions import ConvergenceError, DomainError, InfeasibleError, OttoError
from .optimum import (
    Enhancement,
    MaximizerSettings,
    Method,
    OptimumResult,
    ca_cop,
    ca_efficiency,
    classify_enhancement,
    engine_optimum_closed,
    engine_optimum_numeric,
    fridge_optimum_closed,
    fridge_optimum_numeric,
    golden_section_maximize,
)
from .phase_space import McEstimate, PhaseSamplePair, mc_cycle_work, mc_internal_energy, sample_pair

__version__ = "0.1.0"
