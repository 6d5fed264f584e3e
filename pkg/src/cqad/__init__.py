"""Simulator and parameter-estimation toolkit for a transmon qubit coupled
to a multimode surface-acoustic-wave resonator."""

from .analytic import (
    RegimeLabel,
    chi_dispersive,
    classify_regime,
    coupling_profile,
    gamma_prime,
    pe_exact,
    pe_paper,
    purcell_idle,
    stark_shift,
)
from .engine import EvolutionError, EvolveOptions, evolve, expect, simulate_resonant_pe
from .fitting import (
    FitError,
    FitResult,
    fit_coupling_profile,
    fit_exponential,
    fit_purcell,
    fit_resonant,
    least_squares,
)
from .model import (
    HilbertSpec,
    ModeParams,
    QubitParams,
    SystemParams,
    TimeSeries,
    load_params,
    save_params,
    validate,
)
from .operators import (
    collapse_ops,
    destroy,
    embed,
    hamiltonian_dispersive,
    hamiltonian_full,
    initial_state,
)
from .reset import (
    ResetConfig,
    ResetSweepRow,
    impact_crossings,
    purcell_impact,
    reset_time,
    sweep_reset,
)
from .tof import (
    EchoModel,
    TofGeometry,
    TofInput,
    geometry_from_timing,
    has_early_sub_echo,
    saw_velocity,
    simulate_echo,
)

__version__ = "0.1.0"
