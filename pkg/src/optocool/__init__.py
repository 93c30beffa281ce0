"""Laser cooling of a mechanical oscillator coupled to a driven cavity through
both dispersive (frequency-pulling) and dissipative (linewidth-modulating)
coupling.

Three fidelity tiers are available for the steady-state phonon number and the
associated spectra: the quantum-noise approximation, an improved closed-form
approximation that keeps the force noise at all frequencies, and the exact
steady state of the linear Langevin equations.
"""

from ._backend import BACKEND
from .analytic import (
    CouplingOptimum,
    PhononResult,
    effective_susceptibility,
    mechanical_spectrum_approx,
    n_min_dispersive_limit,
    n_min_dissipative,
    n_min_mixed,
    phonon_number_analytic,
    phonon_number_simplified,
)
from .errors import (
    EffectiveDampingError,
    IllConditionedError,
    InstabilityError,
    LyapunovError,
    NoInteriorMinimumError,
    NoStablePointError,
    OptocoolError,
    ParameterError,
    PurelyDispersiveError,
)
from .exact import (
    Observable,
    SpectrumTrace,
    Tier,
    adaptive_omega_grid,
    exact_spectrum_values,
    exact_vs_analytic_report,
    integrate_spectrum,
    phonon_number_exact,
    spectrum_exact,
    steady_covariance,
)
from .model import (
    LinearSystem,
    LossChannel,
    LossSplit,
    Stability,
    SystemParams,
    build_linear_system,
    is_stable,
)
from .sweep import (
    MinimizeResult,
    SweepResult,
    golden_section,
    minimize_phonon,
    sweep_coupling,
    sweep_detuning,
    sweep_sideband_minimum,
)
from .weakcoupling import (
    RateSet,
    force_spectrum,
    force_spectrum_case1,
    force_spectrum_case2,
    force_spectrum_main,
    optimal_detuning,
    phonon_number_qn,
    quantum_noise_rates,
)

__version__ = "0.1.0"
__all__ = [
    "BACKEND",
    "__version__",
    # model
    "SystemParams", "LossChannel", "LossSplit", "LinearSystem", "Stability",
    "build_linear_system", "is_stable",
    # weak coupling
    "RateSet", "force_spectrum_main", "force_spectrum_case1", "force_spectrum_case2",
    "force_spectrum", "optimal_detuning", "quantum_noise_rates", "phonon_number_qn",
    # analytic
    "PhononResult", "CouplingOptimum", "effective_susceptibility",
    "mechanical_spectrum_approx", "phonon_number_analytic", "phonon_number_simplified",
    "n_min_dissipative", "n_min_mixed", "n_min_dispersive_limit",
    # exact
    "Observable", "Tier", "SpectrumTrace", "spectrum_exact", "exact_spectrum_values",
    "steady_covariance", "phonon_number_exact", "integrate_spectrum",
    "exact_vs_analytic_report", "adaptive_omega_grid",
    # sweep
    "SweepResult", "MinimizeResult", "golden_section", "sweep_detuning",
    "sweep_coupling", "sweep_sideband_minimum", "minimize_phonon",
    # errors
    "OptocoolError", "ParameterError", "PurelyDispersiveError", "EffectiveDampingError",
    "InstabilityError", "IllConditionedError", "LyapunovError",
    "NoInteriorMinimumError", "NoStablePointError",
]
