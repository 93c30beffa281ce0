"""Improved analytic approximation: mechanical spectrum, phonon number and
closed-form cooling minima.

The effective susceptibility keeps the optically induced damping but drops the
optical spring shift on purpose; the resulting closed-form phonon number is
the frequency integral of the approximate spectrum, split into a thermal term,
a quantum-noise-like term (vanishing at the optimal detuning) and a term from
force noise away from the mechanical frequency that sets the cooling limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EffectiveDampingError, NoInteriorMinimumError
from .model import SystemParams
from .weakcoupling import RateSet, force_spectrum_main, quantum_noise_rates

__all__ = [
    "PhononResult",
    "CouplingOptimum",
    "effective_susceptibility",
    "mechanical_spectrum_approx",
    "phonon_number_analytic",
    "phonon_number_simplified",
    "n_min_dissipative",
    "n_min_mixed",
    "n_min_dispersive_limit",
]


@dataclass(frozen=True)
class PhononResult:
    """Phonon numbers with the term breakdown of the closed form."""

    n_qn: float
    n_analytic: float
    term_thermal: float
    term_qn_like: float
    term_beyond: float
    rates: RateSet


@dataclass(frozen=True)
class CouplingOptimum:
    """A closed-form cooling minimum and where it sits."""

    n_min: float
    coupling_sq: float                   # optimal (b_tilde * a_bar)^2
    a_tilde_over_b_tilde: float | None = None  # set for the mixed optimum


def effective_susceptibility(params: SystemParams, rates: RateSet, omega):
    """Mechanical response with optically broadened linewidth, no spring shift."""
    return 1.0 / (rates.gamma_eff / 2.0 - 1j * (np.asarray(omega, dtype=float) - params.omega_m))


def mechanical_spectrum_approx(params: SystemParams, omega, rates: RateSet | None = None):
    """S_cc(omega) = |chi(-omega)|^2 [gamma*n_th + x0^2 S_FF(omega)]."""
    if rates is None:
        rates = quantum_noise_rates(params)
    if rates.gamma_eff <= 0.0:
        raise EffectiveDampingError("effective damping nonpositive")
    omega = np.asarray(omega, dtype=float)
    chi_sq = 1.0 / ((rates.gamma_eff / 2.0) ** 2 + (omega + params.omega_m) ** 2)
    out = chi_sq * (params.gamma * params.n_th + force_spectrum_main(params, omega))
    return out if out.ndim else float(out)


def phonon_number_analytic(params: SystemParams) -> PhononResult:
    """Closed-form frequency integral of :func:`mechanical_spectrum_approx`.

    The numerators are written without dividing by b_tilde so the purely
    dispersive limit is exact.
    """
    rates = quantum_noise_rates(params)
    gt = rates.gamma_eff
    if gt <= 0.0:
        raise EffectiveDampingError("effective damping nonpositive")
    om, k, d = params.omega_m, params.kappa, params.delta
    a, b = params.a_tilde, params.b_tilde
    amp = params.a_bar**2 / 4.0

    term1 = params.gamma * params.n_th / gt
    num2 = (b * (2.0 * d - om) - 2.0 * a * k) ** 2
    term2 = amp * k * num2 / (gt * ((gt + k) ** 2 / 4.0 + (d - om) ** 2))
    num3 = b * b * k * (gt + k) + 4.0 * (b * d - 2.0 * a * k) ** 2
    term3 = amp * num3 / ((gt + k) ** 2 + 4.0 * (d - om) ** 2)

    n_qn = (params.gamma * params.n_th + rates.gamma_up) / gt
    return PhononResult(
        n_qn=n_qn,
        n_analytic=term1 + term2 + term3,
        term_thermal=term1,
        term_qn_like=term2,
        term_beyond=term3,
        rates=rates,
    )


def phonon_number_simplified(params: SystemParams) -> float:
    """n = gamma*n_th/gamma_eff + (b_tilde*a_bar)^2/4.

    Valid at the optimal detuning and for kappa >> gamma_eff; the caller is
    responsible for evaluating it there.
    """
    rates = quantum_noise_rates(params)
    if rates.gamma_eff <= 0.0:
        raise EffectiveDampingError("effective damping nonpositive")
    return (
        params.gamma * params.n_th / rates.gamma_eff
        + (params.b_tilde * params.a_bar) ** 2 / 4.0
    )


def _closed_form_minimum(params: SystemParams, r: float) -> tuple[float, float]:
    # Minimum of n(u) = gamma*n_th / (gamma + 4*u*kappa/r) + u/4 over u = (B|a|)^2,
    # where r collects the cavity-filter factor of the cooling rate.
    g, k, nth = params.gamma, params.kappa, params.n_th
    u_opt = math.sqrt(g * nth * r / k) - g * r / (4.0 * k)
    if u_opt <= 0.0:
        raise NoInteriorMinimumError("no interior minimum in validity regime")
    n_min = math.sqrt(g * nth * r / (4.0 * k)) - g * r / (16.0 * k)
    return n_min, u_opt


def n_min_dissipative(params: SystemParams) -> CouplingOptimum:
    """Minimal phonon number for purely dissipative coupling at delta = omega_m/2."""
    r = (params.kappa / params.omega_m) ** 2 + 9.0
    n_min, u_opt = _closed_form_minimum(params, r)
    return CouplingOptimum(n_min=n_min, coupling_sq=u_opt)


def n_min_mixed(params: SystemParams) -> CouplingOptimum:
    """Minimal phonon number for ideally mixed coupling.

    The dispersive coupling is slaved to a_tilde = -3*b_tilde*omega_m/(2*kappa),
    which moves the optimal detuning to -omega_m and maximizes the cooling
    rate; opposite coupling signs are required.
    """
    r = (params.kappa / params.omega_m) ** 2
    n_min, u_opt = _closed_form_minimum(params, r)
    return CouplingOptimum(
        n_min=n_min,
        coupling_sq=u_opt,
        a_tilde_over_b_tilde=-1.5 * params.omega_m / params.kappa,
    )


def n_min_dispersive_limit(params: SystemParams) -> float:
    """Quantum-noise cooling limit kappa^2/(16 omega_m^2) of purely dispersive coupling."""
    return params.kappa**2 / (16.0 * params.omega_m**2)
