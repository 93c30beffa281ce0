"""Weak-coupling force spectra, quantum-noise rates and the optimal detuning.

All force-spectrum values are returned pre-multiplied by the zero-point
fluctuation squared, i.e. as x0^2 * S_FF(omega), which has units of a rate.
The numerators are kept in the expanded form (B*(...) - 2*A*kappa)^2 so the
purely dispersive limit B -> 0 is exact without a separate branch.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EffectiveDampingError, PurelyDispersiveError
from .model import LossChannel, LossSplit, SystemParams

__all__ = [
    "RateSet",
    "force_spectrum_main",
    "force_spectrum_case1",
    "force_spectrum_case2",
    "force_spectrum",
    "optimal_detuning",
    "quantum_noise_rates",
    "phonon_number_qn",
]

_B_ZERO = 1e-14  # below this, b_tilde counts as exactly zero


@dataclass(frozen=True)
class RateSet:
    """Transition rates derived from the force spectrum at -/+ omega_m."""

    gamma_up: float    # amplification rate, x0^2 S_FF(-omega_m)
    gamma_down: float  # cooling rate, x0^2 S_FF(+omega_m)
    gamma_eff: float   # gamma + gamma_down - gamma_up


def _cavity_lorentzian(params: SystemParams, omega):
    return (params.kappa / 2.0) ** 2 + (omega + params.delta) ** 2


def force_spectrum_main(params: SystemParams, omega):
    """x0^2 S_FF(omega) for the single-port (maximally overcoupled) model.

    The numerator root at omega = -2*delta + 2*a_tilde*kappa/b_tilde is the
    Fano zero from interference between the cavity-mediated force and the
    directly injected drive-port noise.
    """
    omega = np.asarray(omega, dtype=float)
    k = params.kappa
    num = (params.b_tilde * (omega + 2.0 * params.delta) - 2.0 * params.a_tilde * k) ** 2
    out = (params.a_bar**2 / 4.0) * k * num / _cavity_lorentzian(params, omega)
    return out if out.ndim else float(out)


def force_spectrum_case1(params: SystemParams, split: LossSplit, omega):
    """Drive-port linewidth modulated, fixed internal loss kappa_0.

    The kappa_0 pedestal spoils the perfect interference: the spectrum no
    longer has an exact zero unless kappa_0 = 0, in which case this reduces
    pointwise to :func:`force_spectrum_main`.
    """
    if split.modulated_channel not in (LossChannel.CASE1_EXTERNAL, LossChannel.MAIN_TEXT):
        raise ValueError("split is not a case-1 (external-channel) split")
    split.validate_for(params)
    omega = np.asarray(omega, dtype=float)
    k = params.kappa
    a, b = params.a_tilde, params.b_tilde
    fano = split.kappa_ext * (b * (omega + 2.0 * params.delta) - 2.0 * a * k) ** 2
    pedestal = split.kappa_0 * ((b * params.delta - 2.0 * a * k) ** 2 + b * b * k * k / 4.0)
    out = (params.a_bar**2 / 4.0) * (fano + pedestal) / _cavity_lorentzian(params, omega)
    return out if out.ndim else float(out)


def force_spectrum_case2(params: SystemParams, split: LossSplit, omega):
    """Internal linewidth modulated, fixed drive-port loss kappa_ext.

    Purely dissipative coupling gives a flat spectrum (no interference); with
    both couplings the line shape is Fano-like but never reaches zero.
    """
    if split.modulated_channel is not LossChannel.CASE2_INTERNAL:
        raise ValueError("split is not a case-2 (internal-channel) split")
    split.validate_for(params)
    omega = np.asarray(omega, dtype=float)
    k = params.kappa
    a, b = params.a_tilde, params.b_tilde
    internal = split.kappa_0 * (
        (b * (omega + params.delta) - 2.0 * a * k) ** 2 + b * b * k * k / 4.0
    )
    external = split.kappa_ext * (2.0 * a * k) ** 2
    out = (params.a_bar**2 / 4.0) * (internal + external) / _cavity_lorentzian(params, omega)
    return out if out.ndim else float(out)


def force_spectrum(params: SystemParams, split: LossSplit | None, omega):
    """Dispatch on the loss split; ``split=None`` means the single-port model."""
    if split is None or split.modulated_channel is LossChannel.MAIN_TEXT:
        if split is not None:
            split.validate_for(params)
        return force_spectrum_main(params, omega)
    if split.modulated_channel is LossChannel.CASE1_EXTERNAL:
        return force_spectrum_case1(params, split, omega)
    return force_spectrum_case2(params, split, omega)


def optimal_detuning(params: SystemParams) -> float:
    """Detuning that puts the Fano zero of the single-port spectrum at -omega_m."""
    if abs(params.b_tilde) < _B_ZERO:
        raise PurelyDispersiveError("undefined for purely dispersive coupling")
    return params.omega_m / 2.0 + params.kappa * params.a_tilde / params.b_tilde


def quantum_noise_rates(params: SystemParams, split: LossSplit | None = None) -> RateSet:
    """Amplification/cooling rates from the force spectrum at -/+ omega_m."""
    up = float(force_spectrum(params, split, -params.omega_m))
    down = float(force_spectrum(params, split, params.omega_m))
    return RateSet(gamma_up=up, gamma_down=down, gamma_eff=params.gamma + down - up)


def phonon_number_qn(params: SystemParams, split: LossSplit | None = None) -> float:
    """Steady-state phonon number in the quantum-noise approximation."""
    rates = quantum_noise_rates(params, split)
    if rates.gamma_eff <= 0.0:
        raise EffectiveDampingError("quantum-noise unstable: gamma_eff <= 0")
    return (params.gamma * params.n_th + rates.gamma_up) / rates.gamma_eff
