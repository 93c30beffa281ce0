"""System parameters, loss-channel splits and the linearized fluctuation system.

The fluctuation vector is v = (d, d^dag, c, c^dag) with d the cavity and c the
mechanical mode; the corresponding input-noise vector is
xi = (d_in, d_in^dag, c_in, c_in^dag).  Everything downstream (weak-coupling
rates, the improved analytic phonon number, the exact steady state) is a pure
function of these matrices and the parameters below.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError

__all__ = [
    "SystemParams",
    "LossChannel",
    "LossSplit",
    "LinearSystem",
    "Stability",
    "build_linear_system",
    "is_stable",
]


@dataclass(frozen=True)
class SystemParams:
    """All physical rates and couplings; the single source of truth.

    Rates are in the same (arbitrary) frequency unit; the mechanical frequency
    ``omega_m`` is the natural choice of unit.  The couplings ``a_tilde``
    (dispersive: displacement pulls the cavity frequency) and ``b_tilde``
    (dissipative: displacement modulates the cavity linewidth) are signed and
    dimensionless; they enter all observables only through the products
    ``a_tilde * a_bar`` and ``b_tilde * a_bar`` and the ratio a_tilde/b_tilde.
    The mean cavity amplitude ``a_bar`` is gauge-fixed real and nonnegative.
    """

    omega_m: float
    kappa: float
    gamma: float
    delta: float = 0.0
    a_tilde: float = 0.0
    b_tilde: float = 0.0
    a_bar: float = 1.0
    n_th: float = 0.0

    def __post_init__(self):
        for name in ("omega_m", "kappa", "gamma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be positive and finite, got {v!r}")
        for name in ("delta", "a_tilde", "b_tilde"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if not (math.isfinite(self.a_bar) and self.a_bar >= 0):
            raise ParameterError(f"a_bar must be >= 0, got {self.a_bar!r}")
        if not (math.isfinite(self.n_th) and self.n_th >= 0):
            raise ParameterError(f"n_th must be >= 0, got {self.n_th!r}")

    @classmethod
    def from_ratios(
        cls,
        omega_m_over_kappa,
        omega_m_over_gamma,
        delta=0.0,
        dispersive=0.0,
        dissipative=0.0,
        n_th=0.0,
        a_bar=1.0,
    ):
        """Build parameters from the ratios used throughout this package.

        ``delta`` is in units of omega_m; ``dispersive`` and ``dissipative``
        are the coupling products A|a_bar| and B|a_bar|.  Internally
        omega_m = 1.
        """
        if omega_m_over_kappa <= 0 or omega_m_over_gamma <= 0:
            raise ParameterError("frequency ratios must be positive")
        if a_bar <= 0 and (dispersive != 0 or dissipative != 0):
            raise ParameterError("a_bar must be > 0 when couplings are nonzero")
        return cls(
            omega_m=1.0,
            kappa=1.0 / omega_m_over_kappa,
            gamma=1.0 / omega_m_over_gamma,
            delta=float(delta),
            a_tilde=float(dispersive) / a_bar if a_bar > 0 else 0.0,
            b_tilde=float(dissipative) / a_bar if a_bar > 0 else 0.0,
            a_bar=float(a_bar),
            n_th=float(n_th),
        )

    def with_(self, **changes) -> "SystemParams":
        return replace(self, **changes)


class LossChannel(enum.Enum):
    """Which loss channel is displacement-modulated."""

    MAIN_TEXT = "main"          # single port, kappa_0 = 0
    CASE1_EXTERNAL = "case1"    # drive-port linewidth modulated, kappa_0 fixed
    CASE2_INTERNAL = "case2"    # internal linewidth modulated, kappa_ext fixed


@dataclass(frozen=True)
class LossSplit:
    """Partition of the total linewidth into drive-port and internal losses."""

    kappa_ext: float
    kappa_0: float
    modulated_channel: LossChannel

    def __post_init__(self):
        if self.kappa_ext < 0 or self.kappa_0 < 0:
            raise ParameterError("kappa_ext and kappa_0 must be >= 0")
        if self.modulated_channel is LossChannel.MAIN_TEXT and self.kappa_0 != 0:
            raise ParameterError("the single-port model requires kappa_0 = 0")

    @classmethod
    def main_text(cls, params: SystemParams) -> "LossSplit":
        return cls(params.kappa, 0.0, LossChannel.MAIN_TEXT)

    @classmethod
    def case1(cls, params: SystemParams, kappa_0: float) -> "LossSplit":
        return cls(params.kappa - kappa_0, kappa_0, LossChannel.CASE1_EXTERNAL)

    @classmethod
    def case2(cls, params: SystemParams, kappa_0: float) -> "LossSplit":
        return cls(params.kappa - kappa_0, kappa_0, LossChannel.CASE2_INTERNAL)

    def validate_for(self, params: SystemParams):
        total = self.kappa_ext + self.kappa_0
        if abs(total - params.kappa) > 1e-12 * params.kappa:
            raise ParameterError(
                f"kappa_ext + kappa_0 = {total!r} does not match kappa = {params.kappa!r}"
            )


@dataclass(frozen=True)
class LinearSystem:
    """Drift, noise-input and correlator matrices of the fluctuation system.

    v_dot = drift @ v + noise_input @ xi, with white-noise correlators
    <xi_i(t) xi_j(t')> = correlators[i, j] * delta(t - t').
    """

    drift: np.ndarray
    noise_input: np.ndarray
    correlators: np.ndarray

    def __post_init__(self):
        for m in (self.drift, self.noise_input, self.correlators):
            if m.shape != (4, 4):
                raise ParameterError("all system matrices must be 4x4")
            m.setflags(write=False)


@dataclass(frozen=True)
class Stability:
    stable: bool
    abscissa: float  # max real part of the drift eigenvalues


def build_linear_system(params: SystemParams) -> LinearSystem:
    """Assemble the linearized equations of motion for the single-port model.

    The displacement both pulls the cavity frequency (a_tilde) and modulates
    the linewidth (b_tilde); the latter also injects drive-port noise d_in
    directly into the mechanical force, which is the origin of the Fano
    interference in the force spectrum.
    """
    om, k, g, d = params.omega_m, params.kappa, params.gamma, params.delta
    a = params.a_tilde * params.a_bar
    b = params.b_tilde * params.a_bar
    sk, sg = math.sqrt(k), math.sqrt(g)

    # Displacement-drive coefficient on the cavity equation; the same complex
    # number multiplies d in the force on the mechanics.
    gd = 1j * a * k - (1j * d + k / 2.0) * (b / 2.0)

    drift = np.array(
        [
            [1j * d - k / 2.0, 0.0, gd, gd],
            [0.0, -1j * d - k / 2.0, np.conj(gd), np.conj(gd)],
            [gd, -np.conj(gd), -1j * om - g / 2.0, 0.0],
            [-gd, np.conj(gd), 0.0, 1j * om - g / 2.0],
        ],
        dtype=np.complex128,
    )

    bh = b / 2.0 * sk
    noise = np.array(
        [
            [-sk, 0.0, 0.0, 0.0],
            [0.0, -sk, 0.0, 0.0],
            [-bh, bh, -sg, 0.0],
            [bh, -bh, 0.0, -sg],
        ],
        dtype=np.complex128,
    )

    corr = np.zeros((4, 4))
    corr[0, 1] = 1.0                    # <d_in d_in^dag>, optical vacuum
    corr[2, 3] = params.n_th + 1.0      # <c_in c_in^dag>
    corr[3, 2] = params.n_th            # <c_in^dag c_in>

    return LinearSystem(drift=drift, noise_input=noise, correlators=corr)


def is_stable(sys: LinearSystem) -> Stability:
    """Eigenvalue test of the drift matrix; returns the spectral abscissa too."""
    abscissa = float(np.linalg.eigvals(sys.drift).real.max())
    return Stability(stable=abscissa < 0.0, abscissa=abscissa)
