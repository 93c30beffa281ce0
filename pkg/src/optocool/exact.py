"""Exact steady state of the linearized model.

Spectra are computed per frequency from the transfer matrix of the Fourier-
transformed equations of motion; the phonon number comes independently from a
steady-state Lyapunov solve, and the two routes cross-validate each other.

Conventions: S_AA(omega) = int dt e^{i omega t} <A^dag(t) A(0)>, with
a(omega) = int dt e^{i omega t} a(t).  Then v(omega) = T(omega) xi(omega) with
T(omega) = (-i omega I - A)^{-1} L, and the conjugation symmetry of the
doubled-up system reduces every spectrum to a weighted sum over the columns of
X = T(-omega): S(omega) = sum_k e_k |g_k|^2 with e = (0, 1, n_th, n_th + 1)
and g the relevant output row of X (see the README for the derivation).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._backend import kernels
from .analytic import mechanical_spectrum_approx, phonon_number_analytic
from .errors import (
    EffectiveDampingError,
    IllConditionedError,
    InstabilityError,
    LyapunovError,
    ParameterError,
)
from .model import LinearSystem, SystemParams, build_linear_system, is_stable
from .weakcoupling import quantum_noise_rates

__all__ = [
    "Observable",
    "Tier",
    "SpectrumTrace",
    "spectrum_exact",
    "exact_spectrum_values",
    "steady_covariance",
    "phonon_number_exact",
    "integrate_spectrum",
    "exact_vs_analytic_report",
    "adaptive_omega_grid",
]

COND_LIMIT = 1e12


class Observable(enum.Enum):
    SCC = "scc"              # mechanical spectrum
    SDD_OUT = "sdd-out"      # optical output spectrum (normal-ordered)
    SCC_APPROX = "scc-approx"
    FORCE = "force"


class Tier(enum.Enum):
    QUANTUM_NOISE = "qn"
    ANALYTIC = "analytic"
    EXACT = "exact"


@dataclass(frozen=True)
class SpectrumTrace:
    omega_grid: np.ndarray
    values: np.ndarray
    observable: Observable
    tier: Tier

    def __post_init__(self):
        grid = np.asarray(self.omega_grid, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != vals.shape:
            raise ParameterError("omega_grid and values must be 1-d and aligned")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ParameterError("omega_grid must be strictly increasing")
        if np.any(vals < 0):
            raise ParameterError("spectrum values must be nonnegative")
        object.__setattr__(self, "omega_grid", grid)
        object.__setattr__(self, "values", vals)


def _response_setup(params: SystemParams, observable: Observable):
    weights = np.array([0.0, 1.0, params.n_th, params.n_th + 1.0])
    if observable is Observable.SCC:
        coef = np.array([0.0, 0.0, 1.0, 0.0], dtype=np.complex128)
    elif observable is Observable.SDD_OUT:
        sk = math.sqrt(params.kappa)
        mix = sk * params.b_tilde * params.a_bar / 2.0
        coef = np.array([1.0, sk, mix, mix], dtype=np.complex128)
    else:
        raise ParameterError(f"no exact solver for observable {observable!r}")
    return weights, coef


def exact_spectrum_values(
    params: SystemParams,
    omega,
    observable: Observable = Observable.SCC,
    sys: LinearSystem | None = None,
    check_stability: bool = True,
):
    """Exact spectrum values on an arbitrary frequency array."""
    if sys is None:
        sys = build_linear_system(params)
    if check_stability:
        st = is_stable(sys)
        if not st.stable:
            raise InstabilityError(f"unstable system (abscissa {st.abscissa:g})")
    weights, coef = _response_setup(params, observable)
    scalar = np.ndim(omega) == 0
    omega = np.atleast_1d(np.ascontiguousarray(omega, dtype=float))
    out = np.empty(omega.shape[0])
    bad = kernels.weighted_response_grid(
        sys.drift, sys.noise_input, weights, coef, omega, COND_LIMIT, out
    )
    if bad >= 0:
        raise IllConditionedError(float(omega[bad]))
    return float(out[0]) if scalar else out


def _system_features(params: SystemParams, sys: LinearSystem):
    """(center, width) pairs of the resonances of the drift matrix."""
    eigs = np.linalg.eigvals(sys.drift)
    floor = 1e-9 * params.omega_m
    return [(float(e.imag), max(abs(float(e.real)), floor)) for e in eigs]


def adaptive_omega_grid(params: SystemParams, lo, hi, base_points=801, per_side=60):
    """Frequency grid refined around every resonance of the drift matrix.

    Plain uniform grids miss peaks of width gamma_eff, which can be many
    orders of magnitude narrower than the plot range.
    """
    sys = build_linear_system(params)
    pts = [np.linspace(lo, hi, base_points)]
    for center, width in _system_features(params, sys):
        span = max(hi - lo, 10 * width)
        offs = width * np.geomspace(1e-3, span / width, per_side)
        pts.append(center + np.concatenate([-offs[::-1], [0.0], offs]))
    # Output features sit at the mirrored positions as well.
    for center, width in _system_features(params, sys):
        offs = width * np.geomspace(1e-3, max(hi - lo, 10 * width) / width, per_side)
        pts.append(-center + np.concatenate([-offs[::-1], [0.0], offs]))
    grid = np.unique(np.concatenate(pts))
    return grid[(grid >= lo) & (grid <= hi)]


def spectrum_exact(params: SystemParams, observable: Observable, omega_grid) -> SpectrumTrace:
    """Exact spectrum trace on the given (strictly increasing) grid."""
    values = exact_spectrum_values(params, omega_grid, observable)
    return SpectrumTrace(
        omega_grid=np.asarray(omega_grid, dtype=float),
        values=values,
        observable=observable,
        tier=Tier.EXACT,
    )


def steady_covariance(params: SystemParams) -> np.ndarray:
    """Steady-state covariance V_ij = <v_i v_j^dag> from the Lyapunov equation.

    A V + V A^H + L D L^H = 0 is vectorized into a 16x16 linear system; at
    this size a direct solve is exact and cheap.
    """
    sys = build_linear_system(params)
    st = is_stable(sys)
    if not st.stable:
        raise InstabilityError(f"unstable system (abscissa {st.abscissa:g})")
    if st.abscissa > -1e-12 * params.omega_m:
        raise LyapunovError("Lyapunov solve failed: drift spectrum grazes the imaginary axis")
    a, noise = sys.drift, sys.noise_input
    # <xi_i xi_j^dag> weights: conjugating an input swaps it with its partner.
    d_dag = np.diag([1.0, 0.0, params.n_th + 1.0, params.n_th])
    q = noise @ d_dag @ noise.conj().T
    eye = np.eye(4)
    lhs = np.kron(a, eye) + np.kron(eye, a.conj())
    v = np.linalg.solve(lhs, -q.reshape(16)).reshape(4, 4)
    scale = np.abs(v).max()
    if np.abs(v - v.conj().T).max() > 1e-12 * max(scale, 1.0):
        raise LyapunovError("Lyapunov solve failed: covariance not Hermitian")
    v = (v + v.conj().T) / 2.0
    occupations = v.diagonal().real
    if occupations.min() < -1e-12 * max(scale, 1.0):
        raise LyapunovError("Lyapunov solve failed: negative mode occupation")
    return v


def phonon_number_exact(params: SystemParams) -> float:
    """Exact steady-state mechanical occupation <c^dag c>."""
    return float(steady_covariance(params)[3, 3].real)


def _quad_over_line(f, features, rtol):
    """Integrate f over the real line with breakpoints around each feature."""
    pts = set()
    for center, width in features:
        for mult in (-30.0, -3.0, 0.0, 3.0, 30.0):
            pts.add(center + mult * width)
    pts = sorted(pts)
    segments = [(-np.inf, pts[0])]
    segments += [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    segments.append((pts[-1], np.inf))
    total = 0.0
    for lo, hi in segments:
        val, _ = quad(f, lo, hi, epsabs=1e-300, epsrel=rtol, limit=200)
        total += val
    return total


def integrate_spectrum(params: SystemParams, tier: Tier = Tier.EXACT, rtol=1e-10) -> float:
    """Phonon number as int S_cc(omega) d omega / (2 pi) by adaptive quadrature.

    Independent cross-check of :func:`phonon_number_exact` (exact tier) and of
    the closed-form phonon number (analytic tier).
    """
    if tier is Tier.EXACT:
        sys = build_linear_system(params)
        st = is_stable(sys)
        if not st.stable:
            raise InstabilityError(f"unstable system (abscissa {st.abscissa:g})")
        weights, coef = _response_setup(params, Observable.SCC)
        drift, noise = sys.drift, sys.noise_input
        buf = np.empty(1)
        om = np.empty(1)

        def f(x):
            om[0] = x
            bad = kernels.weighted_response_grid(drift, noise, weights, coef, om, COND_LIMIT, buf)
            if bad >= 0:
                raise IllConditionedError(x)
            return buf[0]

        features = _system_features(params, sys)
    elif tier is Tier.ANALYTIC:
        rates = quantum_noise_rates(params)
        if rates.gamma_eff <= 0.0:
            raise EffectiveDampingError("effective damping nonpositive")

        def f(x):
            return mechanical_spectrum_approx(params, x, rates)

        features = [
            (-params.omega_m, max(rates.gamma_eff, 1e-9 * params.omega_m)),
            (-params.delta, params.kappa / 2.0),
        ]
    else:
        raise ParameterError("integrate_spectrum supports the exact and analytic tiers")
    return _quad_over_line(f, features, rtol) / (2.0 * math.pi)


def exact_vs_analytic_report(params: SystemParams, coupling_grid, which="dissipative"):
    """All three phonon-number tiers on a coupling grid, as aligned arrays.

    Unstable or undamped grid points are flagged instead of computed.
    """
    if which not in ("dissipative", "dispersive"):
        raise ParameterError("which must be 'dissipative' or 'dispersive'")
    if params.a_bar <= 0:
        raise ParameterError("a_bar must be > 0 to sweep a coupling product")
    grid = np.asarray(coupling_grid, dtype=float)
    n_qn = np.full(grid.shape, np.nan)
    n_an = np.full(grid.shape, np.nan)
    n_ex = np.full(grid.shape, np.nan)
    stable = np.zeros(grid.shape, dtype=bool)
    for i, g in enumerate(grid):
        tilde = g / params.a_bar
        p = params.with_(**{("b_tilde" if which == "dissipative" else "a_tilde"): tilde})
        stable[i] = is_stable(build_linear_system(p)).stable
        try:
            res = phonon_number_analytic(p)
            n_qn[i], n_an[i] = res.n_qn, res.n_analytic
        except EffectiveDampingError:
            pass
        if stable[i]:
            n_ex[i] = phonon_number_exact(p)
    return {"coupling": grid, "n_qn": n_qn, "n_analytic": n_an, "n_exact": n_ex, "stable": stable}
