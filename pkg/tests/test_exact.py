"""Unit tests for the exact spectra, Lyapunov steady state and quadrature."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optocool import (
    IllConditionedError,
    InstabilityError,
    Observable,
    ParameterError,
    SpectrumTrace,
    SystemParams,
    Tier,
    adaptive_omega_grid,
    exact_spectrum_values,
    integrate_spectrum,
    phonon_number_exact,
    spectrum_exact,
    steady_covariance,
)
from conftest import random_stable_params


def test_spectrum_trace_validation():
    with pytest.raises(ParameterError):
        SpectrumTrace(np.array([0.0, 1.0]), np.array([1.0]), Observable.SCC, Tier.EXACT)
    with pytest.raises(ParameterError):
        SpectrumTrace(np.array([1.0, 0.0]), np.array([1.0, 1.0]), Observable.SCC, Tier.EXACT)
    with pytest.raises(ParameterError):
        SpectrumTrace(np.array([0.0, 1.0]), np.array([1.0, -1.0]), Observable.SCC, Tier.EXACT)


def test_decoupled_mechanics_is_thermal():
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-3, n_th=12.0, delta=-0.4)
    grid = np.linspace(-2.0, 2.0, 801)
    vals = exact_spectrum_values(p, grid, Observable.SCC)
    thermal = p.gamma * p.n_th / ((p.gamma / 2.0) ** 2 + (grid + p.omega_m) ** 2)
    np.testing.assert_allclose(vals, thermal, rtol=1e-10)
    assert phonon_number_exact(p) == pytest.approx(p.n_th, rel=1e-10)


def test_output_spectrum_fano_dip():
    p = SystemParams.from_ratios(5.0, 1e5, delta=0.5, dissipative=0.2, n_th=100.0)
    grid = adaptive_omega_grid(p, -2.0, 2.0)
    vals = exact_spectrum_values(p, grid, Observable.SDD_OUT)
    assert np.all(vals >= 0.0)
    at_plus = exact_spectrum_values(p, p.omega_m, Observable.SDD_OUT)
    assert at_plus <= 1e-10 * vals.max()


def test_output_spectrum_dispersive_sidebands():
    # purely dispersive red-detuned drive: peaks at both +/- omega_m
    p = SystemParams.from_ratios(5.0, 1e5, delta=-1.0, dispersive=0.2, n_th=100.0)
    grid = adaptive_omega_grid(p, -2.0, 2.0)
    vals = exact_spectrum_values(p, grid, Observable.SDD_OUT)
    for target in (-1.0, 1.0):
        window = np.abs(grid - target) < 0.3
        peak_at = grid[window][np.argmax(vals[window])]
        assert peak_at == pytest.approx(target, abs=0.02)


def test_instability_raises():
    p = SystemParams.from_ratios(3.0, 1e7, delta=-0.3, dissipative=0.2, n_th=100.0)
    with pytest.raises(InstabilityError):
        spectrum_exact(p, Observable.SCC, np.linspace(-2.0, 2.0, 11))
    with pytest.raises(InstabilityError):
        steady_covariance(p)


def test_ill_conditioned_solve_raises():
    # nearly undamped mechanics: the resolvent blows up right on resonance
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-13)
    with pytest.raises(IllConditionedError) as exc:
        exact_spectrum_values(p, np.array([-1.0]), Observable.SCC)
    assert exc.value.omega == pytest.approx(-1.0)


def test_covariance_properties():
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-4, delta=0.5,
                     b_tilde=0.2, a_tilde=0.05, n_th=30.0)
    v = steady_covariance(p)
    assert np.abs(v - v.conj().T).max() <= 1e-12 * np.abs(v).max()
    assert v.diagonal().real.min() >= -1e-12 * np.abs(v).max()


def test_lyapunov_vs_quadrature_single_point():
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-5, delta=0.5,
                     b_tilde=0.2, n_th=100.0)
    n_lyap = phonon_number_exact(p)
    n_quad = integrate_spectrum(p, tier=Tier.EXACT, rtol=1e-11)
    assert n_quad == pytest.approx(n_lyap, rel=1e-8)


def test_adaptive_grid_resolves_narrow_peak():
    p = SystemParams.from_ratios(5.0, 1e7, delta=0.5, n_th=100.0)
    grid = adaptive_omega_grid(p, -2.0, 2.0)
    vals = exact_spectrum_values(p, grid, Observable.SCC)
    uniform = np.linspace(-2.0005, 2.0005, len(grid))
    vals_uniform = exact_spectrum_values(p, uniform, Observable.SCC)
    # the mechanical peak is orders of magnitude above anything a uniform
    # grid of the same size can see
    assert vals.max() > 1e3 * vals_uniform.max()
    assert np.all(np.diff(grid) > 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_exact_spectra_nonnegative(seed):
    rng = np.random.default_rng(seed)
    (p,) = random_stable_params(rng, 1)
    grid = np.sort(rng.uniform(-3.0, 3.0, size=64))
    for obs in (Observable.SCC, Observable.SDD_OUT):
        assert np.all(exact_spectrum_values(p, grid, obs) >= 0.0)


def test_scalar_frequency_input():
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-4, n_th=5.0)
    v = exact_spectrum_values(p, -1.0, Observable.SCC)
    assert isinstance(v, float)
