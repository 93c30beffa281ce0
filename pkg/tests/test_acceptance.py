"""Acceptance gate: one test (and one printed pass/fail line) per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
detail lines).  Tolerances are pinned; do not loosen them to make a failing
criterion pass.
"""
import math
import time

import numpy as np
import pytest

from optocool import (
    LossSplit,
    Observable,
    SystemParams,
    Tier,
    adaptive_omega_grid,
    exact_spectrum_values,
    integrate_spectrum,
    minimize_phonon,
    n_min_dispersive_limit,
    n_min_dissipative,
    n_min_mixed,
    phonon_number_exact,
    steady_covariance,
    sweep_coupling,
    sweep_detuning,
)
from optocool.analytic import phonon_number_analytic, phonon_number_simplified
from optocool.weakcoupling import (
    force_spectrum_case1,
    force_spectrum_case2,
    force_spectrum_main,
    optimal_detuning,
    phonon_number_qn,
    quantum_noise_rates,
)
from conftest import random_stable_params

# Reference configurations used by several criteria.
SIDEBAND_5 = SystemParams.from_ratios(5.0, 1e5, delta=0.5, dissipative=0.2, n_th=100.0)
SMALL_COUPLING = SystemParams.from_ratios(3.0, 3e5, delta=0.5, dissipative=0.01, n_th=100.0)


def _report(ok: bool, label: str, detail: str):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def test_criterion_01_fano_zero():
    p = SIDEBAND_5
    force_spectrum_main(p, -p.omega_m)  # warm-up
    t0 = time.perf_counter()
    up = force_spectrum_main(p, -p.omega_m)
    down = force_spectrum_main(p, p.omega_m)
    elapsed = time.perf_counter() - t0
    ok = up <= 1e-12 * down and elapsed < 1e-3
    _report(ok, "criterion 1 (Fano zero)",
            f"S(-omega_m)/S(+omega_m) = {up / down:.3e} (limit 1e-12), "
            f"runtime {elapsed * 1e3:.3f} ms (limit 1 ms)")


def test_criterion_02_closed_form_equals_integral():
    rng = np.random.default_rng(20260823)
    sets = random_stable_params(rng, 100, require_damped=True)
    t0 = time.perf_counter()
    worst = 0.0
    for p in sets:
        n_closed = phonon_number_analytic(p).n_analytic
        n_int = integrate_spectrum(p, tier=Tier.ANALYTIC, rtol=1e-10)
        worst = max(worst, abs(n_closed - n_int) / n_int)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 10.0
    _report(ok, "criterion 2 (closed form = integral)",
            f"worst relative deviation {worst:.3e} over 100 random stable sets "
            f"(limit 1e-6), runtime {elapsed:.2f} s (limit 10 s)")


def test_criterion_03_tier_agreement_small_coupling():
    p = SMALL_COUPLING
    res = phonon_number_analytic(p)
    n_exact = phonon_number_exact(p)
    d_qn = abs(res.n_analytic - res.n_qn) / res.n_analytic
    d_ex = abs(n_exact - res.n_analytic) / res.n_analytic
    ok = d_qn <= 0.05 and d_ex <= 0.02
    _report(ok, "criterion 3 (tier agreement, small coupling)",
            f"|n_an - n_qn|/n = {d_qn:.3%} (limit 5%), "
            f"|n_ex - n_an|/n = {d_ex:.3%} (limit 2%)")


def test_criterion_04_finite_minimum_vs_qn_monotonicity():
    p = SMALL_COUPLING.with_(b_tilde=0.0)
    grid = np.geomspace(1e-3, 0.6, 60)
    res = sweep_coupling(p, grid, which="dissipative", include_exact=False)
    n_qn = res.traces["n_qn"]
    n_an = res.traces["n_analytic"]
    monotone = bool(np.all(np.diff(n_qn) < 0))
    i_min = int(np.argmin(n_an))
    interior = 0 < i_min < len(grid) - 1
    opt = n_min_dissipative(p)
    found = minimize_phonon(p, ("dissipative",), tier="analytic")
    d_val = abs(found.n_min - opt.n_min) / opt.n_min
    d_cpl = abs(found.point["dissipative"] - math.sqrt(opt.coupling_sq)) / math.sqrt(opt.coupling_sq)
    ok = monotone and interior and d_val <= 0.05 and d_cpl <= 0.05
    _report(ok, "criterion 4 (finite minimum vs QN monotonicity)",
            f"n_qn strictly decreasing: {monotone}; interior minimum: {interior}; "
            f"value off closed form by {d_val:.3%}, coupling by {d_cpl:.3%} (limits 5%)")


def test_criterion_05_cooling_asymptotes():
    p_diss = SystemParams(omega_m=1.0, kappa=0.01, gamma=0.01 / 1e5, n_th=100.0)
    d1 = abs(n_min_dissipative(p_diss).n_min - 0.047428) / 0.047428
    p_mix = SystemParams(omega_m=1.0, kappa=0.2, gamma=0.2 / 1e5, n_th=100.0)
    d2 = abs(n_min_mixed(p_mix).n_min - 0.0031622) / 0.0031622
    lim = n_min_dispersive_limit(p_mix)
    d3 = abs(lim - 0.0025)
    ok = d1 <= 0.01 and d2 <= 0.01 and d3 <= 4 * np.finfo(float).eps
    _report(ok, "criterion 5 (cooling asymptotes)",
            f"dissipative off by {d1:.3e}, mixed off by {d2:.3e} (limits 1%), "
            f"dispersive limit {lim!r} vs 0.0025 (machine precision)")


def test_criterion_06_mixed_coupling_optimum():
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=0.2 / 1e5, n_th=100.0)
    res = minimize_phonon(p, ("dissipative", "dispersive"), tier="simplified",
                          follow_optimal_detuning=True)
    b = res.point["dissipative"]
    a = res.point["dispersive"]
    ratio = a * p.kappa / b
    d_ratio = abs(ratio - (-1.5 * p.omega_m)) / (1.5 * p.omega_m)
    delta_opt = optimal_detuning(p.with_(a_tilde=a, b_tilde=b))
    d_delta = abs(delta_opt - (-p.omega_m)) / p.omega_m
    ok = d_ratio <= 1e-6 and d_delta <= 1e-6
    _report(ok, "criterion 6 (mixed-coupling optimum)",
            f"A*kappa/B = {ratio:.9f} off -3*omega_m/2 by {d_ratio:.3e} (limit 1e-6); "
            f"delta_opt = {delta_opt:.9f} off -omega_m by {d_delta:.3e}")


def test_criterion_07_output_spectrum_morphology():
    p = SIDEBAND_5  # strongly driven dissipative case
    grid = adaptive_omega_grid(p, -2.0, 2.0, base_points=2001, per_side=80)
    vals = exact_spectrum_values(p, grid, Observable.SDD_OUT)
    w_max = grid[np.argmax(vals)]
    global_ok = abs(w_max + p.omega_m) <= 0.02 * p.omega_m
    dip = exact_spectrum_values(p, p.omega_m, Observable.SDD_OUT)
    dip_ok = dip <= 1e-10 * vals.max()
    side_ok = True
    widths = []
    for target in (-0.5, 0.5):
        dense = np.linspace(target - 0.35, target + 0.35, 7001)
        dvals = exact_spectrum_values(p, dense, Observable.SDD_OUT)
        ipk = int(np.argmax(dvals))
        local_max = 0 < ipk < len(dense) - 1
        peak_at = dense[ipk]
        side_ok &= local_max and abs(peak_at - target) <= 0.05 * abs(target)
        half = dvals[ipk] / 2.0
        above = dvals >= half
        left = dense[:ipk][~above[:ipk]]
        right = dense[ipk:][~above[ipk:]]
        fwhm = (right[0] if len(right) else dense[-1]) - (left[-1] if len(left) else dense[0])
        widths.append(fwhm)
        side_ok &= abs(fwhm - p.kappa) <= 0.2 * p.kappa
    ok = global_ok and dip_ok and side_ok
    _report(ok, "criterion 7 (output-spectrum morphology)",
            f"global max at {w_max:.4f} (want -1 within 2%); dip/max = "
            f"{dip / vals.max():.3e} (limit 1e-10); side-peak widths "
            f"{widths[0]:.4f}, {widths[1]:.4f} vs kappa = {p.kappa} (20% tol)")


def test_criterion_08_detuning_sweep_structure():
    p = SystemParams.from_ratios(3.0, 1e7, dissipative=0.2, n_th=100.0)
    grid = np.linspace(-2.0, 2.0, 2001)
    res = sweep_detuning(p, grid)
    stable = res.traces["stable"].astype(bool)
    n = res.traces["n_analytic"]
    cooling = stable & (np.nan_to_num(n, nan=np.inf) < p.n_th / 10.0)
    # contiguous cooling windows
    windows = []
    i = 0
    while i < len(cooling):
        if cooling[i]:
            j = i
            while j + 1 < len(cooling) and cooling[j + 1]:
                j += 1
            windows.append((grid[i], grid[j]))
            i = j + 1
        else:
            i += 1
    two_windows = len(windows) == 2
    contains = (two_windows and windows[0][0] <= -1.0 <= windows[0][1]
                and windows[1][0] <= 0.5 <= windows[1][1])
    # unstable points must separate the two windows
    if two_windows:
        gap = (grid > windows[0][1]) & (grid < windows[1][0])
        separated = bool(np.any(~stable[gap]))
    else:
        separated = False
    unstable_exists = bool(np.any(~stable))
    ok = two_windows and contains and separated and unstable_exists
    _report(ok, "criterion 8 (detuning-sweep structure)",
            f"cooling windows: {[(round(float(a), 3), round(float(b), 3)) for a, b in windows]} "
            f"(want exactly two, containing -1 and 0.5), unstable separation: {separated}")


def test_criterion_09_loss_channel_properties():
    p = SystemParams(omega_m=1.0, kappa=0.3, gamma=1e-5, delta=-0.4,
                     a_tilde=0.1, b_tilde=0.25)
    omega = np.linspace(-3.0, 3.0, 1201)
    main = force_spectrum_main(p, omega)
    c1 = force_spectrum_case1(p, LossSplit.case1(p, 0.0), omega)
    rel1 = np.max(np.abs(c1 - main) / np.maximum(main, 1e-300 * main.max() + 1e-300))
    split2 = LossSplit.case2(p, 0.4 * p.kappa)
    flat = force_spectrum_case2(p.with_(a_tilde=0.0), split2, omega)
    spread = (flat.max() - flat.min()) / flat.max()
    both = force_spectrum_case2(p, split2, np.linspace(-50.0, 50.0, 20001))
    ok = rel1 <= 1e-14 and spread <= 1e-12 and both.min() > 0.0
    _report(ok, "criterion 9 (loss-channel properties)",
            f"case1@kappa0=0 vs main: {rel1:.3e} (limit 1e-14); case2 pure-dissipative "
            f"spread {spread:.3e} (limit 1e-12); case2 mixed minimum {both.min():.3e} > 0")


def test_criterion_10_method_cross_check():
    rng = np.random.default_rng(17)
    sets = random_stable_params(rng, 50)
    t0 = time.perf_counter()
    worst = 0.0
    worst_herm = 0.0
    for p in sets:
        v = steady_covariance(p)
        worst_herm = max(worst_herm,
                         float(np.abs(v - v.conj().T).max() / max(np.abs(v).max(), 1.0)))
        n_lyap = float(v[3, 3].real)
        n_int = integrate_spectrum(p, tier=Tier.EXACT, rtol=1e-9)
        worst = max(worst, abs(n_lyap - n_int) / n_lyap)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-4 and worst_herm <= 1e-12 and elapsed < 30.0
    _report(ok, "criterion 10 (method cross-check)",
            f"worst Lyapunov-vs-quadrature deviation {worst:.3e} (limit 1e-4), "
            f"worst Hermiticity defect {worst_herm:.3e} (limit 1e-12), "
            f"runtime {elapsed:.2f} s (limit 30 s)")


def test_criterion_11_sign_symmetry():
    p = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-4, delta=-0.8,
                     a_tilde=0.1, b_tilde=0.15, n_th=10.0)
    flipped = p.with_(a_tilde=-p.a_tilde, b_tilde=-p.b_tilde)
    tiers = {
        "qn": phonon_number_qn,
        "analytic": lambda q: phonon_number_analytic(q).n_analytic,
        "simplified": phonon_number_simplified,
        "exact": phonon_number_exact,
    }
    worst = 0.0
    for fn in tiers.values():
        worst = max(worst, abs(fn(p) - fn(flipped)) / fn(p))
    pure = SystemParams(omega_m=1.0, kappa=0.2, gamma=1e-5, delta=0.5,
                        b_tilde=0.2, n_th=100.0)
    for fn in tiers.values():
        worst = max(worst, abs(fn(pure) - fn(pure.with_(b_tilde=-0.2))) / fn(pure))
    ok = worst <= 1e-12
    _report(ok, "criterion 11 (sign symmetry)",
            f"worst relative change under coupling sign flips {worst:.3e} (limit 1e-12)")
