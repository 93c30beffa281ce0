"""Parameter sweeps and phonon-number minimization.

Stability of a sweep point is always judged by the exact drift-matrix
criterion; the weak-coupling gamma_eff > 0 notion can disagree near the
boundaries and such points are flagged as tier-discrepant, not errors.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import (
    n_min_dispersive_limit,
    n_min_dissipative,
    n_min_mixed,
    phonon_number_analytic,
    phonon_number_simplified,
)
from .errors import (
    EffectiveDampingError,
    LyapunovError,
    NoInteriorMinimumError,
    NoStablePointError,
    ParameterError,
    PurelyDispersiveError,
)
from .exact import phonon_number_exact
from .model import SystemParams, build_linear_system, is_stable
from .weakcoupling import optimal_detuning, phonon_number_qn

__all__ = [
    "SweepResult",
    "MinimizeResult",
    "golden_section",
    "sweep_detuning",
    "sweep_coupling",
    "sweep_sideband_minimum",
    "minimize_phonon",
]

FREE_VARS = ("delta", "dispersive", "dissipative")
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepResult:
    axis_name: str
    axis_values: np.ndarray
    traces: dict[str, np.ndarray]
    fixed_params: SystemParams

    def __post_init__(self):
        n = len(self.axis_values)
        for name, tr in self.traces.items():
            if len(tr) != n:
                raise ParameterError(f"trace {name!r} not aligned with the axis")


@dataclass(frozen=True)
class MinimizeResult:
    point: dict[str, float]
    n_min: float
    tier: str
    coarse_n_min: float
    n_evaluations: int


def max_threads() -> int:
    env = os.environ.get("OPTOCOOL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _pmap(fn, items, threads=None):
    threads = max_threads() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _bracket_minimum(f, x0, f0, step, max_expand=80):
    """Expand around x0 until the middle of (a, x0, b) is the lowest point."""
    a, b = x0 - step, x0 + step
    fa, fb = f(a), f(b)
    for _ in range(max_expand):
        if f0 <= fa and f0 <= fb:
            return a, b
        if fa < fb:
            b, fb = x0, f0
            x0, f0 = a, fa
            a = x0 - 2.0 * (b - x0)
            fa = f(a)
        else:
            a, fa = x0, f0
            x0, f0 = b, fb
            b = x0 + 2.0 * (x0 - a)
            fb = f(b)
    return a, b


def golden_section(f, lo, hi, tol=1e-12, max_iter=300):
    """Golden-section minimization of a unimodal scalar function on [lo, hi]."""
    c = hi - (hi - lo) * _INVPHI
    d = lo + (hi - lo) * _INVPHI
    fc, fd = f(c), f(d)
    scale = max(1.0, abs(lo), abs(hi))
    for _ in range(max_iter):
        if hi - lo <= tol * scale:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - (hi - lo) * _INVPHI
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + (hi - lo) * _INVPHI
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _point_record(params: SystemParams, include_exact: bool) -> dict:
    rec: dict[str, float] = {}
    st = is_stable(build_linear_system(params))
    rec["stable"] = float(st.stable)
    rec["abscissa"] = st.abscissa
    try:
        res = phonon_number_analytic(params)
        rec["n_qn"] = res.n_qn
        rec["n_analytic"] = res.n_analytic
        rec["term_qn_like"] = res.term_qn_like
        rec["term_beyond"] = res.term_beyond
        qn_damped = True
    except EffectiveDampingError:
        rec["n_qn"] = rec["n_analytic"] = math.nan
        rec["term_qn_like"] = rec["term_beyond"] = math.nan
        qn_damped = False
    rec["tier_discrepant"] = float(st.stable != qn_damped)
    if include_exact:
        rec["n_exact"] = phonon_number_exact(params) if st.stable else math.nan
    return rec


def _assemble(axis_name, grid, records, params) -> SweepResult:
    traces = {k: np.array([r[k] for r in records]) for k in records[0]}
    return SweepResult(axis_name=axis_name, axis_values=np.asarray(grid, dtype=float),
                       traces=traces, fixed_params=params)


def sweep_detuning(params: SystemParams, delta_grid, include_exact=False, threads=None) -> SweepResult:
    grid = np.asarray(delta_grid, dtype=float)
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise ParameterError("delta grid must be finite and nonempty")
    records = _pmap(lambda d: _point_record(params.with_(delta=float(d)), include_exact),
                    grid, threads)
    return _assemble("delta", grid, records, params)


def sweep_coupling(params: SystemParams, coupling_grid, which="dissipative",
                   include_exact=True, threads=None) -> SweepResult:
    if which not in ("dissipative", "dispersive"):
        raise ParameterError("which must be 'dissipative' or 'dispersive'")
    if params.a_bar <= 0:
        raise ParameterError("a_bar must be > 0 to sweep a coupling product")
    grid = np.asarray(coupling_grid, dtype=float)
    if grid.size == 0 or not np.all(np.isfinite(grid)):
        raise ParameterError("coupling grid must be finite and nonempty")
    fieldname = "b_tilde" if which == "dissipative" else "a_tilde"

    def rec(g):
        return _point_record(params.with_(**{fieldname: float(g) / params.a_bar}), include_exact)

    return _assemble(which, grid, _pmap(rec, grid, threads), params)


def _tier_value(params: SystemParams, tier: str) -> float:
    if tier == "qn":
        return phonon_number_qn(params)
    if tier == "analytic":
        return phonon_number_analytic(params).n_analytic
    if tier == "simplified":
        return phonon_number_simplified(params)
    if tier == "exact":
        return phonon_number_exact(params)
    raise ParameterError(f"unknown tier {tier!r}")


def minimize_phonon(
    params: SystemParams,
    free_vars,
    tier="analytic",
    *,
    follow_optimal_detuning=False,
    couple_ratio=None,
    delta_bounds=None,
    coupling_bounds=(1e-4, 10.0),
    coarse_points=None,
    refine_tol=1e-10,
    max_passes=100,
) -> MinimizeResult:
    """Minimize the phonon number over up to two free variables.

    Free variables are ``delta`` (absolute detuning) and the coupling products
    ``dispersive`` (A|a|, signed) and ``dissipative`` (B|a|, positive).  With
    ``follow_optimal_detuning`` the detuning tracks the Fano-zero condition at
    every trial point; ``couple_ratio`` slaves a_tilde to
    couple_ratio * b_tilde (used for the ideally mixed coupling).  Coarse grid
    scan first, then golden-section coordinate descent; points that fail the
    exact stability criterion are excluded from the feasible set.
    """
    free_vars = tuple(free_vars)
    if not 1 <= len(free_vars) <= 2 or any(v not in FREE_VARS for v in free_vars):
        raise ParameterError(f"free_vars must be 1-2 of {FREE_VARS}")
    if len(set(free_vars)) != len(free_vars):
        raise ParameterError("free_vars must be distinct")
    if params.a_bar <= 0 and any(v != "delta" for v in free_vars):
        raise ParameterError("a_bar must be > 0 to optimize a coupling product")
    if coarse_points is None:
        coarse_points = 200 if len(free_vars) == 1 else 60
    evals = 0

    def build(point: dict) -> SystemParams | None:
        p = params
        if "dissipative" in point:
            p = p.with_(b_tilde=point["dissipative"] / p.a_bar)
        if "dispersive" in point:
            p = p.with_(a_tilde=point["dispersive"] / p.a_bar)
        if couple_ratio is not None:
            p = p.with_(a_tilde=couple_ratio * p.b_tilde)
        if "delta" in point:
            p = p.with_(delta=point["delta"])
        if follow_optimal_detuning:
            try:
                p = p.with_(delta=optimal_detuning(p))
            except PurelyDispersiveError:
                return None
        return p

    def objective(point: dict) -> float:
        nonlocal evals
        evals += 1
        p = build(point)
        if p is None:
            return math.inf
        if not is_stable(build_linear_system(p)).stable:
            return math.inf
        try:
            return _tier_value(p, tier)
        except (EffectiveDampingError, LyapunovError):
            return math.inf

    lo_c, hi_c = coupling_bounds
    if delta_bounds is None:
        delta_bounds = (-2.0 * params.omega_m, 2.0 * params.omega_m)

    def coarse_grid(var):
        if var == "delta":
            return np.linspace(delta_bounds[0], delta_bounds[1], coarse_points)
        if var == "dissipative":
            return np.geomspace(lo_c, hi_c, coarse_points)
        mags = np.geomspace(lo_c, hi_c, max(coarse_points // 2, 8))
        return np.concatenate([-mags[::-1], [0.0], mags])

    grids = [coarse_grid(v) for v in free_vars]
    best_point = None
    best_val = math.inf
    best_idx = None
    if len(free_vars) == 1:
        for i, x in enumerate(grids[0]):
            val = objective({free_vars[0]: float(x)})
            if val < best_val:
                best_val, best_point, best_idx = val, {free_vars[0]: float(x)}, (i,)
    else:
        for i, x in enumerate(grids[0]):
            for j, y in enumerate(grids[1]):
                val = objective({free_vars[0]: float(x), free_vars[1]: float(y)})
                if val < best_val:
                    best_val = val
                    best_point = {free_vars[0]: float(x), free_vars[1]: float(y)}
                    best_idx = (i, j)
    if best_point is None or not math.isfinite(best_val):
        raise NoStablePointError("no stable feasible point in the scan region")
    coarse_min = best_val

    # Per-variable initial steps are the coarse-grid spacing around the best
    # point (log-space for the positive dissipative coupling).  Each line
    # search first expands downhill to bracket the minimum, so a too-small
    # step never traps the descent away from the optimum.
    steps = {}
    for axis, var in enumerate(free_vars):
        g = grids[axis]
        i = best_idx[axis]
        lo_n = float(g[max(i - 1, 0)])
        hi_n = float(g[min(i + 1, len(g) - 1)])
        if var == "dissipative":
            steps[var] = max(math.log(hi_n / lo_n) / 2.0, 1e-12)
        else:
            steps[var] = max((hi_n - lo_n) / 2.0, 1e-12 * params.omega_m)

    # When both couplings are free the valley floor runs along a joint
    # rescaling of the two products; add that as an explicit search direction
    # so coordinate descent does not crawl along it.
    directions = list(free_vars)
    if set(free_vars) == {"dissipative", "dispersive"}:
        directions.append("scale")
        steps["scale"] = 0.2

    point = dict(best_point)
    stagnant = 0
    for _ in range(max_passes):
        val_before = best_val
        for var in directions:
            if var == "scale":
                def f(t):
                    trial = {"dissipative": point["dissipative"] * math.exp(t),
                             "dispersive": point["dispersive"] * math.exp(t)}
                    return objective(trial)

                a, b = _bracket_minimum(f, 0.0, best_val, steps[var])
                t_best, v_best = golden_section(f, a, b, tol=1e-13)
                if v_best <= best_val:
                    point["dissipative"] *= math.exp(t_best)
                    point["dispersive"] *= math.exp(t_best)
                    best_val = v_best
                steps[var] = max((b - a) * 0.25, 1e-12)
                continue
            log_space = var == "dissipative"
            t0 = math.log(point[var]) if log_space else point[var]

            def f(t, _var=var, _log=log_space):
                trial = dict(point)
                trial[_var] = math.exp(t) if _log else t
                return objective(trial)

            a, b = _bracket_minimum(f, t0, best_val, steps[var])
            t_best, v_best = golden_section(f, a, b, tol=1e-13)
            if v_best <= best_val:
                point[var] = math.exp(t_best) if log_space else t_best
                best_val = v_best
            floor = 1e-12 if log_space else 1e-12 * max(1.0, abs(point[var]))
            steps[var] = max((b - a) * 0.25, floor)
        if val_before - best_val <= refine_tol * max(abs(best_val), 1e-300):
            stagnant += 1
            if stagnant >= 2:
                break
        else:
            stagnant = 0

    return MinimizeResult(point=point, n_min=best_val, tier=tier,
                          coarse_n_min=coarse_min, n_evaluations=evals)


def sweep_sideband_minimum(base_params: SystemParams, sideband_grid, mode,
                           include_exact=True, coarse_points=40) -> SweepResult:
    """Minimal phonon number vs the sideband parameter omega_m/kappa.

    n_th and kappa/gamma are taken from ``base_params`` and held fixed.  Each
    point reports the closed-form minimum for the given coupling mode and,
    optionally, a numerically optimized minimum from the exact tier.
    """
    if mode not in ("dissipative", "dispersive", "mixed"):
        raise ParameterError("mode must be 'dissipative', 'dispersive' or 'mixed'")
    grid = np.asarray(sideband_grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ParameterError("sideband grid must be positive")
    kappa_over_gamma = base_params.kappa / base_params.gamma
    records = []
    for sb in grid:
        kappa = base_params.omega_m / sb
        p = base_params.with_(kappa=kappa, gamma=kappa / kappa_over_gamma,
                              a_tilde=0.0, b_tilde=0.0)
        rec = {"n_min_closed": math.nan, "coupling_sq_closed": math.nan,
               "n_min_exact": math.nan, "opt_failed": 0.0}
        try:
            if mode == "dissipative":
                opt = n_min_dissipative(p)
                rec["n_min_closed"], rec["coupling_sq_closed"] = opt.n_min, opt.coupling_sq
            elif mode == "mixed":
                opt = n_min_mixed(p)
                rec["n_min_closed"], rec["coupling_sq_closed"] = opt.n_min, opt.coupling_sq
            else:
                rec["n_min_closed"] = n_min_dispersive_limit(p)
        except NoInteriorMinimumError:
            rec["opt_failed"] = 1.0
        if include_exact:
            try:
                if mode == "dissipative":
                    res = minimize_phonon(p.with_(delta=p.omega_m / 2.0), ("dissipative",),
                                          tier="exact", coarse_points=coarse_points)
                elif mode == "mixed":
                    ratio = -1.5 * p.omega_m / p.kappa
                    res = minimize_phonon(p, ("dissipative",), tier="exact",
                                          couple_ratio=ratio, follow_optimal_detuning=True,
                                          coarse_points=coarse_points)
                else:
                    res = minimize_phonon(p, ("delta", "dispersive"), tier="exact",
                                          delta_bounds=(-2.0 * p.omega_m, 0.0),
                                          coarse_points=coarse_points)
                rec["n_min_exact"] = res.n_min
            except NoStablePointError:
                rec["opt_failed"] = 1.0
        records.append(rec)
    return _assemble("omega_m_over_kappa", grid, records, base_params)
