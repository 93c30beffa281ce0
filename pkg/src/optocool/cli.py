"""Command-line interface: spectra, phonon numbers, sweeps, minimization and
bundled figure presets, with CSV/JSON output.

Exit codes: 0 success, 2 usage/validation error, 3 physics error (instability,
ill-conditioned solve, no stable feasible point).  Every long flag has a
config-file equivalent (flat ``key = value`` lines, keys identical to the
flags); command-line flags override the file.  OPTOCOOL_THREADS caps the
parallelism of grid evaluations.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    mechanical_spectrum_approx,
    n_min_dispersive_limit,
    phonon_number_analytic,
)
from .errors import (
    OptocoolError,
    ParameterError,
    PurelyDispersiveError,
)
from .exact import (
    Observable,
    Tier,
    adaptive_omega_grid,
    exact_spectrum_values,
    phonon_number_exact,
)
from .model import LossSplit, SystemParams, build_linear_system, is_stable
from .sweep import minimize_phonon, sweep_coupling, sweep_detuning, sweep_sideband_minimum
from .weakcoupling import (
    force_spectrum,
    optimal_detuning,
    quantum_noise_rates,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PHYSICS = 3

# flag name -> (dest, converter); single registry so config keys match flags
_PARAM_FLAGS = {
    "omega-m-over-kappa": ("omega_m_over_kappa", float),
    "omega-m-over-gamma": ("omega_m_over_gamma", float),
    "delta": ("delta", float),
    "A": ("A", float),
    "Ba": ("Ba", float),
    "a-bar": ("a_bar", float),
    "nth": ("nth", float),
    "loss-case": ("loss_case", str),
    "kappa0-fraction": ("kappa0_fraction", float),
}
_PARAM_DEFAULTS = {
    "omega_m_over_kappa": 5.0,
    "omega_m_over_gamma": 1e5,
    "delta": 0.5,
    "A": 0.0,
    "Ba": 0.0,
    "a_bar": 1.0,
    "nth": 0.0,
    "loss_case": "main",
    "kappa0_fraction": 0.0,
}
_OPTION_FLAGS = {
    "observable": ("observable", str),
    "tier": ("tier", str),
    "omega-min": ("omega_min", float),
    "omega-max": ("omega_max", float),
    "points": ("points", int),
    "axis": ("axis", str),
    "start": ("start", float),
    "stop": ("stop", float),
    "log": ("log", lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
    "include-exact": ("include_exact", lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
    "free": ("free", lambda s: [t.strip() for t in s.split(",")]),
    "follow-optimal-detuning": ("follow_optimal_detuning",
                                lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
    "format": ("format", str),
    "output": ("output", str),
    "outdir": ("outdir", str),
    "fast": ("fast", lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
}
_ALL_FLAGS = {**_PARAM_FLAGS, **_OPTION_FLAGS}


def _fmt(x) -> str:
    """Shortest round-trip decimal; keeps identical invocations byte-identical."""
    return repr(float(x))


def _add_param_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("system parameters")
    g.add_argument("--omega-m-over-kappa", type=float, default=None,
                   help="sideband parameter omega_m/kappa (default 5)")
    g.add_argument("--omega-m-over-gamma", type=float, default=None,
                   help="mechanical quality omega_m/gamma (default 1e5)")
    g.add_argument("--delta", type=float, default=None,
                   help="drive detuning in units of omega_m (default 0.5)")
    g.add_argument("--A", type=float, default=None,
                   help="dispersive coupling product A|a_bar| (default 0)")
    g.add_argument("--Ba", type=float, default=None,
                   help="dissipative coupling product B|a_bar| (default 0)")
    g.add_argument("--a-bar", type=float, default=None, help="mean cavity amplitude (default 1)")
    g.add_argument("--nth", type=float, default=None, help="thermal phonon number (default 0)")
    g.add_argument("--loss-case", choices=("main", "case1", "case2"), default=None,
                   help="loss-channel model for weak-coupling spectra (default main)")
    g.add_argument("--kappa0-fraction", type=float, default=None,
                   help="internal-loss fraction kappa_0/kappa for case1/case2 (default 0)")


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    p.add_argument("--output", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optocool",
        description="Laser-cooling engine for dispersively and dissipatively "
                    "coupled optomechanics.",
    )
    parser.add_argument("--version", action="version", version=f"optocool {__version__}")
    parser.add_argument("--config", default=None,
                        help="flat key = value config file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="compute a spectrum trace")
    _add_param_flags(p)
    p.add_argument("--observable", choices=[o.value for o in Observable], default=None)
    p.add_argument("--tier", choices=[t.value for t in Tier], default=None)
    p.add_argument("--omega-min", type=float, default=None, help="in units of omega_m")
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    _add_output_flags(p)

    p = sub.add_parser("phonon", help="phonon numbers from all tiers")
    _add_param_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("sweep", help="sweep detuning or a coupling product")
    _add_param_flags(p)
    p.add_argument("--axis", choices=("delta", "dissipative", "dispersive"), default=None)
    p.add_argument("--start", type=float, default=None)
    p.add_argument("--stop", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--log", action="store_true", default=None, help="log-spaced grid")
    p.add_argument("--include-exact", action="store_true", default=None)
    _add_output_flags(p)

    p = sub.add_parser("minimize", help="minimize the phonon number")
    _add_param_flags(p)
    p.add_argument("--free", action="append", choices=("delta", "dispersive", "dissipative"),
                   default=None, help="free variable (repeatable, max 2)")
    p.add_argument("--tier", choices=("qn", "analytic", "simplified", "exact"), default=None)
    p.add_argument("--follow-optimal-detuning", action="store_true", default=None)
    _add_output_flags(p)

    p = sub.add_parser("reproduce", help="write the CSV bundle for a preset study")
    p.add_argument("figure", choices=("fig1a", "fig1b", "fig2a", "fig2b", "fig2c", "fig3"))
    p.add_argument("--outdir", default=None)
    p.add_argument("--fast", action="store_true", default=None, help="coarser grids")

    return parser


def _load_config(path: str) -> dict:
    values = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _ALL_FLAGS:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        dest, conv = _ALL_FLAGS[key]
        try:
            values[dest] = conv(val)
        except ValueError as exc:
            raise ParameterError(f"{path}:{lineno}: bad value for {key!r}: {exc}") from exc
    return values


def _resolve(args, defaults: dict, config: dict):
    for dest, fallback in defaults.items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, config.get(dest, fallback))


def _params_from_args(args) -> SystemParams:
    return SystemParams.from_ratios(
        omega_m_over_kappa=args.omega_m_over_kappa,
        omega_m_over_gamma=args.omega_m_over_gamma,
        delta=args.delta,
        dispersive=args.A,
        dissipative=args.Ba,
        n_th=args.nth,
        a_bar=args.a_bar,
    )


def _split_from_args(args, params: SystemParams) -> LossSplit | None:
    if args.loss_case == "main":
        return None
    frac = args.kappa0_fraction
    if not 0.0 <= frac <= 1.0:
        raise ParameterError("kappa0-fraction must be in [0, 1]")
    maker = LossSplit.case1 if args.loss_case == "case1" else LossSplit.case2
    return maker(params, frac * params.kappa)


def _emit(text: str, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating)) else str(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def _cmd_spectrum(args) -> int:
    params = _params_from_args(args)
    split = _split_from_args(args, params)
    observable = Observable(args.observable)
    tier = Tier(args.tier)
    if args.points is not None and args.points < 2:
        raise ParameterError("points must be >= 2")
    if args.points is None:
        grid = adaptive_omega_grid(params, args.omega_min, args.omega_max)
    else:
        grid = np.linspace(args.omega_min, args.omega_max, args.points)

    if observable is Observable.FORCE:
        values = force_spectrum(params, split, grid)
    elif observable is Observable.SDD_OUT:
        if tier is not Tier.EXACT:
            raise ParameterError("sdd-out is only available from the exact tier")
        values = exact_spectrum_values(params, grid, observable)
    elif observable is Observable.SCC_APPROX or (
        observable is Observable.SCC and tier is Tier.ANALYTIC
    ):
        values = mechanical_spectrum_approx(params, grid)
    elif observable is Observable.SCC and tier is Tier.QUANTUM_NOISE:
        rates = quantum_noise_rates(params, split)
        res = phonon_number_analytic(params)  # validates gamma_eff > 0
        chi_sq = 1.0 / ((res.rates.gamma_eff / 2.0) ** 2 + (grid + params.omega_m) ** 2)
        values = chi_sq * (params.gamma * params.n_th + rates.gamma_up)
    else:
        values = exact_spectrum_values(params, grid, observable)

    if args.format == "json":
        payload = {
            "observable": observable.value,
            "tier": tier.value,
            "omega": [float(w) for w in grid],
            "value": [float(v) for v in values],
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(_csv(zip(grid, values), ["omega", "value"]), args.output)
    return EXIT_OK


def _cmd_phonon(args) -> int:
    params = _params_from_args(args)
    split = _split_from_args(args, params)
    stability = is_stable(build_linear_system(params))
    rates = quantum_noise_rates(params, split)
    report: dict = {
        "stable": stability.stable,
        "abscissa": stability.abscissa,
        "gamma_up": rates.gamma_up,
        "gamma_down": rates.gamma_down,
        "gamma_eff": rates.gamma_eff,
    }
    try:
        report["delta_opt"] = optimal_detuning(params)
    except PurelyDispersiveError:
        report["delta_opt"] = None
        report["delta_opt_note"] = "undefined for purely dispersive coupling"
    if rates.gamma_eff > 0:
        res = phonon_number_analytic(params)
        report.update(
            n_qn=res.n_qn,
            n_analytic=res.n_analytic,
            term_thermal=res.term_thermal,
            term_qn_like=res.term_qn_like,
            term_beyond=res.term_beyond,
        )
    else:
        report["qn_note"] = "quantum-noise unstable: gamma_eff <= 0"
    report["n_exact"] = phonon_number_exact(params) if stability.stable else None

    if args.format == "json":
        _emit(json.dumps(report, indent=2) + "\n", args.output)
    else:
        lines = []
        for key, val in report.items():
            if isinstance(val, bool) or val is None or isinstance(val, str):
                lines.append(f"{key} = {val}")
            else:
                lines.append(f"{key} = {_fmt(val)}")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    params = _params_from_args(args)
    if args.points < 1:
        raise ParameterError("points must be >= 1")
    if args.log:
        if args.start <= 0 or args.stop <= 0:
            raise ParameterError("log grids need positive start/stop")
        grid = np.geomspace(args.start, args.stop, args.points)
    else:
        grid = np.linspace(args.start, args.stop, args.points)
    if args.axis == "delta":
        result = sweep_detuning(params, grid * params.omega_m,
                                include_exact=args.include_exact)
    else:
        result = sweep_coupling(params, grid, which=args.axis,
                                include_exact=args.include_exact)
    names = [k for k in result.traces if k != "stable"]
    header = [result.axis_name] + names + ["stable"]
    rows = []
    for i, x in enumerate(result.axis_values):
        rows.append([x] + [result.traces[k][i] for k in names]
                    + [int(result.traces["stable"][i])])
    if args.format == "json":
        payload = {"axis": result.axis_name,
                   "axis_values": [float(v) for v in result.axis_values],
                   "traces": {k: [None if math.isnan(float(v)) else float(v) for v in tr]
                              for k, tr in result.traces.items()}}
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(_csv(rows, header), args.output)
    return EXIT_OK


def _cmd_minimize(args) -> int:
    params = _params_from_args(args)
    free = args.free or ["dissipative"]
    result = minimize_phonon(params, free, tier=args.tier,
                             follow_optimal_detuning=bool(args.follow_optimal_detuning))
    payload = {"tier": result.tier, "n_min": result.n_min,
               "point": result.point, "coarse_n_min": result.coarse_n_min,
               "n_evaluations": result.n_evaluations}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        lines = [f"tier = {result.tier}", f"n_min = {_fmt(result.n_min)}"]
        lines += [f"{k} = {_fmt(v)}" for k, v in result.point.items()]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# preset studies


def _write_trace(outdir: Path, name: str, grid, values) -> str:
    path = outdir / f"{name}.csv"
    path.write_text(_csv(zip(grid, values), ["omega", "value"]))
    return path.name


def _reproduce_fig1a(outdir: Path, fast: bool) -> dict:
    params = SystemParams.from_ratios(5.0, 1e5, delta=0.5, dissipative=0.2, n_th=100.0)
    grid = adaptive_omega_grid(params, -2.0, 2.0,
                               base_points=401 if fast else 1601,
                               per_side=30 if fast else 80)
    res = phonon_number_analytic(params)
    chi_sq = 1.0 / ((res.rates.gamma_eff / 2.0) ** 2 + (grid + params.omega_m) ** 2)
    sff = force_spectrum(params, None, grid)
    files = [
        _write_trace(outdir, "fig1a_scc_exact",
                     grid, exact_spectrum_values(params, grid, Observable.SCC)),
        _write_trace(outdir, "fig1a_scc_approx", grid, mechanical_spectrum_approx(params, grid)),
        _write_trace(outdir, "fig1a_scc_thermal_term", grid,
                     chi_sq * params.gamma * params.n_th),
        _write_trace(outdir, "fig1a_scc_backaction_term", grid, chi_sq * sff),
        _write_trace(outdir, "fig1a_force_spectrum", grid, sff),
    ]
    return {"files": files,
            "parameters": {"A|a|": 0.0, "B|a|": 0.2, "delta/omega_m": 0.5,
                           "omega_m/kappa": 5.0, "omega_m/gamma": 1e5, "n_th": 100.0}}


def _reproduce_fig1b(outdir: Path, fast: bool) -> dict:
    cases = [
        ("fig1b_sddout_dissipative_weak", dict(dissipative=0.01, delta=0.5)),
        ("fig1b_sddout_dissipative_strong", dict(dissipative=0.2, delta=0.5)),
        ("fig1b_sddout_dispersive", dict(dispersive=0.2, delta=-1.0)),
    ]
    files = []
    manifest_params = {}
    for name, kw in cases:
        params = SystemParams.from_ratios(5.0, 1e5, n_th=100.0, **kw)
        grid = adaptive_omega_grid(params, -2.0, 2.0,
                                   base_points=401 if fast else 1601,
                                   per_side=30 if fast else 80)
        files.append(_write_trace(outdir, name, grid,
                                  exact_spectrum_values(params, grid, Observable.SDD_OUT)))
        manifest_params[name] = {**kw, "omega_m/kappa": 5.0, "omega_m/gamma": 1e5,
                                 "n_th": 100.0}
    return {"files": files, "parameters": manifest_params}


def _reproduce_fig2a(outdir: Path, fast: bool) -> dict:
    params = SystemParams.from_ratios(3.0, 3e5, delta=0.5, n_th=100.0)
    grid = np.geomspace(1e-3, 0.6, 30 if fast else 120)
    result = sweep_coupling(params, grid, which="dissipative", include_exact=True)
    header = ["coupling", "n_qn", "n_analytic", "n_exact", "stable"]
    rows = [[g, result.traces["n_qn"][i], result.traces["n_analytic"][i],
             result.traces["n_exact"][i], int(result.traces["stable"][i])]
            for i, g in enumerate(grid)]
    (outdir / "fig2a_phonon_vs_coupling.csv").write_text(_csv(rows, header))
    return {"files": ["fig2a_phonon_vs_coupling.csv"],
            "parameters": {"A|a|": 0.0, "delta/omega_m": 0.5, "omega_m/kappa": 3.0,
                           "omega_m/gamma": 3e5, "n_th": 100.0}}


def _reproduce_fig2bc(outdir: Path, fast: bool, closeup: bool) -> dict:
    params = SystemParams.from_ratios(3.0, 1e7, dissipative=0.2, n_th=100.0)
    if closeup:
        grid = np.linspace(0.3, 0.7, 101 if fast else 401)
        result = sweep_detuning(params, grid, include_exact=True)
        name = "fig2c_phonon_vs_detuning_closeup.csv"
        cols = ["n_qn", "n_analytic", "n_exact"]
    else:
        grid = np.linspace(-2.0, 2.0, 501 if fast else 2001)
        result = sweep_detuning(params, grid, include_exact=False)
        name = "fig2b_phonon_vs_detuning.csv"
        cols = ["n_analytic", "term_qn_like", "term_beyond"]
    header = ["delta"] + cols + ["stable"]
    rows = [[g] + [result.traces[c][i] for c in cols] + [int(result.traces["stable"][i])]
            for i, g in enumerate(grid)]
    (outdir / name).write_text(_csv(rows, header))
    return {"files": [name],
            "parameters": {"A|a|": 0.0, "B|a|": 0.2, "omega_m/kappa": 3.0,
                           "omega_m/gamma": 1e7, "n_th": 100.0}}


def _reproduce_fig3(outdir: Path, fast: bool) -> dict:
    base = SystemParams(omega_m=1.0, kappa=0.2, gamma=0.2 / 1e5, n_th=100.0)
    grid = np.geomspace(0.5, 100.0, 9 if fast else 21)
    include_exact = not fast
    files = []
    params_used = {"n_th": 100.0, "kappa/gamma": 1e5}
    for mode in ("dissipative", "dispersive", "mixed"):
        result = sweep_sideband_minimum(base, grid, mode, include_exact=include_exact,
                                        coarse_points=25)
        header = ["omega_m_over_kappa", "n_min_closed", "n_min_exact", "opt_failed"]
        rows = [[g, result.traces["n_min_closed"][i], result.traces["n_min_exact"][i],
                 int(result.traces["opt_failed"][i])] for i, g in enumerate(grid)]
        name = f"fig3_nmin_{mode}.csv"
        (outdir / name).write_text(_csv(rows, header))
        files.append(name)
    return {"files": files, "parameters": params_used}


_FIGURES = {
    "fig1a": _reproduce_fig1a,
    "fig1b": _reproduce_fig1b,
    "fig2a": _reproduce_fig2a,
    "fig2b": lambda outdir, fast: _reproduce_fig2bc(outdir, fast, closeup=False),
    "fig2c": lambda outdir, fast: _reproduce_fig2bc(outdir, fast, closeup=True),
    "fig3": _reproduce_fig3,
}


def _cmd_reproduce(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _FIGURES[args.figure](outdir, bool(args.fast))
    manifest["figure"] = args.figure
    (outdir / f"{args.figure}_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    sys.stdout.write(f"wrote {len(manifest['files'])} trace files to {outdir}\n")
    return EXIT_OK


_COMMANDS = {
    "spectrum": (_cmd_spectrum, {**_PARAM_DEFAULTS, "observable": "scc", "tier": "exact",
                                 "omega_min": -2.0, "omega_max": 2.0, "points": None,
                                 "format": "csv", "output": None}),
    "phonon": (_cmd_phonon, {**_PARAM_DEFAULTS, "format": "csv", "output": None}),
    "sweep": (_cmd_sweep, {**_PARAM_DEFAULTS, "axis": "delta", "start": -2.0, "stop": 2.0,
                           "points": 2001, "log": False, "include_exact": False,
                           "format": "csv", "output": None}),
    "minimize": (_cmd_minimize, {**_PARAM_DEFAULTS, "free": None, "tier": "analytic",
                                 "follow_optimal_detuning": False, "format": "csv",
                                 "output": None}),
    "reproduce": (_cmd_reproduce, {"outdir": ".", "fast": False}),
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler, defaults = _COMMANDS[args.command]
    try:
        config = _load_config(args.config) if args.config else {}
        _resolve(args, defaults, config)
        return handler(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OptocoolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
