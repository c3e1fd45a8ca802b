"""Batch driver: run configurations, parameter scans, figure-ready data.

Subcommands: ``simulate <config>``, ``scan <config>``, ``fortrat <config>``,
``validate <config>``.  Bundled reference configurations can be named
directly (e.g. ``simulate fig3``).  Exit codes: 0 success, 2 validation
error, 3 physics-regime violation, 4 numerical failure.

The worker count for scans is taken from the ROTCOOL_WORKERS environment
variable.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .classical import (cw_damping_curve, cw_doppler_limit, CwLaser,
                        energy_damping_time, jump_monte_carlo,
                        momentum_diffusion, sech_damping_curve)
from .config import (CurveSection, RunConfig, apply_override, build_dof,
                     build_molecule_spec, build_pulse,
                     build_saturation_context, config_hash, output_times,
                     parse_config)
from .constants import CODATA
from .rates import equilibrium_j0
from .engine import (apply_pulses, build_generator, build_pulse_map,
                     cold_peak_fit_window, observables, peak_psd, propagate,
                     pulse_map_steady_state, steady_state)
from .exceptions import ConfigError, NumericalError, RegimeError
from .structure import (capture_j, line_list, PopulationState,
                        thermal_distribution, write_fortrat_csv)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3
EXIT_NUMERICAL = 4


def bundled_config_path(name: str) -> Path:
    """Path of a bundled reference configuration (e.g. 'fig3')."""
    base = resources.files("rotcool") / "configs" / f"{name}.toml"
    if not base.is_file():
        raise ConfigError(f"no bundled configuration named {name!r}")
    return Path(str(base))


def _resolve_config(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    if p.suffix == "" and "/" not in arg:
        return bundled_config_path(arg)
    raise ConfigError(f"configuration file not found: {arg}")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def _write_json(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _write_manifest(outdir: Path, cfg: RunConfig, files: list[Path]) -> Path:
    manifest = {
        "config_hash": config_hash(cfg),
        "library_version": __version__,
        "files": sorted(f.name for f in files),
        # The timestamp is the only non-deterministic field, isolated here.
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    return _write_json(outdir / "manifest.json", manifest)


def _population_rows(states: list[PopulationState]) -> list[list]:
    rows = []
    for st in states:
        for j, eps, p in zip(st.basis.J, st.basis.eps, st.populations):
            rows.append([st.time, int(j), "e" if eps == 1 else "f", float(p)])
    return rows


def _summarize(state, init_state, spec, cfg: RunConfig,
               equilibrium_window: int | None = None) -> dict:
    obs_cfg = cfg.observables
    window = obs_cfg.fit_j_max
    scope = "configured"
    if window is None:
        if obs_cfg.fit_window == "equilibrium" and equilibrium_window is not None:
            window, scope = equilibrium_window, "equilibrium_J0"
        elif obs_cfg.fit_window == "full":
            window, scope = None, "full"
        else:
            window = cold_peak_fit_window(state, j_cut=obs_cfg.j_cut)
            scope = "cold_peak_auto" if window is not None else "full"
    obs = observables(state, spec, j_cut=obs_cfg.j_cut, j_max_fit=window)
    return {
        "mean_J": obs.mean_j,
        "T_eff_K": obs.t_eff_K,
        "T_fit_K": obs.t_fit_K,
        "peak_PSD": obs.peak_psd,
        "psd_enhancement": obs.peak_psd / peak_psd(init_state),
        "cooled_fraction": obs.cooled_fraction,
        "T_eff_cold_K": obs.t_eff_cold_K,
        "T_fit_window_J": window,
        "T_fit_scope": scope,
        "time_s": None if math.isinf(state.time) else state.time,
        "capture_J": capture_j(spec),
    }


# ---------------------------------------------------------------------------
# Mode runners.  Each returns a summary dict; data files are written only
# when outdir is given (scans run the same code with outdir=None).


def _run_narrowband(cfg: RunConfig, outdir: Path | None,
                    files: list[Path]) -> dict:
    spec = build_molecule_spec(cfg)
    ctx = build_saturation_context(cfg)
    delta = cfg.laser_cw.delta_over_gamma * spec.gamma
    init = thermal_distribution(spec, cfg.run.initial_T_K)
    gen = build_generator(spec, delta, ctx)

    eq_window = None
    if cfg.observables.fit_window == "equilibrium":
        try:
            eq_window = max(6, math.ceil(equilibrium_j0(
                delta, spec.b_lower_hz, spec.gamma, ctx)))
        except ValueError:
            eq_window = None    # no fixed point; fall back to auto

    if cfg.run.steady_state:
        states = [steady_state(gen, init)]
    else:
        states = propagate(gen, init, output_times(cfg), method=cfg.run.method)

    if outdir is not None:
        files.append(_write_csv(outdir / "populations.csv",
                                ["t_s", "J", "eps", "population"],
                                _population_rows([init] + states)))
        obs_rows = []
        for st in states:
            s = _summarize(st, init, spec, cfg, eq_window)
            obs_rows.append([s["time_s"], s["mean_J"], s["T_eff_K"],
                             s["T_fit_K"], s["peak_PSD"],
                             s["psd_enhancement"], s["cooled_fraction"]])
        files.append(_write_csv(outdir / "observables.csv",
                                ["t_s", "mean_J", "T_eff_K", "T_fit_K",
                                 "peak_PSD", "psd_enhancement",
                                 "cooled_fraction"], obs_rows))
        files.append(write_fortrat_csv(line_list(spec), outdir / "fortrat.csv"))
    return _summarize(states[-1], init, spec, cfg, eq_window)


def _run_broadband(cfg: RunConfig, outdir: Path | None,
                   files: list[Path]) -> dict:
    spec = build_molecule_spec(cfg)
    pulse = build_pulse(cfg, spec.gamma)
    init = thermal_distribution(spec, cfg.run.initial_T_K)
    pmap = build_pulse_map(spec, pulse)

    if cfg.run.steady_state:
        states = [pulse_map_steady_state(pmap, init)]
    else:
        states = []
        st, n_done = init, 0
        for t in output_times(cfg):
            n = int(round(t / pulse.rep_period))
            st = apply_pulses(pmap, st, n - n_done, rep_period=pulse.rep_period)
            n_done = n
            states.append(st)

    if outdir is not None:
        files.append(_write_csv(outdir / "populations.csv",
                                ["t_s", "J", "eps", "population"],
                                _population_rows([init] + states)))
        files.append(write_fortrat_csv(line_list(spec), outdir / "fortrat.csv"))
    summary = _summarize(states[-1], init, spec, cfg)
    summary["n_pulses"] = (None if cfg.run.steady_state else
                           int(round(states[-1].time / pulse.rep_period)))
    summary["classical_sech_T_D_K"] = (_sech_limit(pulse.tau_p, pulse.delta)
                                       if pulse.delta < 0 else None)
    return summary


def _sech_limit(tau_p: float, delta: float) -> float:
    return -(CODATA.hbar / (tau_p * CODATA.k_B)) / math.tanh(delta * tau_p / 2.0)


def _run_classical_cw(cfg: RunConfig, outdir: Path | None,
                      files: list[Path]) -> dict:
    laser_cfg = cfg.laser_cw
    curve = cfg.curve if cfg.curve is not None else CurveSection()
    x = np.linspace(-curve.x_max, curve.x_max, curve.n_points)
    net, plus, minus = cw_damping_curve(laser_cfg.s0, laser_cfg.delta_over_gamma, x)
    if outdir is not None:
        files.append(_write_csv(
            outdir / "damping_curve.csv",
            ["kappa_pi_over_mu_gamma", "net_hbar_kappa_gamma",
             "plus_beam_hbar_kappa_gamma", "minus_beam_hbar_kappa_gamma"],
            [[xv, nv, pv, mv] for xv, nv, pv, mv in zip(x, net, plus, minus)]))

    summary: dict = {"s0": laser_cfg.s0,
                     "delta_over_gamma": laser_cfg.delta_over_gamma}
    gamma = (2.0 * math.pi * laser_cfg.gamma_over_2pi_hz
             if laser_cfg.gamma_over_2pi_hz else None)
    if gamma is not None and laser_cfg.delta_over_gamma < 0:
        laser = CwLaser(s0=laser_cfg.s0, delta=laser_cfg.delta_over_gamma * gamma)
        summary["doppler_limit_K"] = cw_doppler_limit(laser, gamma)
        if cfg.dof is not None:
            dof = build_dof(cfg, gamma)
            summary["tau_E_s"] = energy_damping_time(laser, dof, gamma)
            summary["diffusion_si"] = momentum_diffusion(laser, dof, gamma)
            if cfg.monte_carlo is not None:
                mc = cfg.monte_carlo
                t_end = mc.t_end_s if mc.t_end_s is not None else \
                    mc.t_end_tau_e * summary["tau_E_s"]
                result = jump_monte_carlo(dof, laser, mc.n_particles, t_end,
                                          cfg.seed, gamma=gamma,
                                          n_outputs=mc.n_outputs)
                if outdir is not None:
                    files.append(_write_csv(
                        outdir / "monte_carlo.csv",
                        ["t_s", "mean_kinetic_energy_J"],
                        [[t, e] for t, e in zip(result.times,
                                                result.mean_kinetic_energy)]))
                summary["monte_carlo_T_K"] = result.temperature_K
                summary["monte_carlo_events_per_particle"] = result.n_scatter_mean
    return summary


def _run_classical_sech(cfg: RunConfig, outdir: Path | None,
                        files: list[Path]) -> dict:
    p = cfg.laser_pulse
    curve = cfg.curve if cfg.curve is not None else CurveSection(x_max=10.0)
    x = np.linspace(-curve.x_max, curve.x_max, curve.n_points)
    net, plus, minus = sech_damping_curve(p.theta0_rad, p.delta_tau_p, x)
    if outdir is not None:
        files.append(_write_csv(
            outdir / "damping_curve.csv",
            ["kappa_pi_tau_p_over_mu", "net_hbar_kappa_per_Tr",
             "plus_beam_hbar_kappa_per_Tr", "minus_beam_hbar_kappa_per_Tr"],
            [[xv, nv, pv, mv] for xv, nv, pv, mv in zip(x, net, plus, minus)]))
    summary = {"theta0_rad": p.theta0_rad, "delta_tau_p": p.delta_tau_p}
    if p.delta_tau_p < 0:
        summary["doppler_limit_K"] = _sech_limit(p.tau_p_s,
                                                 p.delta_tau_p / p.tau_p_s)
    return summary


def _run_fortrat(cfg: RunConfig, outdir: Path | None,
                 files: list[Path]) -> dict:
    spec = build_molecule_spec(cfg)
    lines = line_list(spec)
    if outdir is not None:
        files.append(write_fortrat_csv(lines, outdir / "fortrat.csv"))
    return {"n_lines": len(lines), "capture_J": capture_j(spec),
            "j_max": spec.j_max}


_RUNNERS = {
    "narrowband": _run_narrowband,
    "broadband": _run_broadband,
    "classical_cw": _run_classical_cw,
    "classical_sech": _run_classical_sech,
    "fortrat": _run_fortrat,
}


def _scan_grid(cfg: RunConfig) -> list[tuple[dict, RunConfig]]:
    scan = cfg.scan
    points = []
    secondary = ([(scan.secondary_parameter, v) for v in scan.secondary_values]
                 if scan.secondary_parameter else [None])
    for sec in secondary:
        for v in scan.values:
            overrides = {scan.parameter: v}
            point_cfg = apply_override(cfg, scan.parameter, v)
            if sec is not None:
                overrides[sec[0]] = sec[1]
                point_cfg = apply_override(point_cfg, sec[0], sec[1])
            points.append((overrides, point_cfg))
    return points


def run_scan(cfg: RunConfig, outdir: Path, files: list[Path]) -> dict:
    """Execute the scan grid concurrently; per-point failures are recorded
    in-row without aborting the scan."""
    runner = _RUNNERS[cfg.base_mode]
    points = _scan_grid(cfg)
    n_workers = int(os.environ.get("ROTCOOL_WORKERS", "0")) or \
        min(4, os.cpu_count() or 1)

    def run_point(item):
        _, point_cfg = item
        try:
            summary = runner(point_cfg, None, [])
            return summary, None
        except Exception as exc:   # recorded in-row
            return None, f"{type(exc).__name__}: {exc}"

    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        results = list(pool.map(run_point, points))

    param_cols = [cfg.scan.parameter]
    if cfg.scan.secondary_parameter:
        param_cols.append(cfg.scan.secondary_parameter)
    value_cols = ["mean_J", "T_eff_K", "T_fit_K", "peak_PSD",
                  "psd_enhancement", "cooled_fraction"]
    if cfg.base_mode == "broadband":
        value_cols.append("classical_sech_T_D_K")
    rows = []
    for (overrides, _), (summary, err) in zip(points, results):
        row = [overrides[c] for c in param_cols]
        if err is None:
            row += [summary.get(c) for c in value_cols]
            row.append("")
        else:
            row += [None] * len(value_cols)
            row.append(err)
        rows.append(row)
    files.append(_write_csv(outdir / "scan.csv",
                            param_cols + value_cols + ["error"], rows))
    n_failed = sum(1 for _, err in results if err)
    return {"n_points": len(points), "n_failed": n_failed,
            "parameters": param_cols}


# ---------------------------------------------------------------------------
# Entry point


def _execute(cfg: RunConfig, outdir: Path) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    if cfg.mode == "scan":
        summary = run_scan(cfg, outdir, files)
    else:
        summary = _RUNNERS[cfg.mode](cfg, outdir, files)
    files.append(_write_json(outdir / "summary.json", summary))
    files.append(_write_manifest(outdir, cfg, files))
    return summary


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rotcool",
        description="Rotational laser-cooling simulations (CW and sech-pulse "
                    "molasses on singlet linear molecules).")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
            ("simulate", "run one simulation configuration"),
            ("scan", "run a parameter scan configuration"),
            ("fortrat", "emit Fortrat line-list data"),
            ("validate", "validate a configuration and exit")]:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("config", help="path to a TOML config, or the name "
                                       "of a bundled one (e.g. fig3)")
        sp.add_argument("--output-dir", default=None,
                        help="override the configured output directory")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(_resolve_config(args.config))
        expected = {"simulate": ("classical_cw", "classical_sech",
                                 "narrowband", "broadband"),
                    "scan": ("scan",),
                    "fortrat": ("fortrat",),
                    "validate": None}[args.command]
        if expected is not None and cfg.mode not in expected:
            raise ConfigError(
                f"mode: config has mode={cfg.mode!r}, but subcommand "
                f"{args.command!r} expects one of {expected}")
        if args.command == "validate":
            print(f"ok: {args.config} (mode={cfg.mode}, "
                  f"hash={config_hash(cfg)})")
            return EXIT_OK
        outdir = Path(args.output_dir or cfg.output.dir)
        summary = _execute(cfg, outdir)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeError as exc:
        print(f"physics-regime violation: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    for key in ("T_eff_K", "T_fit_K", "psd_enhancement", "cooled_fraction",
                "monte_carlo_T_K", "doppler_limit_K", "n_points"):
        if summary.get(key) is not None:
            print(f"{key} = {_fmt(summary[key])}")
    print(f"outputs written to {outdir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
