"""Command-line interface: JSON config in, CSV data (and optional SVG) out.

Subcommands: ``spectrum``, ``sweep-detuning``, ``sweep-gamma``, ``ep``,
``steady-state``.  Exit codes: 0 success, 2 configuration error,
3 numerical failure (the failing stage is named on stderr).

Every run writes ``manifest.json`` (config echo, tool version, truncation
used, wall time, warnings).  Re-running with ``--config manifest.json``
reproduces the data files byte-for-byte; the manifest itself differs only
in its wall-time field.  All energies in files are meV; detunings are
reported both in meV and nm.  Floats are printed with 12 significant
digits.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .blocks import NoCoalescenceInRange, ep_locate_numeric
from .hilbert import DEFAULT_PARAMS, FockTruncation, SystemParams
from .liouvillian import full_liouvillian
from .spectrum import emission_spectrum, extract_peaks
from .steadystate import choose_truncation, solve_steady_state
from .sweeps import classify_peak, detuning_sweep, gamma_sweep

__all__ = ["main", "load_config", "ConfigError", "DEFAULT_CONFIG"]


class ConfigError(Exception):
    pass


DEFAULT_CONFIG: dict = {
    "schema_version": 1,
    "params": {
        "omega_c": DEFAULT_PARAMS.omega_c,
        "omega_x": DEFAULT_PARAMS.omega_x,
        "g": DEFAULT_PARAMS.g,
        "kappa": DEFAULT_PARAMS.kappa,
        "gamma_x": DEFAULT_PARAMS.gamma_x,
        "P_x": DEFAULT_PARAMS.P_x,
        "gamma_theta": DEFAULT_PARAMS.gamma_theta,
    },
    "n_max": "auto",
    "spectrum": {"half_width_meV": 0.6, "n_points": 4001, "prominence_floor": 0.001},
    "sweep_detuning": {"delta_min_meV": -0.5, "delta_max_meV": 0.5, "count": 81},
    "sweep_gamma": {"gamma_max_over_g": 4.5, "count": 241, "n_rungs": 50, "ep_rungs": [1, 2, 3, 4, 5]},
    "ep": {"rungs": [1, 2, 3, 4, 5]},
}


def _merge_strict(defaults, user, path: str = ""):
    """Deep-merge user config onto defaults, rejecting unknown keys."""
    if not isinstance(user, dict):
        raise ConfigError(f"config section '{path or '<root>'}' must be an object")
    merged = copy.deepcopy(defaults)
    for key, value in user.items():
        if key not in defaults:
            raise ConfigError(f"unknown config key '{path + key}'")
        if isinstance(defaults[key], dict):
            merged[key] = _merge_strict(defaults[key], value, path + key + ".")
        else:
            merged[key] = value
    return merged


def load_config(path: str | None) -> dict:
    """Read and validate a config (or manifest) JSON document."""
    raw: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if isinstance(raw, dict) and raw.get("tool") == "jcphonon" and "config" in raw:
            raw = raw["config"]  # re-run from a manifest
    cfg = _merge_strict(DEFAULT_CONFIG, raw)
    if cfg["schema_version"] != 1:
        raise ConfigError(f"unsupported schema_version {cfg['schema_version']!r}")
    for key, value in cfg["params"].items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"params.{key} must be a number, got {value!r}")
    try:
        params_of(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    nm = cfg["n_max"]
    if not (nm == "auto" or (isinstance(nm, int) and not isinstance(nm, bool) and nm >= 1)):
        raise ConfigError(f"n_max must be 'auto' or a positive integer, got {nm!r}")
    return cfg


def params_of(cfg: dict) -> SystemParams:
    return SystemParams(**cfg["params"])


def _resolve_trunc(cfg: dict, p: SystemParams) -> FockTruncation:
    return choose_truncation(p) if cfg["n_max"] == "auto" else FockTruncation(cfg["n_max"])


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_manifest(out: Path, command: str, cfg: dict, n_max: int | None,
                    wall: float, warnings: list[str], outputs: list[str]) -> None:
    manifest = {
        "tool": "jcphonon",
        "version": __version__,
        "command": command,
        "config": cfg,
        "n_max": n_max,
        "wall_time_s": wall,
        "warnings": warnings,
        "outputs": outputs,
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _save_plot(fig, path: Path) -> None:
    fig.savefig(path, metadata={"Date": None})


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "jcphonon"
    return plt


# ---------------------------------------------------------------- commands


def cmd_spectrum(cfg: dict, out: Path, plots: bool, threads: int) -> tuple[int | None, list[str], list[str]]:
    p = params_of(cfg)
    sc = cfg["spectrum"]
    trunc = _resolve_trunc(cfg, p)
    s = emission_spectrum(p, trunc=trunc, half_width=sc["half_width_meV"], n_points=sc["n_points"])
    peaks = extract_peaks(s, sc["prominence_floor"])

    _write_csv(out / "spectrum.csv", ["omega_meV", "intensity"], zip(s.omega_grid, s.values))
    _write_csv(
        out / "peaks.csv",
        ["position_meV", "height", "fwhm_meV", "prominence"],
        ((pk.position, pk.height, pk.fwhm, pk.prominence) for pk in peaks),
    )
    files = ["spectrum.csv", "peaks.csv"]
    if plots:
        plt = _plt()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(s.omega_grid, s.values, lw=1.2)
        for pk in peaks:
            ax.axvline(pk.position, color="0.7", ls="--", lw=0.7)
        ax.set_xlabel("energy (meV)")
        ax.set_ylabel("intensity (arb. units)")
        _save_plot(fig, out / "spectrum.svg")
        plt.close(fig)
        files.append("spectrum.svg")
    return s.n_max, [], files


def cmd_sweep_detuning(cfg: dict, out: Path, plots: bool, threads: int):
    p = params_of(cfg)
    sd = cfg["sweep_detuning"]
    sc = cfg["spectrum"]
    trunc = _resolve_trunc(cfg, p.replace(omega_x=p.omega_c))
    points = detuning_sweep(
        p,
        delta_range=(sd["delta_min_meV"], sd["delta_max_meV"]),
        count=sd["count"],
        trunc=trunc,
        half_width=sc["half_width_meV"],
        n_points=sc["n_points"],
        prominence_floor=sc["prominence_floor"],
        workers=threads,
    )
    warnings = []
    rows = []
    for i, pt in enumerate(points):
        if pt.error is not None:
            warnings.append(f"point {i} (delta={pt.delta_energy:.6g} meV) failed: {pt.error}")
            continue
        pp = p.replace(omega_x=p.omega_c + pt.delta_energy)
        for pk in pt.peaks:
            rows.append(
                (pt.delta_energy, pt.delta_lambda, pk.position, pk.height, pk.fwhm, classify_peak(pk, pp))
            )
    _write_csv(
        out / "detuning_peaks.csv",
        ["delta_meV", "delta_lambda_nm", "peak_position_meV", "height", "fwhm_meV", "branch_tag"],
        rows,
    )
    files = ["detuning_peaks.csv"]
    if plots:
        plt = _plt()
        fig, ax = plt.subplots(figsize=(5, 5))
        tags = {"lower": ("o", "tab:blue"), "upper": ("o", "tab:olive"), "central": ("+", "tab:red")}
        for tag, (marker, color) in tags.items():
            xs = [r[1] for r in rows if r[5] == tag]
            ys = [r[2] for r in rows if r[5] == tag]
            ax.plot(xs, ys, marker, color=color, ms=4, ls="none", label=tag)
        ax.set_xlabel("detuning (nm)")
        ax.set_ylabel("peak position (meV)")
        ax.legend(fontsize=8)
        _save_plot(fig, out / "detuning.svg")
        plt.close(fig)
        files.append("detuning.svg")
    return trunc.n_max, warnings, files


def cmd_sweep_gamma(cfg: dict, out: Path, plots: bool, threads: int):
    p = params_of(cfg)
    sg = cfg["sweep_gamma"]
    sc = cfg["spectrum"]
    trunc = None if cfg["n_max"] == "auto" else FockTruncation(cfg["n_max"])
    res = gamma_sweep(
        p,
        gamma_max=sg["gamma_max_over_g"] * p.g,
        n_grid=sg["count"],
        n_rungs=sg["n_rungs"],
        ep_rungs=tuple(sg["ep_rungs"]),
        trunc=trunc,
        half_width=sc["half_width_meV"],
        n_points=sc["n_points"],
    )
    d = res.diag
    gog = d.gamma_grid / p.g
    rungs = range(1, d.n_rungs + 1)

    _write_csv(
        out / "frequencies.csv",
        ["gamma_over_g"] + [f"omega_mm_over_g_n{n}" for n in rungs] + [f"omega_mp_over_g_n{n}" for n in rungs],
        (
            (gog[i], *(d.lam_mm[n, i].imag / p.g for n in rungs), *(d.lam_mp[n, i].imag / p.g for n in rungs))
            for i in range(gog.size)
        ),
    )
    _write_csv(
        out / "e_param.csv",
        ["gamma_over_g"] + [f"E_n{n}" for n in rungs if n != 2],
        ((gog[i], *(d.E_n[n, i] for n in rungs if n != 2)) for i in range(gog.size)),
    )
    _write_csv(
        out / "coefficients.csv",
        ["gamma_over_g"] + [f"C00_sq_n{n}" for n in rungs] + [f"C11_sq_n{n}" for n in rungs],
        ((gog[i], *(d.C00_sq[n, i] for n in rungs), *(d.C11_sq[n, i] for n in rungs)) for i in range(gog.size)),
    )
    _write_csv(
        out / "g_function.csv",
        ["gamma_over_g", "G", "dG_dgamma"],
        zip(gog, d.G_values, d.dG_values),
    )
    ratio_rungs = [n for n in rungs if 3 <= n <= 10]
    _write_csv(
        out / "eq3_ratio.csv",
        ["gamma_over_g"] + [f"ratio_n{n}" for n in ratio_rungs],
        ((gog[i], *(d.eq3_ratio[n, i] for n in ratio_rungs)) for i in range(gog.size)),
    )
    _write_csv(
        out / "ep_table.csv",
        ["n", "gamma_numeric_meV", "gamma_formula_meV", "numeric_over_g", "formula_over_g", "rel_deviation"],
        (
            (
                r.n,
                r.gamma_theta_critical_numeric,
                r.gamma_theta_critical_formula,
                r.gamma_theta_critical_numeric / p.g,
                r.gamma_theta_critical_formula / p.g,
                abs(r.gamma_theta_critical_formula - r.gamma_theta_critical_numeric)
                / r.gamma_theta_critical_numeric,
            )
            for r in res.ep_table
        ),
    )
    files = [
        "frequencies.csv",
        "e_param.csv",
        "coefficients.csv",
        "g_function.csv",
        "eq3_ratio.csv",
        "ep_table.csv",
    ]
    n_max_used = None
    for tag, gth, s in res.spectra_at:
        name = f"showcase_{tag}.csv"
        _write_csv(out / name, ["omega_meV", "intensity"], zip(s.omega_grid, s.values))
        files.append(name)
        n_max_used = s.n_max

    warnings = list(d.warnings)
    if plots:
        plt = _plt()
        fig, axes = plt.subplots(3, 1, figsize=(6, 9), sharex=True)
        for n in rungs:
            color = {1: "tab:red", 2: "tab:blue"}.get(n, "0.6")
            axes[0].plot(gog, d.lam_mm[n].imag / p.g, color=color, lw=0.8)
            axes[0].plot(gog, d.lam_mp[n].imag / p.g, color=color, lw=0.8)
            if n != 2:
                axes[1].plot(gog, d.E_n[n], color=color, lw=0.8)
            axes[2].plot(gog, d.C00_sq[n], color=color, lw=0.8)
            if n >= 2:
                axes[2].plot(gog, d.C11_sq[n], color=color, lw=0.8, ls="--")
        for r in res.ep_table:
            for ax in axes:
                ax.axvline(r.gamma_theta_critical_numeric / p.g, color="0.3", ls=":", lw=0.7)
        axes[0].set_ylabel("frequencies / g")
        axes[1].set_ylabel("linewidth log-ratio")
        axes[2].set_ylabel("|C|^2")
        axes[2].set_xlabel("gamma_theta / g")
        _save_plot(fig, out / "gamma_panels.svg")
        plt.close(fig)
        files.append("gamma_panels.svg")
    return n_max_used, warnings, files


def cmd_ep(cfg: dict, out: Path, plots: bool, threads: int):
    p = params_of(cfg)
    rungs = cfg["ep"]["rungs"]
    if not rungs:
        raise ConfigError("ep.rungs must be a non-empty list of rung indices")
    rows = []
    warnings = []
    print(f"{'n':>3} {'numeric (meV)':>15} {'formula (meV)':>15} {'numeric/g':>10} {'rel dev':>9}")
    for n in rungs:
        try:
            r = ep_locate_numeric(int(n), p)
        except NoCoalescenceInRange as exc:
            warnings.append(f"rung {n}: {exc}")
            print(f"{n:>3} {'(no coalescence in range)':>15}")
            continue
        dev = abs(r.gamma_theta_critical_formula - r.gamma_theta_critical_numeric) / r.gamma_theta_critical_numeric
        print(
            f"{r.n:>3} {r.gamma_theta_critical_numeric:>15.6g} {r.gamma_theta_critical_formula:>15.6g} "
            f"{r.gamma_theta_critical_numeric / p.g:>10.4g} {dev:>9.2%}"
        )
        rows.append((r.n, r.gamma_theta_critical_numeric, r.gamma_theta_critical_formula, dev))
    _write_csv(out / "ep_table.csv", ["n", "gamma_numeric_meV", "gamma_formula_meV", "rel_deviation"], rows)
    return None, warnings, ["ep_table.csv"]


def cmd_steady_state(cfg: dict, out: Path, plots: bool, threads: int):
    p = params_of(cfg)
    trunc = _resolve_trunc(cfg, p)
    L = full_liouvillian(p, trunc, frame_shift=p.omega_c)
    res = solve_steady_state(L)
    print(f"n_max                = {trunc.n_max}")
    print(f"residual             = {res.residual:.3e}")
    print(f"photon number <a+a>  = {res.photon_number:.10g}")
    print(f"exciton population   = {res.exciton_population:.10g}")
    rows = []
    for n in range(trunc.n_max + 1):
        rows.append((n, res.rho_ss[2 * n, 2 * n].real, res.rho_ss[2 * n + 1, 2 * n + 1].real))
    _write_csv(out / "populations.csv", ["n_photons", "pop_qubit0", "pop_qubit1"], rows)
    return trunc.n_max, [], ["populations.csv"]


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep-detuning": cmd_sweep_detuning,
    "sweep-gamma": cmd_sweep_gamma,
    "ep": cmd_ep,
    "steady-state": cmd_steady_state,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="jcphonon",
        description="Dissipative Jaynes-Cummings simulator with phonon-assisted coupling.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS), help="what to run")
    parser.add_argument("--config", default=None, help="JSON config (or manifest) path")
    parser.add_argument("--out", default="jcphonon-out", help="output directory")
    parser.add_argument("--plots", action="store_true", help="also write SVG plots")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    parser.add_argument("--nmax", default=None, help="Fock cutoff (integer or 'auto')")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.nmax is not None:
            cfg["n_max"] = "auto" if args.nmax == "auto" else int(args.nmax)
            cfg = load_config_dict(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out)
    t0 = time.perf_counter()
    try:
        out.mkdir(parents=True, exist_ok=True)
        n_max, warnings, files = _COMMANDS[args.command](cfg, out, args.plots, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"numerical failure in stage '{args.command}': {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    wall = time.perf_counter() - t0
    _write_manifest(out, args.command, cfg, n_max, wall, warnings, files)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def load_config_dict(cfg: dict) -> dict:
    """Re-validate an already-merged config dictionary."""
    return _merge_strict(DEFAULT_CONFIG, cfg)


if __name__ == "__main__":
    sys.exit(main())
