"""Parameter scans: detuning sweeps of the full spectrum and coupling sweeps
of the block diagnostics, plus energy/wavelength conversion.

Detuning is realized by scanning the exciton frequency at fixed cavity
frequency (the physical tuning knob of the modelled experiment).  Sweep
points are independent and may run in a process pool; outputs are ordered
and identical to a serial run.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from .blocks import DptDiagnostics, EpResult, dpt_diagnostics, ep_locate_numeric
from .hilbert import FockTruncation, SystemParams
from .spectrum import Peak, Spectrum, emission_spectrum, extract_peaks
from .steadystate import choose_truncation

__all__ = [
    "HC_MEV_NM",
    "NonpositiveEnergy",
    "DetuningPoint",
    "GammaSweepResult",
    "wavelength_of",
    "detuning_sweep",
    "gamma_sweep",
    "classify_peak",
]

#: hc in meV*nm: lambda[nm] = HC_MEV_NM / E[meV]
HC_MEV_NM = 1239841.984


class NonpositiveEnergy(Exception):
    pass


def wavelength_of(energy_mev: float) -> float:
    """Vacuum wavelength in nm of a transition energy in meV."""
    if energy_mev <= 0:
        raise NonpositiveEnergy(f"energy must be positive, got {energy_mev!r} meV")
    return HC_MEV_NM / energy_mev


@dataclass(frozen=True)
class DetuningPoint:
    delta_energy: float  # omega_x - omega_c (meV)
    delta_lambda: float  # lambda_x - lambda_c (nm)
    spectrum: Spectrum | None
    peaks: list[Peak] | None
    error: str | None = None


@dataclass(frozen=True)
class GammaSweepResult:
    diag: DptDiagnostics
    ep_table: list[EpResult]
    spectra_at: list[tuple[str, float, Spectrum]]  # (tag, gamma_theta, spectrum)


def classify_peak(peak: Peak, p: SystemParams) -> str:
    """Tag a peak as the cavity-pinned central line or a polariton branch.

    Central: within half its width of the cavity frequency.  Otherwise
    lower/upper relative to the mean of the bare frequencies.
    """
    if abs(peak.position - p.omega_c) <= 0.5 * peak.fwhm:
        return "central"
    return "lower" if peak.position < 0.5 * (p.omega_c + p.omega_x) else "upper"


def _detuning_point(
    p: SystemParams,
    delta: float,
    trunc: FockTruncation,
    half_width: float,
    n_points: int,
    prominence_floor: float,
) -> DetuningPoint:
    pd = p.replace(omega_x=p.omega_c + delta)
    dlam = wavelength_of(pd.omega_x) - wavelength_of(pd.omega_c)
    try:
        s = emission_spectrum(pd, trunc=trunc, half_width=half_width, n_points=n_points)
        return DetuningPoint(delta, dlam, s, extract_peaks(s, prominence_floor))
    except Exception as exc:  # per-point failures recorded, sweep continues
        return DetuningPoint(delta, dlam, None, None, error=f"{type(exc).__name__}: {exc}")


def detuning_sweep(
    p: SystemParams,
    delta_range: tuple[float, float] = (-0.5, 0.5),
    count: int = 81,
    *,
    trunc: FockTruncation | None = None,
    half_width: float = 0.6,
    n_points: int = 4001,
    prominence_floor: float = 0.01,
    workers: int = 1,
) -> list[DetuningPoint]:
    """Full-generator spectrum and peaks at each detuning point.

    The truncation is chosen once at resonance (the highest-occupation
    point) and shared by all points so that parallel and serial runs
    produce identical results.
    """
    if count < 2:
        raise ValueError(f"need at least 2 sweep points, got {count}")
    deltas = np.linspace(delta_range[0], delta_range[1], count)
    if trunc is None:
        trunc = choose_truncation(p.replace(omega_x=p.omega_c))
    args = [(p, float(d), trunc, half_width, n_points, prominence_floor) for d in deltas]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_detuning_point_star, args))
    return [_detuning_point(*a) for a in args]


def _detuning_point_star(a) -> DetuningPoint:
    return _detuning_point(*a)


def gamma_sweep(
    p: SystemParams,
    gamma_max: float | None = None,
    n_grid: int = 241,
    n_rungs: int = 50,
    *,
    ep_rungs: tuple[int, ...] = (1, 2, 3, 4, 5),
    trunc: FockTruncation | None = None,
    half_width: float = 0.6,
    n_points: int = 4001,
) -> GammaSweepResult:
    """Block diagnostics over a coupling grid plus showcase spectra.

    Diagnostics (critical points, linewidth ladder, coefficients) come
    from the gain-free blocks; the four showcase spectra are computed with
    the full master equation at the located critical couplings
    gamma_theta^(3), gamma_theta^(2), the intermediate value 1.57 g, and
    gamma_theta^(1).
    """
    if gamma_max is None:
        gamma_max = 4.5 * p.g
    grid = np.linspace(1e-6 * p.g, gamma_max, n_grid)
    diag = dpt_diagnostics(p, grid, n_rungs=n_rungs)
    ep_table = [ep_locate_numeric(n, p) for n in ep_rungs]
    eps = {r.n: r.gamma_theta_critical_numeric for r in ep_table}

    showcase: list[tuple[str, float]] = []
    if 3 in eps:
        showcase.append(("ep3", eps[3]))
    if 2 in eps:
        showcase.append(("ep2", eps[2]))
    showcase.append(("mid", 1.57 * p.g))
    if 1 in eps:
        showcase.append(("ep1", eps[1]))

    spectra = []
    for tag, gth in showcase:
        ps = p.replace(gamma_theta=gth)
        tr = trunc if trunc is not None else choose_truncation(ps)
        spectra.append((tag, gth, emission_spectrum(ps, trunc=tr, half_width=half_width, n_points=n_points)))
    return GammaSweepResult(diag=diag, ep_table=ep_table, spectra_at=spectra)
