"""Emission spectrum from the stationary field autocorrelation.

The two-time correlation <a+(tau) a(0)> is propagated with the same
generator as the single-time dynamics (regression property of Markovian
master equations): with L = R diag(lambda) R^-1,

    <a+(tau) a(0)> = sum_k w_k exp(lambda_k tau),      tau >= 0,
    w_k = Tr[a+ unvec(r_k)] * (R^-1 vec(a rho_ss))_k,

so the two-sided Fourier transform reduces (Wiener-Khinchine) to a sum
of interfering Lorentzians

    S(omega) = sum_k 2 Re[ w_k / (i(omega - shift) - lambda_k) ],

evaluated in closed form on the frequency grid.  ``shift`` undoes the
internal rotating frame so spectra are reported on absolute energies.
The overall normalization is arbitrary (detector units); sum rules and
peak positions are the meaningful outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.signal

from .hilbert import FockTruncation, SystemParams, annihilation
from .liouvillian import LiouvillianMatrix, full_liouvillian, vectorize
from .steadystate import choose_truncation, solve_steady_state

__all__ = [
    "CorrelationModes",
    "Spectrum",
    "Peak",
    "UnstableMode",
    "correlation_transfer",
    "emission_spectrum",
    "extract_peaks",
    "integrated_intensity",
]


class UnstableMode(Exception):
    """A mode with non-decaying real part carries significant weight."""


@dataclass(frozen=True)
class CorrelationModes:
    """Spectral decomposition {lambda_k, w_k} of <a+(tau) a(0)>."""

    lams: np.ndarray
    weights: np.ndarray
    frame_shift: float

    def correlation(self, tau: np.ndarray) -> np.ndarray:
        """<a+(tau) a(0)> on a tau >= 0 grid (in the rotating frame)."""
        tau = np.atleast_1d(tau)
        return np.sum(self.weights[None, :] * np.exp(np.outer(tau, self.lams)), axis=1)

    def spectral_density(self, omega: np.ndarray) -> np.ndarray:
        """S(omega) on an absolute frequency grid."""
        om = np.atleast_1d(omega) - self.frame_shift
        return 2.0 * np.real(
            np.sum(self.weights[None, :] / (1j * om[:, None] - self.lams[None, :]), axis=1)
        )


@dataclass(frozen=True)
class Spectrum:
    omega_grid: np.ndarray  # absolute energies (meV)
    values: np.ndarray  # real intensity, arbitrary units
    params_used: SystemParams
    n_max: int


@dataclass(frozen=True)
class Peak:
    position: float  # meV
    height: float
    fwhm: float  # meV
    prominence: float


def correlation_transfer(
    L: LiouvillianMatrix,
    rho_ss: np.ndarray,
    a_op: np.ndarray,
    *,
    weight_floor: float = 1e-12,
    stability_tol: float = 1e-9,
) -> CorrelationModes:
    """Eigen-decompose the generator and weight modes by the field overlaps.

    Modes whose relative weight falls below ``weight_floor`` are dropped
    (this removes the stationary zero mode, whose weight |<a+>|^2 vanishes
    under incoherent driving).  Raises :class:`UnstableMode` if a retained
    mode has a non-negative decay rate.
    """
    lam, R = scipy.linalg.eig(L.matrix)
    v0 = vectorize(a_op @ rho_ss)
    try:
        c = np.linalg.solve(R, v0)
    except np.linalg.LinAlgError:
        c = np.linalg.lstsq(R, v0, rcond=None)[0]
    # Tr[a+ X] = <vec(a), vec(X)> for the Hilbert-Schmidt pairing
    t = vectorize(a_op).conj() @ R
    w = t * c

    total = np.abs(w).sum()
    if total == 0.0:
        return CorrelationModes(lam[:0], w[:0], L.frame_shift)
    keep = np.abs(w) > weight_floor * total
    lam, w = lam[keep], w[keep]
    scale = np.abs(L.matrix).max()
    bad = lam.real >= stability_tol * scale
    if np.any(bad):
        raise UnstableMode(
            f"{bad.sum()} weighted mode(s) with Re lambda >= 0 "
            f"(max {lam.real.max():.3e}); correlation does not decay"
        )
    return CorrelationModes(lam, w, L.frame_shift)


def emission_spectrum(
    p: SystemParams,
    *,
    trunc: FockTruncation | None = None,
    half_width: float = 0.6,
    n_points: int = 4001,
    center: float | None = None,
) -> Spectrum:
    """Full-generator emission spectrum on omega_c +/- half_width.

    The window must cover at least four Rabi couplings on each side so
    that both polariton branches and their tails are inside the grid.
    The truncation is chosen adaptively unless given.
    """
    if half_width < 4 * p.g:
        raise ValueError(f"grid half-width {half_width} must be >= 4g = {4 * p.g}")
    if trunc is None:
        trunc = choose_truncation(p)
    center = p.omega_c if center is None else center
    L = full_liouvillian(p, trunc, frame_shift=p.omega_c)
    ss = solve_steady_state(L)
    modes = correlation_transfer(L, ss.rho_ss, annihilation(trunc))
    grid = np.linspace(center - half_width, center + half_width, n_points)
    return Spectrum(grid, modes.spectral_density(grid), p, trunc.n_max)


def integrated_intensity(s: Spectrum) -> float:
    """Integral of S over the grid divided by 2*pi (equals <a+a> when converged)."""
    return float(np.trapezoid(s.values, s.omega_grid) / (2.0 * np.pi))


def _half_crossing(x: np.ndarray, y: np.ndarray, i: int, half: float, stop: int, step: int) -> float | None:
    """Linearly interpolated half-level crossing scanning from peak i towards stop.

    Returns None when the curve turns back up (merged neighbor) or hits the
    bound before dropping below the half level.
    """
    j = i
    while j != stop:
        nxt = j + step
        if y[nxt] <= half:
            return float(x[j] + (x[nxt] - x[j]) * (y[j] - half) / (y[j] - y[nxt]))
        if y[nxt] > y[j] and j != i:
            return None
        j = nxt
    return None


def _peak_fwhm(x: np.ndarray, y: np.ndarray, i: int, left_bound: int, right_bound: int) -> float:
    """Full width at half maximum around sample i, bounded by adjacent valleys.

    When a side never drops below half height before its valley (merged
    peaks), the opposite side's half-width is mirrored; if both sides are
    merged, fall back to the curvature (local Lorentzian) estimate.
    """
    half = 0.5 * y[i]
    left = _half_crossing(x, y, i, half, left_bound, -1)
    right = _half_crossing(x, y, i, half, right_bound, +1)
    if left is not None and right is not None:
        return right - left
    if right is not None:
        return 2.0 * (right - x[i])
    if left is not None:
        return 2.0 * (x[i] - left)
    dx = x[1] - x[0]
    curv = (y[i - 1] - 2 * y[i] + y[i + 1]) / dx**2 if 0 < i < y.size - 1 else 0.0
    if curv < 0:
        return 2.0 * float(np.sqrt(-2.0 * y[i] / curv))
    return 0.0


def extract_peaks(s: Spectrum, prominence_floor: float = 1e-3) -> list[Peak]:
    """Local maxima above a prominence floor, sorted by position.

    ``prominence_floor`` is a fraction of the global maximum.  Positions
    are refined by a quadratic fit through the three samples around each
    maximum; widths are half-maximum crossings measured on the sampled
    curve within each peak's own valley-bounded support.
    """
    y = s.values
    x = s.omega_grid
    if y.size < 3 or y.max() <= 0:
        return []
    dx = x[1] - x[0]
    idx, props = scipy.signal.find_peaks(y, prominence=prominence_floor * y.max())
    if idx.size == 0:
        return []
    peaks = []
    for k, i in enumerate(idx):
        pos = x[i]
        if 0 < i < y.size - 1:
            a, b, c = y[i - 1], y[i], y[i + 1]
            denom = a - 2 * b + c
            if denom != 0.0:
                pos = x[i] + 0.5 * (a - c) / denom * dx
        left_bound = idx[k - 1] if k > 0 else 0
        right_bound = idx[k + 1] if k + 1 < idx.size else y.size - 1
        fwhm = _peak_fwhm(x, y, i, left_bound, right_bound)
        peaks.append(Peak(float(pos), float(y[i]), float(fwhm), float(props["prominences"][k])))
    return sorted(peaks, key=lambda pk: pk.position)
