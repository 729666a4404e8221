import numpy as np
import pytest

from oracles import correlation_rk4, spectrum_from_correlation

from jcphonon import FockTruncation, SystemParams, UnstableMode
from jcphonon.hilbert import DEFAULT_PARAMS, annihilation
from jcphonon.liouvillian import LiouvillianMatrix, full_liouvillian
from jcphonon.spectrum import (
    Spectrum,
    correlation_transfer,
    emission_spectrum,
    extract_peaks,
    integrated_intensity,
)
from jcphonon.steadystate import solve_steady_state


def modes_for(p, n_max):
    trunc = FockTruncation(n_max)
    L = full_liouvillian(p, trunc, frame_shift=p.omega_c)
    ss = solve_steady_state(L)
    return L, ss, correlation_transfer(L, ss.rho_ss, annihilation(trunc))


def test_equal_time_limit_matches_photon_number(params):
    _, ss, modes = modes_for(params, 8)
    assert complex(modes.correlation(np.array([0.0]))[0]).real == pytest.approx(
        ss.photon_number, abs=1e-8
    )
    assert np.sum(modes.weights).real == pytest.approx(ss.photon_number, abs=1e-8)


def test_weak_coupling_limit_is_cavity_lorentzian():
    # empty-cavity limit: a spectrally flat (broad) emitter feeds the mode
    # through a vanishing coupling, leaving the bare cavity Lorentzian
    p = SystemParams(1309.78, 1309.78, 1e-3, 0.032, 1.0, 0.01, 0.0)
    s = emission_spectrum(p, trunc=FockTruncation(3), half_width=0.6, n_points=8001)
    peaks = extract_peaks(s, 0.01)
    assert len(peaks) == 1
    grid_step = s.omega_grid[1] - s.omega_grid[0]
    assert abs(peaks[0].position - p.omega_c) < grid_step / 10
    assert peaks[0].fwhm == pytest.approx(p.kappa, rel=0.02)


def test_zero_coupling_gives_silent_cavity():
    p = SystemParams(1309.78, 1309.78, 0.0, 0.032, 0.0112, 0.004, 0.0)
    s = emission_spectrum(p, trunc=FockTruncation(2), half_width=0.6)
    assert np.max(np.abs(s.values)) < 1e-20


def test_resolvent_matches_time_domain_oracle(params):
    """Closed-form Lorentzian sum vs RK4-propagated correlation + quadrature."""
    cases = [
        params,
        params.replace(gamma_theta=0.0),
        params.replace(omega_x=params.omega_c + 0.2),
    ]
    for p in cases:
        trunc = FockTruncation(6)
        L = full_liouvillian(p, trunc, frame_shift=p.omega_c)
        ss = solve_steady_state(L)
        modes = correlation_transfer(L, ss.rho_ss, annihilation(trunc))
        grid = np.linspace(p.omega_c - 0.6, p.omega_c + 0.6, 1501)
        s_closed = modes.spectral_density(grid)
        taus, corr = correlation_rk4(L, ss.rho_ss, annihilation(trunc), t_final=1600.0, dt=0.1)
        s_time = spectrum_from_correlation(taus, corr, grid, L.frame_shift)
        assert np.max(np.abs(s_closed - s_time)) < 0.005 * s_closed.max()


def test_sum_rule_against_steady_photon_number(rng):
    base = DEFAULT_PARAMS
    for _ in range(5):
        p = base.replace(
            g=rng.uniform(0.06, 0.18),
            kappa=rng.uniform(0.015, 0.05),
            gamma_x=rng.uniform(0.005, 0.02),
            P_x=rng.uniform(0.002, 0.008),
            gamma_theta=rng.uniform(0.0, 0.3),
            omega_x=base.omega_c + rng.uniform(-0.2, 0.2),
        )
        s = emission_spectrum(p, half_width=max(0.9, 8 * p.g), n_points=6001)
        trunc = FockTruncation(s.n_max)
        ss = solve_steady_state(full_liouvillian(p, trunc, frame_shift=p.omega_c))
        assert integrated_intensity(s) == pytest.approx(ss.photon_number, rel=0.01)


def test_spectrum_positive_and_real(params):
    s = emission_spectrum(params)
    assert s.values.dtype.kind == "f"
    assert s.values.min() > -1e-6 * s.values.max()


def test_truncation_stability_of_spectrum(params):
    s1 = emission_spectrum(params)
    s2 = emission_spectrum(params, trunc=FockTruncation(s1.n_max + 2))
    assert np.max(np.abs(s2.values - s1.values)) / s1.values.max() < 1e-6


def test_grid_must_cover_rabi_window(params):
    with pytest.raises(ValueError):
        emission_spectrum(params, half_width=0.3)


def test_resonant_triplet_structure(params):
    s = emission_spectrum(params)
    peaks = extract_peaks(s, 0.01)
    assert len(peaks) == 3
    lo, mid, hi = peaks
    assert mid.position == pytest.approx(params.omega_c, abs=0.5 * mid.fwhm)
    # outer pair symmetric about the cavity line
    assert (hi.position - params.omega_c) == pytest.approx(
        params.omega_c - lo.position, rel=0.05
    )


def test_unstable_mode_detection(params, small_trunc):
    dim = small_trunc.dim
    growth = LiouvillianMatrix(
        np.eye(dim * dim, dtype=complex), dim, "full", params, small_trunc, 0.0
    )
    rho = np.zeros((dim, dim), dtype=complex)
    rho[2, 2] = 1.0
    with pytest.raises(UnstableMode):
        correlation_transfer(growth, rho, annihilation(small_trunc))


def test_extract_peaks_single_lorentzian(params):
    x = np.linspace(4.0, 6.0, 4001)
    hwhm = 0.04
    y = 1.0 / (1.0 + ((x - 5.0) / hwhm) ** 2)
    peaks = extract_peaks(Spectrum(x, y, params, 0), 1e-3)
    assert len(peaks) == 1
    step = x[1] - x[0]
    assert abs(peaks[0].position - 5.0) < step / 10
    assert peaks[0].fwhm == pytest.approx(2 * hwhm, rel=0.01)


def test_extract_peaks_two_lorentzians(params):
    x = np.linspace(4.0, 6.0, 4001)
    hwhm = 0.02  # widths much smaller than the splitting
    y = 1.0 / (1.0 + ((x - 4.88) / hwhm) ** 2) + 1.0 / (1.0 + ((x - 5.12) / hwhm) ** 2)
    peaks = extract_peaks(Spectrum(x, y, params, 0), 1e-3)
    assert len(peaks) == 2
    step = x[1] - x[0]
    assert abs(peaks[0].position - 4.88) < step / 10
    assert abs(peaks[1].position - 5.12) < step / 10


def test_extract_peaks_empty_cases(params):
    x = np.linspace(0, 1, 100)
    assert extract_peaks(Spectrum(x, np.zeros_like(x), params, 0), 1e-3) == []
    assert extract_peaks(Spectrum(x, np.linspace(0, 1, 100), params, 0), 1e-3) == []
