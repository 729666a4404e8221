import numpy as np
import pytest

from jcphonon import FockTruncation
from jcphonon.sweeps import (
    HC_MEV_NM,
    NonpositiveEnergy,
    classify_peak,
    detuning_sweep,
    gamma_sweep,
    wavelength_of,
)


def test_wavelength_reference_points():
    assert wavelength_of(1239.841984) == pytest.approx(1000.0, rel=1e-12)
    # cavity line of the reference parameter set
    assert wavelength_of(1309.78) == pytest.approx(946.60323413092275, rel=1e-12)
    assert HC_MEV_NM == 1239841.984


def test_wavelength_monotone(rng):
    for _ in range(20):
        e1, e2 = sorted(rng.uniform(100.0, 3000.0, size=2))
        if e1 == e2:
            continue
        assert wavelength_of(e1) > wavelength_of(e2)


def test_wavelength_rejects_nonpositive():
    with pytest.raises(NonpositiveEnergy):
        wavelength_of(0.0)
    with pytest.raises(NonpositiveEnergy):
        wavelength_of(-5.0)


def test_endpoints_only_sweep(params):
    pts = detuning_sweep(params, (-0.5, 0.5), 2, trunc=FockTruncation(5))
    assert len(pts) == 2
    for pt in pts:
        assert pt.error is None
        assert len(pt.peaks) >= 2
        # delta_lambda sign: red-detuned exciton means longer exciton wavelength
        assert np.sign(pt.delta_lambda) == -np.sign(pt.delta_energy)


def test_sweep_point_spectra_and_classification(params):
    pts = detuning_sweep(params, (-0.3, 0.3), 3, trunc=FockTruncation(5))
    mid = pts[1]
    assert mid.delta_energy == pytest.approx(0.0)
    tags = [classify_peak(pk, params.replace(omega_x=params.omega_c)) for pk in mid.peaks]
    assert "central" in tags


def test_sweep_parallel_matches_serial(params):
    kw = dict(trunc=FockTruncation(4), n_points=1201, half_width=0.6)
    serial = detuning_sweep(params, (-0.2, 0.2), 3, workers=1, **kw)
    parallel = detuning_sweep(params, (-0.2, 0.2), 3, workers=2, **kw)
    for a, b in zip(serial, parallel):
        assert a.delta_energy == b.delta_energy
        assert np.array_equal(a.spectrum.values, b.spectrum.values)
        assert a.peaks == b.peaks


def test_sweep_records_per_point_failures(params):
    pts = detuning_sweep(params, (-0.1, 0.1), 2, trunc=FockTruncation(4), half_width=0.1)
    assert all(pt.error is not None for pt in pts)
    assert all(pt.spectrum is None for pt in pts)


def test_peak_trajectory_continuity(params):
    """Matched branches move by less than 3x the detuning step between points."""
    count, lo, hi = 11, -0.25, 0.25
    step = (hi - lo) / (count - 1)
    pts = detuning_sweep(params, (lo, hi), count, trunc=FockTruncation(5))
    prev = None
    for pt in pts:
        p_here = params.replace(omega_x=params.omega_c + pt.delta_energy)
        tagged = {classify_peak(pk, p_here): pk.position for pk in pt.peaks}
        if prev is not None:
            for tag, pos in tagged.items():
                if tag in prev:
                    assert abs(pos - prev[tag]) < 3 * step
        prev = tagged


def test_gamma_sweep_structure(params):
    res = gamma_sweep(params, n_grid=41, n_rungs=8, ep_rungs=(1, 2, 3))
    assert [r.n for r in res.ep_table] == [1, 2, 3]
    tags = [tag for tag, _, _ in res.spectra_at]
    assert tags == ["ep3", "ep2", "mid", "ep1"]
    mids = [g for tag, g, _ in res.spectra_at if tag == "mid"]
    assert mids[0] == pytest.approx(1.57 * params.g)
    for _, gth, s in res.spectra_at:
        assert s.values.size == 4001
        assert s.params_used.gamma_theta == pytest.approx(gth)
    assert res.diag.n_rungs == 8
