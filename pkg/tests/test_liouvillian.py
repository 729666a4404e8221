import numpy as np
import pytest

from conftest import random_density_matrix, random_hermitian
from oracles import direct_dissipator_map

from jcphonon import FockTruncation, SystemParams
from jcphonon.hilbert import annihilation, basis_index, lowering
from jcphonon.liouvillian import (
    dissipator,
    full_liouvillian,
    gain_free_liouvillian,
    unvectorize,
    vec_excitations,
    vectorize,
)


def test_vectorization_round_trip(rng):
    X = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    assert np.array_equal(unvectorize(vectorize(X), 7), X)
    # column stacking: vec index i + dim*j holds X[i, j]
    assert vectorize(X)[3 + 7 * 5] == X[3, 5]


def test_dissipator_identity_is_zero(small_trunc):
    D = dissipator(np.eye(small_trunc.dim))
    assert np.max(np.abs(D)) == 0.0


def test_dissipator_rejects_non_square():
    with pytest.raises(ValueError):
        dissipator(np.zeros((2, 3)))


def test_dissipator_photon_loss_on_one_photon_state(small_trunc):
    a = annihilation(small_trunc)
    rho = np.zeros((small_trunc.dim, small_trunc.dim), dtype=complex)
    rho[basis_index(1, 0), basis_index(1, 0)] = 1.0
    out = unvectorize(dissipator(a) @ vectorize(rho), small_trunc.dim)
    expected = np.zeros_like(rho)
    expected[basis_index(0, 0), basis_index(0, 0)] = 2.0
    expected[basis_index(1, 0), basis_index(1, 0)] = -2.0
    assert np.allclose(out, expected)


def test_dissipator_matches_direct_map_and_traceless(rng, small_trunc):
    a = annihilation(small_trunc)
    sm = lowering(small_trunc)
    for X in (a, sm, sm.conj().T @ a):
        D = dissipator(X)
        for _ in range(20):
            rho = random_hermitian(rng, small_trunc.dim)
            out = unvectorize(D @ vectorize(rho), small_trunc.dim)
            assert np.allclose(out, direct_dissipator_map(X, rho), atol=1e-13)
            assert abs(np.trace(out)) < 1e-12


def test_full_liouvillian_trace_preserving(rng, params, small_trunc):
    L = full_liouvillian(params, small_trunc)
    ident = vectorize(np.eye(small_trunc.dim)).conj()
    assert np.max(np.abs(ident @ L.matrix)) < 1e-12
    for _ in range(20):
        rho = random_density_matrix(rng, small_trunc.dim)
        out = unvectorize(L.matrix @ vectorize(rho), small_trunc.dim)
        assert abs(np.trace(out)) < 1e-12


def test_closed_system_limit_purely_imaginary():
    p = SystemParams(1309.78, 1309.78, 0.0, 0.0, 0.0, 0.0, 0.0)
    L = full_liouvillian(p, FockTruncation(3))
    lam = np.linalg.eigvals(L.matrix)
    assert np.max(np.abs(lam.real)) < 1e-10


def test_full_liouvillian_stable(params, small_trunc):
    L = full_liouvillian(params, small_trunc, frame_shift=params.omega_c)
    lam = np.linalg.eigvals(L.matrix)
    assert lam.real.max() < 1e-10


def test_full_liouvillian_preserves_difference_grading(params, small_trunc):
    ket, bra = vec_excitations(small_trunc)
    k = ket - bra
    L = full_liouvillian(params, small_trunc).matrix
    off = L[k[:, None] != k[None, :]]
    assert np.max(np.abs(off)) < 1e-12


def test_gain_free_preserves_blocks(params):
    trunc = FockTruncation(4)
    ket, bra = vec_excitations(trunc)
    L = gain_free_liouvillian(params, trunc).matrix
    cross = (ket[:, None] != ket[None, :]) | (bra[:, None] != bra[None, :])
    assert np.max(np.abs(L[cross])) < 1e-12


def test_gain_free_vacuum_dark_without_phonons(params, small_trunc):
    p0 = params.replace(gamma_theta=0.0)
    L = gain_free_liouvillian(p0, small_trunc)
    rho = np.zeros((small_trunc.dim, small_trunc.dim), dtype=complex)
    rho[0, 0] = 1.0
    assert np.max(np.abs(L.matrix @ vectorize(rho))) < 1e-14


def test_gain_free_phonon_prefactor_argument(params, small_trunc):
    half = gain_free_liouvillian(params, small_trunc)
    assert half.phonon_prefactor == pytest.approx(params.gamma_theta / 2)
    full = gain_free_liouvillian(params, small_trunc, phonon_prefactor=params.gamma_theta)
    assert full.phonon_prefactor == pytest.approx(params.gamma_theta)
    assert np.max(np.abs(half.matrix - full.matrix)) > 0


def test_gain_free_block_10_matches_block_module(params):
    """Eigenvalues of the gain-free generator on the (1,0) sector equal the
    first-rung block construction (decay convention, resolved prefactor)."""
    from jcphonon.blocks import build_block

    trunc = FockTruncation(3)
    L = gain_free_liouvillian(params, trunc, frame_shift=params.omega_c)
    ket, bra = vec_excitations(trunc)
    sector = np.nonzero((ket == 1) & (bra == 0))[0]
    lam_sector = np.linalg.eigvals(L.matrix[np.ix_(sector, sector)])
    blk = build_block(1, params)
    act = list(blk.active)
    lam_block = np.linalg.eigvals(-blk.entries[np.ix_(act, act)])
    assert np.allclose(np.sort_complex(lam_sector), np.sort_complex(lam_block), atol=1e-12)
