"""Master-equation generators as dense superoperator matrices.

Vectorization is column-stacking: vec(X)[i + dim*j] = X[i, j], so
vec(A X B) = (B^T kron A) vec(X).  The convention is internal; only
vectorize/unvectorize need to agree on it.

Two generator flavors are built here:

* ``full``: the complete Lindblad generator
  drho/dt = -i[H, rho] + (kappa/2) D_a + (gamma_x/2) D_sigma
            + (P_x/2) D_sigma+ + (gamma_theta/2) D_(sigma+ a)
  with D_X(rho) = 2 X rho X+ - X+X rho - rho X+X.

* ``gain_free``: the pump-free reduction
  drho/dt = -i(K rho - rho K+) + c_theta D_(sigma+ a),
  which conserves the excitation grading on both sides and therefore
  acts block-diagonally on the (n, m) excitation sectors.  The phonon
  prefactor c_theta defaults to gamma_theta/2, the convention of the
  full equation (the value that reproduces the first-rung critical
  coupling 4g - (kappa - gamma_x); see blocks module).

An optional ``frame_shift`` omega_0 replaces H by H - omega_0 * N_exc,
i.e. moves to the frame rotating uniformly at omega_0.  Steady states
are unchanged; spectra shift rigidly by omega_0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    FockTruncation,
    SystemParams,
    annihilation,
    effective_k,
    excitation_number,
    hamiltonian,
    lowering,
)

__all__ = [
    "LiouvillianMatrix",
    "vectorize",
    "unvectorize",
    "dissipator",
    "full_liouvillian",
    "gain_free_liouvillian",
    "vec_excitations",
]


def vectorize(X: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(X).flatten(order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    return np.asarray(v).reshape((dim, dim), order="F")


@dataclass(frozen=True)
class LiouvillianMatrix:
    """Dense superoperator acting on column-stacked density matrices."""

    matrix: np.ndarray
    dim: int
    flavor: str  # "full" | "gain_free"
    params: SystemParams
    trunc: FockTruncation
    frame_shift: float = 0.0
    phonon_prefactor: float | None = None

    @property
    def dim_super(self) -> int:
        return self.dim * self.dim


def dissipator(X: np.ndarray) -> np.ndarray:
    """Superoperator matrix of D_X(rho) = 2 X rho X+ - X+X rho - rho X+X."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"dissipator needs a square operator, got shape {X.shape}")
    dim = X.shape[0]
    I = np.eye(dim)
    XdX = X.conj().T @ X
    return 2.0 * np.kron(X.conj(), X) - np.kron(I, XdX) - np.kron(XdX.T, I)


def _commutator_superop(H: np.ndarray) -> np.ndarray:
    dim = H.shape[0]
    I = np.eye(dim)
    return -1j * (np.kron(I, H) - np.kron(H.T, I))


def full_liouvillian(
    p: SystemParams, trunc: FockTruncation, *, frame_shift: float = 0.0
) -> LiouvillianMatrix:
    """Complete Lindblad generator with all four decoherence channels."""
    a = annihilation(trunc)
    sm = lowering(trunc)
    H = hamiltonian(p, trunc)
    if frame_shift:
        H = H - frame_shift * excitation_number(trunc)
    L = _commutator_superop(H)
    L += 0.5 * p.kappa * dissipator(a)
    L += 0.5 * p.gamma_x * dissipator(sm)
    L += 0.5 * p.P_x * dissipator(sm.conj().T)
    L += 0.5 * p.gamma_theta * dissipator(sm.conj().T @ a)
    return LiouvillianMatrix(L, trunc.dim, "full", p, trunc, frame_shift)


def gain_free_liouvillian(
    p: SystemParams,
    trunc: FockTruncation,
    *,
    frame_shift: float = 0.0,
    phonon_prefactor: float | None = None,
) -> LiouvillianMatrix:
    """Pump-free generator -i(K rho - rho K+) + c_theta D_(sigma+ a).

    P_x is ignored (forced to zero).  The generator is not trace
    preserving; it maps every excitation block (n, m) to itself.
    ``phonon_prefactor`` overrides c_theta; default gamma_theta/2.
    """
    c_theta = 0.5 * p.gamma_theta if phonon_prefactor is None else phonon_prefactor
    a = annihilation(trunc)
    sm = lowering(trunc)
    K = effective_k(p, trunc)
    if frame_shift:
        K = K - frame_shift * excitation_number(trunc)
    dim = trunc.dim
    I = np.eye(dim)
    # -i(K rho - rho K+): the anti-commutator part of the losses is kept,
    # the quantum-jump refill terms are dropped.
    L = -1j * (np.kron(I, K) - np.kron(K.conj(), I))
    L += c_theta * dissipator(sm.conj().T @ a)
    return LiouvillianMatrix(L, dim, "gain_free", p, trunc, frame_shift, c_theta)


def vec_excitations(trunc: FockTruncation) -> tuple[np.ndarray, np.ndarray]:
    """Ket and bra excitation numbers for every superoperator index.

    Index k = i + dim*j of vec(|i><j|) carries ket excitation of state i
    and bra excitation of state j; useful for block-structure checks.
    """
    exc = np.array([n + alpha for n in range(trunc.n_max + 1) for alpha in (0, 1)])
    ket = np.tile(exc, trunc.dim)
    bra = np.repeat(exc, trunc.dim)
    return ket, bra
