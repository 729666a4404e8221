"""Operators and states on the truncated Fock space tensored with a two-level system.

Basis convention (fixed): index = 2*n + alpha with photon number
n in [0, n_max] and qubit state alpha in {0, 1}, so the Hilbert-space
dimension is 2*(n_max + 1).  Keeping the qubit index fastest makes every
fixed-excitation block a contiguous-stride slice.

All factories return dense complex ndarrays and are pure functions.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FockTruncation",
    "SystemParams",
    "DEFAULT_PARAMS",
    "basis_index",
    "annihilation",
    "lowering",
    "hamiltonian",
    "excitation_number",
    "effective_k",
    "assert_density_matrix",
]


@dataclass(frozen=True)
class FockTruncation:
    """Photon-number cutoff; operators are plain projections of the infinite ones."""

    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)


@dataclass(frozen=True)
class SystemParams:
    """Physical rates and frequencies, all in meV (hbar = 1).

    omega_c / omega_x: cavity and exciton transition frequencies.
    g: dipole coupling.  kappa: cavity leakage.  gamma_x: spontaneous
    emission.  P_x: incoherent exciton pump.  gamma_theta: phonon-assisted
    photon-to-exciton conversion rate.
    """

    omega_c: float
    omega_x: float
    g: float
    kappa: float
    gamma_x: float
    P_x: float
    gamma_theta: float

    def __post_init__(self) -> None:
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        for name in ("kappa", "gamma_x", "P_x", "gamma_theta"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def delta(self) -> float:
        """Exciton-cavity detuning omega_x - omega_c."""
        return self.omega_x - self.omega_c

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)


# Default parameter set used throughout (strong-coupling QD-cavity sample,
# resonant exciton, weak incoherent pump).
DEFAULT_PARAMS = SystemParams(
    omega_c=1309.78,
    omega_x=1309.78,
    g=0.12,
    kappa=0.032,
    gamma_x=0.0112,
    P_x=0.004,
    gamma_theta=0.17,
)


def basis_index(n: int, alpha: int) -> int:
    """Flat index of the bare state |n photons, qubit alpha>."""
    return 2 * n + alpha


def annihilation(trunc: FockTruncation) -> np.ndarray:
    """Photon annihilation operator a, a|n,alpha> = sqrt(n)|n-1,alpha>."""
    dim = trunc.dim
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, trunc.n_max + 1):
        for alpha in (0, 1):
            a[basis_index(n - 1, alpha), basis_index(n, alpha)] = np.sqrt(n)
    return a


def lowering(trunc: FockTruncation) -> np.ndarray:
    """Qubit lowering operator sigma = |0><1| on the two-level factor."""
    dim = trunc.dim
    sm = np.zeros((dim, dim), dtype=complex)
    for n in range(trunc.n_max + 1):
        sm[basis_index(n, 0), basis_index(n, 1)] = 1.0
    return sm


def hamiltonian(p: SystemParams, trunc: FockTruncation) -> np.ndarray:
    """Jaynes-Cummings Hamiltonian omega_x s+s- + omega_c a+a + g(a+ s- + a s+)."""
    a = annihilation(trunc)
    sm = lowering(trunc)
    ad, sp = a.conj().T, sm.conj().T
    return p.omega_x * (sp @ sm) + p.omega_c * (ad @ a) + p.g * (ad @ sm + a @ sp)


def excitation_number(trunc: FockTruncation) -> np.ndarray:
    """Excitation-number operator a+a + s+s-, diagonal in the bare basis."""
    dim = trunc.dim
    N = np.zeros((dim, dim), dtype=complex)
    for n in range(trunc.n_max + 1):
        for alpha in (0, 1):
            N[basis_index(n, alpha), basis_index(n, alpha)] = n + alpha
    return N


def effective_k(p: SystemParams, trunc: FockTruncation) -> np.ndarray:
    """Non-Hermitian generator K = H - i(gamma_x/2) s+s- - i(kappa/2) a+a.

    K commutes with the excitation number; its anti-Hermitian part is
    negative semidefinite (pure loss).
    """
    a = annihilation(trunc)
    sm = lowering(trunc)
    H = hamiltonian(p, trunc)
    return H - 0.5j * p.gamma_x * (sm.conj().T @ sm) - 0.5j * p.kappa * (a.conj().T @ a)


def assert_density_matrix(rho: np.ndarray, *, trace_tol: float = 1e-10, psd_tol: float = 1e-10) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace and PSD within tolerance."""
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > trace_tol:
        raise ValueError(f"density matrix not Hermitian: max asymmetry {herm:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr!r} != 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
