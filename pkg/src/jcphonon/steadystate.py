"""Stationary state of the full master equation.

The dense linear system L vec(rho) = 0 is closed by replacing one row
with the trace constraint, which is robust at these dimensions and
avoids null-space ambiguity.  Uniqueness is certified through the
singular spectrum of L: exactly one singular value may be (numerically)
zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hilbert import FockTruncation, SystemParams, annihilation, basis_index, lowering
from .liouvillian import LiouvillianMatrix, full_liouvillian, unvectorize

__all__ = [
    "SteadyStateResult",
    "NonUniqueSteadyState",
    "solve_steady_state",
    "choose_truncation",
]


class NonUniqueSteadyState(Exception):
    """The generator's null space is (numerically) more than one-dimensional."""


@dataclass(frozen=True)
class SteadyStateResult:
    rho_ss: np.ndarray
    residual: float
    photon_number: float
    exciton_population: float
    uniqueness_ratio: float  # second-smallest singular value / largest


def solve_steady_state(
    L: LiouvillianMatrix,
    *,
    check_uniqueness: bool = True,
    uniqueness_tol: float = 1e-6,
) -> SteadyStateResult:
    """Solve L rho = 0 with Tr rho = 1.

    The result is Hermitized after the solve; negative eigenvalues in
    [-1e-10, 0) are tolerated but never clamped in the stored matrix.
    """
    if L.flavor != "full":
        raise ValueError("steady states are defined for the full generator only")
    dim = L.dim
    uniq = np.inf
    if check_uniqueness:
        sv = scipy.linalg.svdvals(L.matrix)
        uniq = float(sv[-2] / sv[0])
        if uniq < uniqueness_tol:
            raise NonUniqueSteadyState(
                f"second singular value ratio {uniq:.3e} below {uniqueness_tol:.1e}; "
                "the stationary state is not unique at these parameters"
            )
    A = L.matrix.copy()
    # trace constraint replaces the first row (diagonal of vec at i*(dim+1))
    A[0, :] = 0.0
    A[0, np.arange(dim) * (dim + 1)] = 1.0
    b = np.zeros(L.dim_super, dtype=complex)
    b[0] = 1.0
    try:
        v = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NonUniqueSteadyState(f"trace-constrained system is singular: {exc}") from exc
    rho = unvectorize(v, dim)
    rho = 0.5 * (rho + rho.conj().T)

    residual = float(np.linalg.norm(L.matrix @ v))

    trunc = L.trunc
    a = annihilation(trunc)
    sm = lowering(trunc)
    photon = float(np.real(np.trace(a.conj().T @ a @ rho)))
    exciton = float(np.real(np.trace(sm.conj().T @ sm @ rho)))
    return SteadyStateResult(rho, residual, photon, exciton, uniq)


def rung_population(rho: np.ndarray, n: int) -> float:
    """Population of the photon-number rung n (both qubit states)."""
    return float(np.real(rho[basis_index(n, 0), basis_index(n, 0)] + rho[basis_index(n, 1), basis_index(n, 1)]))


def choose_truncation(
    p: SystemParams,
    *,
    pop_tol: float = 1e-8,
    start: int = 4,
    step: int = 2,
    max_n_max: int = 40,
) -> FockTruncation:
    """Smallest cutoff whose steady state leaves < pop_tol in the top rung.

    Works in the frame rotating at omega_c (the stationary state is
    frame-independent); at weak incoherent pumping the occupation decays
    geometrically, so the loop terminates after a few rounds.
    """
    n_max = start
    while True:
        trunc = FockTruncation(n_max)
        L = full_liouvillian(p, trunc, frame_shift=p.omega_c)
        res = solve_steady_state(L, check_uniqueness=False)
        if rung_population(res.rho_ss, n_max) < pop_tol:
            return trunc
        if n_max >= max_n_max:
            raise RuntimeError(
                f"truncation did not converge by n_max={max_n_max} "
                f"(top-rung population {rung_population(res.rho_ss, n_max):.3e})"
            )
        n_max += step
