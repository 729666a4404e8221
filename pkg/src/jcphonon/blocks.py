"""Excitation-conserving 4x4 blocks of the gain-free generator.

The pump-free generator conserves the excitation number on both sides of
the density matrix, so it restricts to 4-dimensional blocks spanned by

    a_n0   = |n, 0><n-1, 0|      (photon emission, qubit in ground state)
    a_n1   = |n-1, 1><n-2, 1|    (photon emission, qubit excited)
    sigma_n = |n-1, 1><n-1, 0|   (qubit flip)
    zeta_n = |n, 0><n-2, 1|      (combined two-quantum coherence)

carrying ket excitation n and bra excitation n-1 -- exactly the operator
content that the field correlation <a+(tau) a(0)> propagates through.  For
n = 1 the operators a_11 and zeta_1 reference Fock level -1 and are null;
the block degenerates gracefully to the 2x2 span of (a_10, sigma_1).

Everything here works at zero detuning with the decay-matrix convention:
``entries`` generate dC/dt = -A C, so eigenvalues lambda of A have
linewidths Gamma = Re lambda >= 0 and frequencies omega = Im lambda
measured from the cavity frequency.  Two forms are provided:

* ``projected``: the exact Hilbert-Schmidt projection of the gain-free
  generator onto the four block operators (default; reproduces the known
  first-rung critical coupling 4g - (kappa - gamma_x) analytically).
* ``printed``: an alternative transcription kept for comparison reports;
  its diagonal bookkeeping differs from the projection (see
  :func:`compare_block_conventions`).

Branch labels (-,-), (-,+), (+,-), (+,+) are assigned by continuity from
gamma_theta = 0, where the inner frequency pair +/-(Omega_n - Omega_{n-1})
is labelled (-,.) and the outer pair (+,.).  The inner pair coalesces at
an exceptional point as gamma_theta grows; past it, (-,-) denotes the
narrow branch (the cavity-frequency singlet) and (-,+) the broadened one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.optimize
from scipy.optimize import linear_sum_assignment

from .hilbert import FockTruncation, SystemParams, basis_index
from .liouvillian import gain_free_liouvillian, vectorize

__all__ = [
    "BLOCK_BASIS_LABELS",
    "BRANCH_LABELS",
    "NonzeroDetuning",
    "NegativeRadicand",
    "NoCoalescenceInRange",
    "BranchTrackingLost",
    "BlockMatrix",
    "BlockEigenSystem",
    "BranchTrack",
    "EpResult",
    "DptDiagnostics",
    "build_block",
    "block_basis_operators",
    "track_branches",
    "block_eigensystem",
    "ep_formula",
    "ep_locate_numeric",
    "find_coalescences",
    "linewidth_ratio",
    "dpt_diagnostics",
    "block_projection_oracle",
    "compare_block_conventions",
]

BLOCK_BASIS_LABELS = ("a_n0", "a_n1", "sigma_n", "zeta_n")
BRANCH_LABELS = ("--", "-+", "+-", "++")

#: pairwise-distance threshold (in units of g) below which two eigenvalues
#: count as coalesced
COALESCENCE_TOL = 1e-6


class NonzeroDetuning(Exception):
    """Block analysis is defined at zero exciton-cavity detuning only."""


class NegativeRadicand(Exception):
    """The closed-form critical-coupling estimate left its validity range."""


class NoCoalescenceInRange(Exception):
    """No eigenvalue coalescence of the tracked pair inside the scan window."""


class BranchTrackingLost(Exception):
    """Continuity tracking of eigenvalue branches broke down."""


@dataclass(frozen=True)
class BlockMatrix:
    n: int
    params: SystemParams
    gamma_theta: float
    form: str  # "projected" | "printed"
    entries: np.ndarray  # 4x4 decay matrix, null rows/cols zeroed for n=1
    active: tuple[int, ...]
    rabi: tuple[float, float]  # (Omega_n, Omega_{n-1})


@dataclass(frozen=True)
class BlockEigenSystem:
    n: int
    gamma_theta: float
    labels: tuple[str, ...]
    eigenvalues: np.ndarray  # 4 complex, NaN for null branches, order BRANCH_LABELS
    frequencies: np.ndarray  # Im(lambda), offsets from the cavity frequency
    linewidths: np.ndarray  # Re(lambda)
    coefficients: np.ndarray  # 4 complex: (-,-) eigenvector, unit norm
    degenerate_at_ep: bool


@dataclass(frozen=True)
class BranchTrack:
    """Labelled eigenvalue/eigenvector trajectories along a gamma_theta grid."""

    n: int
    gammas: np.ndarray
    eigenvalues: np.ndarray  # (G, 4) complex, NaN-padded, order BRANCH_LABELS
    vectors: np.ndarray  # (G, 4, 4): vectors[t, :, b] = branch-b eigenvector
    degenerate: np.ndarray  # (G,) bool: within coalescence tolerance


@dataclass(frozen=True)
class EpResult:
    n: int
    gamma_theta_critical_numeric: float
    gamma_theta_critical_formula: float
    coalescence_gap: float


@dataclass(frozen=True)
class DptDiagnostics:
    """Per-rung narrow-branch diagnostics over a gamma_theta grid.

    Rung-indexed arrays have shape (n_rungs + 1, G); row 0 is unused (NaN)
    so row n corresponds to rung n.  E_n excludes n = 2 by definition and
    C11_sq excludes n = 1 (null operator); both are NaN there.
    """

    gamma_grid: np.ndarray
    n_rungs: int
    G_values: np.ndarray
    dG_values: np.ndarray
    E_n: np.ndarray
    C00_sq: np.ndarray
    C11_sq: np.ndarray
    eq3_ratio: np.ndarray
    lam_mm: np.ndarray  # (-,-) eigenvalue per rung/grid point
    lam_mp: np.ndarray  # (-,+) eigenvalue per rung/grid point
    warnings: tuple[str, ...]


def _check_resonance(p: SystemParams) -> None:
    if abs(p.delta) > 1e-12 * max(1.0, abs(p.omega_c)):
        raise NonzeroDetuning(
            f"block matrices are defined at delta = 0 (got delta = {p.delta!r} meV)"
        )


def _entries_projected(n: int, gth: np.ndarray, g: float, kappa: float, gamma_x: float) -> np.ndarray:
    """Decay matrices A (dC/dt = -A C) for an array of couplings, shape (G,4,4)."""
    gth = np.atleast_1d(np.asarray(gth, dtype=float))
    c = 0.5 * gth
    wn = g * np.sqrt(n)
    wm = g * np.sqrt(max(n - 1, 0))
    A = np.zeros((gth.size, 4, 4), dtype=complex)
    A[:, 0, 0] = (2 * n - 1) * (0.5 * kappa + c)
    A[:, 1, 0] = -2.0 * c * np.sqrt(n * (n - 1))
    A[:, 2, 0] = 1j * wn
    A[:, 3, 0] = -1j * wm
    A[:, 1, 1] = gamma_x + 0.5 * kappa * (2 * n - 3)
    A[:, 2, 1] = -1j * wm
    A[:, 3, 1] = 1j * wn
    A[:, 0, 2] = 1j * wn
    A[:, 1, 2] = -1j * wm
    A[:, 2, 2] = 0.5 * gamma_x + kappa * (n - 1) + c * (n - 1)
    A[:, 0, 3] = -1j * wm
    A[:, 1, 3] = 1j * wn
    A[:, 3, 3] = 0.5 * gamma_x + kappa * (n - 1) + c * n
    return A


def _entries_printed(n: int, gth: np.ndarray, g: float, kappa: float, gamma_x: float) -> np.ndarray:
    gth = np.atleast_1d(np.asarray(gth, dtype=float))
    wn = g * np.sqrt(n)
    wm = g * np.sqrt(max(n - 1, 0))
    A = np.zeros((gth.size, 4, 4), dtype=complex)
    A[:, 0, 0] = 0.5 * kappa
    A[:, 0, 1] = -1j * wm
    A[:, 0, 2] = 1j * wn
    A[:, 0, 3] = np.sqrt(n * (n - 1)) * gth
    A[:, 1, 0] = -1j * wm
    A[:, 1, 1] = 0.5 * (gamma_x - (n - 1) * gth)
    A[:, 1, 3] = 1j * wn
    A[:, 2, 0] = 1j * wn
    A[:, 2, 2] = 0.5 * (2 * kappa - gamma_x - n * gth)
    A[:, 2, 3] = -1j * wm
    A[:, 3, 1] = 1j * wn
    A[:, 3, 2] = -1j * wm
    A[:, 3, 3] = 0.5 * (kappa - (2 * n - 1) * gth)
    return A


_FORMS: dict[str, Callable[..., np.ndarray]] = {
    "projected": _entries_projected,
    "printed": _entries_printed,
}


def _active_indices(n: int) -> tuple[int, ...]:
    return (0, 2) if n == 1 else (0, 1, 2, 3)


def _batched_blocks(n: int, gth: np.ndarray, p: SystemParams, form: str) -> np.ndarray:
    try:
        builder = _FORMS[form]
    except KeyError:
        raise ValueError(f"unknown block form {form!r}") from None
    A = builder(n, gth, p.g, p.kappa, p.gamma_x)
    if n == 1:
        for i in (1, 3):
            A[:, i, :] = 0.0
            A[:, :, i] = 0.0
    return A


def build_block(
    n: int,
    p: SystemParams,
    gamma_theta: float | None = None,
    form: str = "projected",
) -> BlockMatrix:
    """Decay matrix of the (n, n-1) excitation block at zero detuning."""
    if n < 1:
        raise ValueError(f"rung index must be >= 1, got {n}")
    _check_resonance(p)
    gth = p.gamma_theta if gamma_theta is None else float(gamma_theta)
    entries = _batched_blocks(n, np.array([gth]), p, form)[0]
    return BlockMatrix(
        n=n,
        params=p,
        gamma_theta=gth,
        form=form,
        entries=entries,
        active=_active_indices(n),
        rabi=(p.g * np.sqrt(n), p.g * np.sqrt(max(n - 1, 0))),
    )


def _initial_order(lams: np.ndarray) -> np.ndarray:
    """Branch order [--, -+, +-, ++] at gamma_theta = 0.

    Inner pair = smaller |Im| (transition frequencies Omega_n - Omega_{n-1});
    within a pair, the negative-frequency member is labelled first.
    """
    k = lams.size
    by_mag = np.argsort(np.abs(lams.imag), kind="stable")
    if k == 2:
        inner = by_mag
        return inner[np.argsort(lams[inner].imag, kind="stable")]
    inner, outer = by_mag[:2], by_mag[2:]
    inner = inner[np.argsort(lams[inner].imag, kind="stable")]
    outer = outer[np.argsort(lams[outer].imag, kind="stable")]
    return np.concatenate([inner, outer])


def _pair_fixup(lams: np.ndarray, vecs: np.ndarray, g: float) -> tuple[np.ndarray, np.ndarray]:
    """Within each merged (real) pair, put the narrow member first."""
    im_tol = max(1e-9 * g, 1e-14)
    k = lams.shape[1]
    for a, b in ((0, 1), (2, 3)) if k == 4 else ((0, 1),):
        merged = np.abs(lams[:, a].imag - lams[:, b].imag) < im_tol
        swap = np.nonzero(merged & (lams[:, a].real > lams[:, b].real))[0]
        if swap.size:
            lams[np.ix_(swap, [a, b])] = lams[np.ix_(swap, [b, a])]
            vecs[np.ix_(swap, np.arange(k), [a, b])] = vecs[np.ix_(swap, np.arange(k), [b, a])]
    return lams, vecs


def track_branches(
    n: int,
    p: SystemParams,
    gammas: Sequence[float],
    form: str = "projected",
    *,
    max_step: float | None = None,
) -> BranchTrack:
    """Track the four branches by continuity from gamma_theta = 0.

    The trajectory is computed on an internal grid refined to at most
    ``max_step`` (default g/400) and sampled at the requested points.
    """
    _check_resonance(p)
    req = np.atleast_1d(np.asarray(gammas, dtype=float))
    if req.size == 0 or np.any(req < 0) or np.any(np.diff(req) < 0):
        raise ValueError("gamma grid must be non-empty, non-negative and sorted")
    step = (p.g / 400.0) if max_step is None else max_step
    hi = req.max()
    ramp = np.arange(0.0, hi + step, step) if hi > 0 else np.array([0.0])
    fine = np.unique(np.concatenate([ramp, req, [0.0]]))

    act = _active_indices(n)
    k = len(act)
    act_arr = np.asarray(act)
    A = _batched_blocks(n, fine, p, form)[:, act_arr[:, None], act_arr[None, :]]
    lam_raw, vec_raw = np.linalg.eig(A)

    lams = np.empty((fine.size, k), dtype=complex)
    vecs = np.empty((fine.size, k, k), dtype=complex)
    order = _initial_order(lam_raw[0])
    lams[0] = lam_raw[0][order]
    vecs[0] = vec_raw[0][:, order]
    for t in range(1, fine.size):
        cost = np.abs(lams[t - 1][:, None] - lam_raw[t][None, :])
        _, col = linear_sum_assignment(cost)
        lams[t] = lam_raw[t][col]
        vecs[t] = vec_raw[t][:, col]
    lams, vecs = _pair_fixup(lams, vecs, p.g)

    # sample at requested points
    pos = np.searchsorted(fine, req)
    gap_tol = COALESCENCE_TOL * p.g
    full_lam = np.full((req.size, 4), np.nan + 0j)
    full_vec = np.full((req.size, 4, 4), np.nan + 0j)
    degen = np.zeros(req.size, dtype=bool)
    for out_t, t in enumerate(pos):
        for b in range(k):
            full_lam[out_t, b] = lams[t, b]
            comp = np.zeros(4, dtype=complex)
            comp[list(act)] = vecs[t, :, b] / np.linalg.norm(vecs[t, :, b])
            full_vec[out_t, :, b] = comp
        d = np.abs(lams[t][:, None] - lams[t][None, :])[np.triu_indices(k, 1)]
        degen[out_t] = bool(d.min() < gap_tol)
    return BranchTrack(n, req, full_lam, full_vec, degen)


def block_eigensystem(b: BlockMatrix) -> BlockEigenSystem:
    """Eigenvalues, branch labels and (-,-) coefficients of one block."""
    track = track_branches(b.n, b.params, [b.gamma_theta], form=b.form)
    lam = track.eigenvalues[0]
    coeff = track.vectors[0, :, 0]
    return BlockEigenSystem(
        n=b.n,
        gamma_theta=b.gamma_theta,
        labels=BRANCH_LABELS,
        eigenvalues=lam,
        frequencies=lam.imag,
        linewidths=lam.real,
        coefficients=coeff,
        degenerate_at_ep=bool(track.degenerate[0]),
    )


def ep_formula(n: int, p: SystemParams) -> float:
    """Closed-form estimate of the rung-n critical coupling.

    Rung 1 obeys the exact linear relation 4g - (kappa - gamma_x); higher
    rungs use the approximate radicand expression with the rate asymmetry
    entering in units of g.
    """
    if n < 1:
        raise ValueError(f"rung index must be >= 1, got {n}")
    if n == 1:
        return 4.0 * p.g - (p.kappa - p.gamma_x)
    n1 = n * (n - 1)
    rad = (
        np.sqrt(4.0 * n1**3 + 16.0 * n1**2 + 10.0 * n1 + 6.0)
        - (2.0 * n**3 - 3.0 * n**2 + n)
        - (p.kappa - p.gamma_x) / p.g / (n * (n + 1))
    ) / (15.0 * n1**2 + 10.0 * n1 + 6.0)
    if rad < 0:
        raise NegativeRadicand(f"critical-coupling radicand negative for n={n}: {rad!r}")
    return 4.0 * p.g * float(np.sqrt(rad))


def _discriminant(lams: np.ndarray) -> float:
    """Re prod_{i<j} (lambda_i - lambda_j)^2; changes sign when a conjugate
    pair of a real-characteristic-polynomial matrix merges onto the real axis."""
    diff = lams[:, None] - lams[None, :]
    iu = np.triu_indices(lams.size, 1)
    return float(np.prod(diff[iu] ** 2).real)


def find_coalescences(
    build: Callable[[float], np.ndarray],
    lo: float,
    hi: float,
    *,
    n_scan: int = 1200,
) -> list[float]:
    """Parameter values in (lo, hi) where two eigenvalues of build(x) merge.

    Scans the discriminant of the characteristic polynomial for sign
    changes and refines each bracket with Brent's method.  Only mergers
    onto the real axis (odd-order discriminant roots) are detected, which
    is exactly the conjugate-pair coalescence structure of interest.
    """
    xs = np.linspace(lo, hi, n_scan)
    disc = np.array([_discriminant(np.linalg.eigvals(build(x))) for x in xs])
    roots = []
    sign = np.sign(disc)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        f = lambda x: _discriminant(np.linalg.eigvals(build(x)))
        roots.append(float(scipy.optimize.brentq(f, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-14)))
    return roots


def ep_locate_numeric(
    n: int,
    p: SystemParams,
    scan: tuple[float, float] | None = None,
    form: str = "projected",
) -> EpResult:
    """Locate the exceptional point where the tracked (-,+/-) pair merges.

    The first discriminant root inside the scan window whose coalescing
    pair is the continuity-tracked inner pair is returned, together with
    the residual eigenvalue gap there and the closed-form estimate.
    """
    if scan is None:
        scan = (0.0, 6.0 * p.g)
    lo, hi = max(scan[0], 1e-9 * p.g), scan[1]
    act = _active_indices(n)

    def bld(x: float) -> np.ndarray:
        A = _batched_blocks(n, np.array([x]), p, form)[0]
        return A[np.ix_(act, act)]

    roots = find_coalescences(bld, lo, hi)
    for root in roots:
        track = track_branches(n, p, [root], form=form)
        lam = track.eigenvalues[0]
        finite = [i for i in range(4) if np.isfinite(lam[i])]
        pairs = [(i, j) for i in finite for j in finite if i < j]
        gaps = {(i, j): abs(lam[i] - lam[j]) for i, j in pairs}
        (i, j), gap = min(gaps.items(), key=lambda kv: kv[1])
        if {i, j} == {0, 1} and gap < COALESCENCE_TOL * p.g:
            try:
                formula = ep_formula(n, p)
            except NegativeRadicand:
                formula = float("nan")
            return EpResult(n, root, formula, float(gap))
    raise NoCoalescenceInRange(
        f"no coalescence of the tracked pair for rung {n} in gamma_theta range {scan}"
    )


def linewidth_ratio(n: int, gamma_theta: float, p: SystemParams, form: str = "projected") -> float:
    """(Gamma_n + Gamma_{n-2}) / Gamma_{n-1} of the tracked (-,-) branches."""
    if n < 3:
        raise ValueError(f"the three-rung ratio needs n >= 3, got {n}")
    gammas = {}
    for m in (n, n - 1, n - 2):
        track = track_branches(m, p, [gamma_theta], form=form)
        gammas[m] = float(track.eigenvalues[0, 0].real)
        if not np.isfinite(gammas[m]) or gammas[m] < 0:
            raise BranchTrackingLost(f"narrow branch of rung {m} lost at gamma_theta={gamma_theta}")
    if abs(gammas[n - 1]) < 1e-14:
        raise BranchTrackingLost(f"vanishing denominator linewidth at rung {n - 1}")
    return (gammas[n] + gammas[n - 2]) / gammas[n - 1]


def dpt_diagnostics(
    p: SystemParams,
    gamma_grid: Sequence[float],
    n_rungs: int = 50,
    form: str = "projected",
) -> DptDiagnostics:
    """Narrow-branch observables for rungs 1..n_rungs over a coupling grid.

    The ladder sum G is truncated at n_rungs; its 2^-n weighting leaves a
    tail below 1e-15 by n = 50.  dG/dgamma_theta is taken by central
    finite differences on the grid.
    """
    grid = np.atleast_1d(np.asarray(gamma_grid, dtype=float))
    if grid.size < 2 or np.any(grid < 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("gamma grid must be sorted, non-negative, with >= 2 points")
    if n_rungs < 2:
        raise ValueError(f"need n_rungs >= 2, got {n_rungs}")

    shape = (n_rungs + 1, grid.size)
    lam_mm = np.full(shape, np.nan + 0j)
    lam_mp = np.full(shape, np.nan + 0j)
    C00 = np.full(shape, np.nan)
    C11 = np.full(shape, np.nan)
    warnings: list[str] = []
    for m in range(1, n_rungs + 1):
        track = track_branches(m, p, grid, form=form)
        lam_mm[m] = track.eigenvalues[:, 0]
        lam_mp[m] = track.eigenvalues[:, 1]
        C00[m] = np.abs(track.vectors[:, 0, 0]) ** 2
        C11[m] = np.abs(track.vectors[:, 1, 0]) ** 2 if m >= 2 else np.nan

    G_mm = lam_mm.real
    denom = G_mm[2]
    bad = ~(np.abs(denom) > 1e-14)
    if np.any(bad):
        warnings.append(f"reference rung-2 linewidth below 1e-14 at {int(bad.sum())} grid point(s)")
        denom = np.where(bad, np.nan, denom)

    weights = 0.5 ** np.arange(1, n_rungs + 1)
    G_values = np.nansum(G_mm[1:] * weights[:, None], axis=0) / denom
    with np.errstate(divide="ignore", invalid="ignore"):
        E_n = np.log(G_mm / denom[None, :])
    E_n[0] = np.nan
    E_n[2] = np.nan  # excluded by definition: identically zero

    eq3 = np.full(shape, np.nan)
    for m in range(3, n_rungs + 1):
        eq3[m] = (G_mm[m] + G_mm[m - 2]) / G_mm[m - 1]

    dG = np.gradient(G_values, grid)
    return DptDiagnostics(
        gamma_grid=grid,
        n_rungs=n_rungs,
        G_values=G_values,
        dG_values=dG,
        E_n=E_n,
        C00_sq=C00,
        C11_sq=C11,
        eq3_ratio=eq3,
        lam_mm=lam_mm,
        lam_mp=lam_mp,
        warnings=tuple(warnings),
    )


def block_basis_operators(n: int, trunc: FockTruncation) -> list[np.ndarray | None]:
    """The four transition operators spanning the (n, n-1) block, as dense
    matrices on the truncated space; entries are None for the null n=1 cases."""
    dim = trunc.dim

    def unit(ni: int, ai: int, nj: int, aj: int) -> np.ndarray:
        X = np.zeros((dim, dim), dtype=complex)
        X[basis_index(ni, ai), basis_index(nj, aj)] = 1.0
        return X

    ops: list[np.ndarray | None] = [unit(n, 0, n - 1, 0), None, unit(n - 1, 1, n - 1, 0), None]
    if n >= 2:
        ops[1] = unit(n - 1, 1, n - 2, 1)
        ops[3] = unit(n, 0, n - 2, 1)
    return ops


def block_projection_oracle(
    n: int,
    p: SystemParams,
    phonon_prefactor: float | None = None,
    gamma_theta: float | None = None,
) -> np.ndarray:
    """Numerical projection of the gain-free generator onto the block basis.

    Returns the 4x4 generator M of the coefficient dynamics dC/dt = M C in
    the frame rotating at the cavity frequency (so that -M is directly
    comparable to :func:`build_block` entries).  Null operators at n = 1
    produce zero rows/columns.
    """
    _check_resonance(p)
    if gamma_theta is not None:
        p = p.replace(gamma_theta=float(gamma_theta))
    trunc = FockTruncation(n + 1)
    L = gain_free_liouvillian(p, trunc, frame_shift=p.omega_c, phonon_prefactor=phonon_prefactor)
    ops = block_basis_operators(n, trunc)
    M = np.zeros((4, 4), dtype=complex)
    for j, Bj in enumerate(ops):
        if Bj is None:
            continue
        img = L.matrix @ vectorize(Bj)
        for i, Bi in enumerate(ops):
            if Bi is None:
                continue
            M[i, j] = np.vdot(vectorize(Bi), img)
    return M


def compare_block_conventions(n: int, p: SystemParams) -> str:
    """Entry-wise comparison report: projection oracle vs both block forms.

    Checks the oracle under both phonon prefactor conventions
    (gamma_theta/2 and gamma_theta) and both overall sign conventions
    against the projected and printed matrices, reporting max entry
    deviations and eigenvalue-set distances.
    """
    lines = [f"block convention report: rung n={n}, gamma_theta={p.gamma_theta} meV"]
    act = list(_active_indices(n))

    def eigset(A: np.ndarray) -> np.ndarray:
        return np.sort_complex(np.linalg.eigvals(A[np.ix_(act, act)]))

    forms = {name: build_block(n, p, form=name).entries for name in ("projected", "printed")}
    for conv, pref in (("gamma_theta/2", None), ("gamma_theta", p.gamma_theta)):
        M = block_projection_oracle(n, p, phonon_prefactor=pref)
        for name, A in forms.items():
            for sign_name, S in (("-M", -M), ("+M", M)):
                d_ent = float(np.max(np.abs(A - S)))
                d_eig = float(np.max(np.abs(eigset(A) - eigset(S))))
                verdict = "  MATCH" if d_ent < 1e-10 else ""
                lines.append(
                    f"  oracle[{conv:>13}] vs {name:>9} ({sign_name}): "
                    f"max|entry diff| = {d_ent:.3e}, max|eig diff| = {d_eig:.3e}{verdict}"
                )
    return "\n".join(lines)
