"""Dissipative Jaynes-Cummings simulator with phonon-assisted coupling.

Computes photoluminescence spectra of an incoherently pumped QD-cavity
system from the stationary field autocorrelation, and analyzes the
excitation-conserving blocks of the pump-free generator: exceptional
points, linewidth ladder and the doublet/coexistence/singlet emission
phases they organize.
"""

__version__ = "0.1.0"

from .blocks import (
    BlockEigenSystem,
    BlockMatrix,
    BranchTrackingLost,
    DptDiagnostics,
    EpResult,
    NegativeRadicand,
    NoCoalescenceInRange,
    NonzeroDetuning,
    block_eigensystem,
    block_projection_oracle,
    build_block,
    compare_block_conventions,
    dpt_diagnostics,
    ep_formula,
    ep_locate_numeric,
    linewidth_ratio,
    track_branches,
)
from .hilbert import (
    DEFAULT_PARAMS,
    FockTruncation,
    SystemParams,
    annihilation,
    effective_k,
    excitation_number,
    hamiltonian,
    lowering,
)
from .liouvillian import (
    LiouvillianMatrix,
    dissipator,
    full_liouvillian,
    gain_free_liouvillian,
    unvectorize,
    vectorize,
)
from .spectrum import (
    Peak,
    Spectrum,
    UnstableMode,
    correlation_transfer,
    emission_spectrum,
    extract_peaks,
    integrated_intensity,
)
from .steadystate import (
    NonUniqueSteadyState,
    SteadyStateResult,
    choose_truncation,
    solve_steady_state,
)
from .sweeps import (
    HC_MEV_NM,
    DetuningPoint,
    GammaSweepResult,
    NonpositiveEnergy,
    detuning_sweep,
    gamma_sweep,
    wavelength_of,
)
