"""Robust performance analysis and coherent guaranteed-cost controller
synthesis for uncertain linear quantum systems, with an independent
Lyapunov-equation cost oracle and a static-squeezer controller realization.
"""

from .analysis import (
    AnalysisOutcome,
    DEFAULT_THETA_GRID,
    Method,
    analyze_popov,
    analyze_smallgain,
    assemble_popov_analysis,
    assemble_smallgain_analysis,
)
from .lmi import (
    AffineConstraint,
    LmiProgram,
    SdpSolution,
    SolveStatus,
    certify,
    real_embed,
    solve,
)
from .oracle import (
    ClosedLoop,
    VerificationReport,
    closed_loop_drift,
    is_hurwitz,
    lyapunov_cost,
    sample_perturbation,
    steady_state_covariance,
    verify_bound,
)
from .qmodel import (
    CouplingOperator,
    DoubledMatrix,
    MatrixKind,
    UncertainSystem,
    UncertaintyClass,
    channel_commutator,
    commutation_matrix,
    diffusion_matrix,
    dpa_system,
    drift_matrix,
    perturbation_in_class,
    popov_offset,
    swap_matrix,
)
from .realize import (
    SqueezerRealization,
    bogoliubov_matrix,
    closed_loop_qsde_drift,
    coupling_for_squeeze,
    realization_residual,
    realized_coupling_term,
    solve_squeezer,
)
from .synthesis import (
    SynthesisOutcome,
    assemble_popov_synthesis,
    assemble_smallgain_synthesis,
    synth_popov,
    synth_smallgain,
)

__version__ = "0.1.0"

__all__ = [
    "AffineConstraint",
    "AnalysisOutcome",
    "ClosedLoop",
    "CouplingOperator",
    "DEFAULT_THETA_GRID",
    "DoubledMatrix",
    "LmiProgram",
    "MatrixKind",
    "Method",
    "SdpSolution",
    "SolveStatus",
    "SqueezerRealization",
    "SynthesisOutcome",
    "UncertainSystem",
    "UncertaintyClass",
    "VerificationReport",
    "analyze_popov",
    "analyze_smallgain",
    "assemble_popov_analysis",
    "assemble_popov_synthesis",
    "assemble_smallgain_analysis",
    "assemble_smallgain_synthesis",
    "bogoliubov_matrix",
    "certify",
    "channel_commutator",
    "closed_loop_drift",
    "closed_loop_qsde_drift",
    "commutation_matrix",
    "coupling_for_squeeze",
    "diffusion_matrix",
    "dpa_system",
    "drift_matrix",
    "is_hurwitz",
    "lyapunov_cost",
    "perturbation_in_class",
    "popov_offset",
    "real_embed",
    "realization_residual",
    "realized_coupling_term",
    "sample_perturbation",
    "solve",
    "solve_squeezer",
    "steady_state_covariance",
    "swap_matrix",
    "synth_popov",
    "synth_smallgain",
    "verify_bound",
]
