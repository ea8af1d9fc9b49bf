"""Python bindings for the zsspec spectral toolkit."""

from ._zsspec import (
    DEFAULT_TOL,
    ActionRecord,
    ConvergenceError,
    Error,
    GapProfile,
    GapRecord,
    GapSolution,
    InconsistencyError,
    InputError,
    IntegrationError,
    LabelingError,
    Potential,
    SegmentCapacity,
    SpectralSummary,
    analyze_potential,
    audit_gaps,
    audit_potential,
    gap_v,
    greedy_select,
    lyapunov,
    monodromy,
    run_config,
    single_slit_map,
    solve_gap_profile,
    validate_config,
    weighted_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
