//! Deciding `Δ^III x = A x`: least-squares fit of `A`, structural checks of
//! the fitted matrix, residuals of the reduced system and the `λ ≠ μ`
//! contradiction.

mod case2;
mod fit;
mod reduced;

pub use case2::{
    case2_coefficients, case2_scan, elimination_check, quartic_coefficients, scan_points, BoxBound,
    Case2Certificate, Case2Coefficients, EliminationReport, Interval, MuZeroCheck, ScanPoint,
    ScanRange, DEFAULT_SCAN_THRESHOLD,
};
pub use fit::{
    evaluate_grid, fit_evaluation, fit_matrix, solve_least_squares, structure_check, FitReport,
    FitSample, FitThresholds, GridEvaluation, LeastSquares, StructureDiagnostics, Verdict,
};
pub use reduced::{
    derivative_relation_check, reduced_residuals, reduced_rows, ReducedResiduals, ReducedRow,
    RelationReport,
};
