//! Solve outcome bookkeeping.

/// Outcome of one Krylov solve.
///
/// `final_residual` is the true residual ||b - Ax|| / ||b|| recomputed from
/// scratch at exit; iteration control runs on the cheaper recurrence
/// residual, whose per-iteration relative values are in `residual_history`.
/// `converged` implies `final_residual <= tol`.
#[derive(Debug, Clone)]
pub struct SolverReport {
    pub iterations: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub breakdown: bool,
    /// Deterministic reduction operations performed during the solve.
    pub reduction_count: u64,
    pub residual_history: Vec<f64>,
}

impl SolverReport {
    pub(crate) fn new() -> SolverReport {
        SolverReport {
            iterations: 0,
            final_residual: f64::NAN,
            converged: false,
            breakdown: false,
            reduction_count: 0,
            residual_history: Vec::new(),
        }
    }
}
