//! Linear solver stack: vector/operator/preconditioner abstractions, Krylov
//! methods, per-column tridiagonal algebra, vertical line relaxation,
//! Schur-complement pressure preconditioning and a simplified geometric
//! multigrid.
//!
//! Each Krylov method is implemented once against the abstract traits and
//! works with any vector type; dot products go through the deterministic
//! ascending-global-id reduction, so iteration counts and residual histories
//! are bitwise identical for any rank count.

mod helmholtz;
mod krylov;
mod line;
mod mixed;
mod multigrid;
mod report;
mod tri;
mod vector;

pub use helmholtz::HelmholtzOperator;
pub use krylov::{bicgstab, cg, gmres};
pub use line::{vertical_line_preconditioner, VerticalLinePrecond};
pub use mixed::{
    schur_pressure_preconditioner, LumpedSchurOperator, MixedOperator, SchurPressurePrecond,
};
pub use multigrid::MultigridPrecond;
pub use report::SolverReport;
pub use tri::ColumnTriMatrix;
pub use vector::{
    DenseVector, FieldVector, IdentityPrecond, LinearOperator, Preconditioner, SolverComm,
    SolverField, Vector,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("zero pivot in tridiagonal solve at column {column}, row {row}")]
    ZeroPivot { column: usize, row: usize },
    #[error("column/layer shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("multigrid needs a horizontally 2^(levels-1)-coarsenable mesh: {0}")]
    NotCoarsenable(String),
    #[error("multigrid supports single-rank meshes only (got {0} ranks)")]
    MultigridRanks(usize),
}
