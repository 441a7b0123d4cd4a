//! Function spaces, fields and per-cell local operators.
//!
//! A dof is addressed as `map(df, col) + k`: `map` holds the index of the
//! bottom-layer entry of the df's entity column, and vertically adjacent
//! dofs are contiguous in storage.

mod field;
mod operator;
mod space;

pub use field::{make_field, Field};
pub use operator::LocalOperator;
pub use space::{make_function_space, ColumnInfo, DofRegion, EntityClass, FunctionSpace, SpaceKind};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("df {df} out of range for space with {ndf} dofs per cell")]
    DfOutOfRange { df: usize, ndf: usize },
    #[error("column {col} out of range ({ncells} local columns)")]
    ColOutOfRange { col: usize, ncells: usize },
    #[error("k={k} outside the vertical range of df {df} ({entries} entries)")]
    KOutOfRange { k: usize, df: usize, entries: usize },
    #[error("halo depth {depth} exceeds the partition's maximum {max}")]
    DepthOutOfRange { depth: usize, max: usize },
    #[error("operator block shape mismatch: expected {expected} entries per layer, got {got}")]
    OperatorShape { expected: usize, got: usize },
}
