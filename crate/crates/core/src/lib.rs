//! A miniature layered-architecture framework for column-structured meshes:
//! algorithm programs written against a small kernel-metadata DSL are
//! compiled into parallel execution plans (halo exchanges inserted by
//! dependence analysis, loops coloured and work-shared by transformations),
//! executed over partitioned extruded meshes, with a Krylov solver and
//! preconditioner stack on top.

pub mod compiler;
pub mod dsl;
pub mod exchange;
pub mod executor;
pub mod fields;
pub mod mesh;
pub mod solvers;

pub use fields::{Field, FunctionSpace, LocalOperator, SpaceKind};
pub use mesh::{GlobalMesh2d, LocalMesh3d, Partition};
