//! Horizontal meshes and their partitioned, extruded local views.
//!
//! The horizontal (2D) mesh is treated as unstructured: quadrilateral cells
//! with explicit vertex, edge and adjacency tables. The vertical direction is
//! structured and never stored per layer; a [`LocalMesh3d`] is a partitioned
//! 2D mesh plus a layer count.

mod colouring;
mod global;
mod local;
mod partition;

pub use colouring::{colour, Colouring};
pub use global::{build_cubed_sphere, build_planar, Edge, EdgeAxis, GlobalMesh2d, MeshKind};
pub use local::{extrude, LocalMesh3d};
pub use partition::{partition, Partition};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cubed-sphere subdivision count must be >= 1")]
    ZeroSubdivision,
    #[error("planar mesh extents must be >= 1 (got {0}x{1})")]
    EmptyPlanar(usize, usize),
    #[error("a periodic axis needs extent >= 3 so neighbours are distinct (got {0}x{1})")]
    PeriodicTooSmall(usize, usize),
    #[error("cannot partition {cells} cells over {nranks} ranks")]
    TooManyRanks { cells: usize, nranks: usize },
    #[error("rank count must be >= 1")]
    ZeroRanks,
    #[error("rank {rank} out of range for partition over {nranks} ranks")]
    RankOutOfRange { rank: usize, nranks: usize },
    #[error("layer count must be >= 1")]
    ZeroLayers,
}
