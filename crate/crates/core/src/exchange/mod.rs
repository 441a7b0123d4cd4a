//! Halo-exchange routing, deterministic global reductions and an in-process
//! multi-rank harness.
//!
//! The harness stands in for a message-passing layer at desk scale: ranks
//! run as threads (or under a deterministic sequential interleave), mailboxes
//! are the only cross-rank channel, and reductions fold contributions in
//! ascending global dof id order so results are bitwise independent of the
//! rank count.

mod harness;
mod routing;

pub use harness::{halo_exchange, run_ranks, ExecMode, Harness, Rank};
pub use routing::{build_routing, Peer, RoutingTable};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ExchangeError {
    #[error("global dof id {0} appears in a halo but no rank owns it")]
    UnownedHaloId(u64),
    #[error("global dof id {0} is owned by more than one rank")]
    DuplicateOwnership(u64),
    #[error("duplicate contribution for global dof id {0} in a reduction")]
    DuplicateContribution(u64),
    #[error("exchange depth {depth} exceeds routing table depth {max}")]
    DepthOutOfRange { depth: usize, max: usize },
    #[error("deadlock: all ranks blocked with no messages in flight")]
    Deadlock,
    #[error("rank {rank} panicked: {message}")]
    RankPanic { rank: usize, message: String },
}
