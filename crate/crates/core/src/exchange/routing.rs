//! Routing-table construction from per-rank global dof id lists.

use std::collections::HashMap;

use super::ExchangeError;

/// Send/recv index lists of one rank, per peer and halo depth.
///
/// Local indices follow the caller's layout: owned ids are positional
/// (`owned[i]` has local index `i`) and halo groups continue sequentially.
/// Lists are ordered by ascending global dof id, which makes rank A's send
/// sequence to B identical to B's recv sequence from A.
#[derive(Debug, Clone)]
pub struct RoutingTable {
    pub rank: usize,
    pub max_depth: usize,
    /// peers[p] lists, present only for peers with traffic; sorted by peer.
    peers: Vec<Peer>,
}

#[derive(Debug, Clone)]
pub struct Peer {
    pub rank: usize,
    /// send[d-1]: (gid, local index) of owned dofs this rank provides for
    /// the peer's depth-d halo.
    pub send: Vec<Vec<(u64, usize)>>,
    /// recv[d-1]: (gid, local index) of halo slots filled at depth d.
    pub recv: Vec<Vec<(u64, usize)>>,
}

impl RoutingTable {
    /// Table with no traffic at all (single rank, or halo-free layouts).
    pub fn empty(rank: usize) -> RoutingTable {
        RoutingTable {
            rank,
            max_depth: 0,
            peers: Vec::new(),
        }
    }

    pub fn peers(&self) -> &[Peer] {
        &self.peers
    }

    pub fn peer(&self, rank: usize) -> Option<&Peer> {
        self.peers.iter().find(|p| p.rank == rank)
    }

    /// Total recv entries up to `depth`.
    pub fn recv_count(&self, depth: usize) -> usize {
        self.peers
            .iter()
            .map(|p| p.recv[..depth].iter().map(Vec::len).sum::<usize>())
            .sum()
    }
}

/// Builds all ranks' routing tables from owned and per-depth halo global id
/// lists. Collective in spirit, deterministic by construction.
pub fn build_routing(
    owned_ids: &[Vec<u64>],
    halo_ids: &[Vec<Vec<u64>>],
) -> Result<Vec<RoutingTable>, ExchangeError> {
    let nranks = owned_ids.len();
    assert_eq!(halo_ids.len(), nranks);
    let max_depth = halo_ids.iter().map(Vec::len).max().unwrap_or(0);

    let mut owner_of: HashMap<u64, (usize, usize)> = HashMap::new();
    for (rank, ids) in owned_ids.iter().enumerate() {
        for (idx, &gid) in ids.iter().enumerate() {
            if owner_of.insert(gid, (rank, idx)).is_some() {
                return Err(ExchangeError::DuplicateOwnership(gid));
            }
        }
    }

    // (owner, receiver, depth) -> list of (gid, owner local idx, recv local idx)
    let mut traffic: HashMap<(usize, usize, usize), Vec<(u64, usize, usize)>> = HashMap::new();
    for (rank, groups) in halo_ids.iter().enumerate() {
        let mut local = owned_ids[rank].len();
        for (d, group) in groups.iter().enumerate() {
            for &gid in group {
                let &(owner, owner_idx) = owner_of
                    .get(&gid)
                    .ok_or(ExchangeError::UnownedHaloId(gid))?;
                traffic
                    .entry((owner, rank, d))
                    .or_default()
                    .push((gid, owner_idx, local));
                local += 1;
            }
        }
    }

    let mut tables: Vec<RoutingTable> = (0..nranks)
        .map(|rank| RoutingTable {
            rank,
            max_depth,
            peers: Vec::new(),
        })
        .collect();

    let peer_slot = |tables: &mut Vec<RoutingTable>, rank: usize, peer: usize| -> usize {
        let t = &mut tables[rank];
        match t.peers.iter().position(|p| p.rank == peer) {
            Some(i) => i,
            None => {
                t.peers.push(Peer {
                    rank: peer,
                    send: vec![Vec::new(); max_depth],
                    recv: vec![Vec::new(); max_depth],
                });
                t.peers.len() - 1
            }
        }
    };

    let mut keys: Vec<_> = traffic.keys().copied().collect();
    keys.sort_unstable();
    for (owner, receiver, d) in keys {
        let mut entries = traffic.remove(&(owner, receiver, d)).unwrap();
        entries.sort_unstable_by_key(|&(gid, ..)| gid);
        if owner == receiver {
            // A rank never exchanges with itself; its "halo" of own dofs
            // would be a layout bug upstream.
            debug_assert!(entries.is_empty());
            continue;
        }
        let si = peer_slot(&mut tables, owner, receiver);
        tables[owner].peers[si].send[d] =
            entries.iter().map(|&(gid, o, _)| (gid, o)).collect();
        let ri = peer_slot(&mut tables, receiver, owner);
        tables[receiver].peers[ri].recv[d] =
            entries.iter().map(|&(gid, _, r)| (gid, r)).collect();
    }
    for t in &mut tables {
        t.peers.sort_by_key(|p| p.rank);
    }
    Ok(tables)
}
