//! Deterministic partitioning of global meshes with vertex-adjacency halos.

use std::collections::HashSet;
use std::sync::Arc;

use super::{GlobalMesh2d, MeshError, MeshKind};

/// Ownership and halo layers for every rank of a partitioned mesh.
///
/// Owned sets are disjoint and cover all cells. The depth-d halo of a rank is
/// every cell sharing a vertex with its depth-(d-1) region, minus anything
/// nearer; vertex adjacency (not edge adjacency) so that a depth-1 halo
/// closes over every dof a boundary cell can touch.
#[derive(Debug)]
pub struct Partition {
    pub nranks: usize,
    pub max_halo_depth: usize,
    owner: Vec<u16>,
    owned: Vec<Vec<usize>>,
    halos: Vec<Vec<Vec<usize>>>,
}

impl Partition {
    pub fn owner(&self, cell: usize) -> usize {
        self.owner[cell] as usize
    }

    /// Cells owned by `rank`, ascending global id.
    pub fn owned(&self, rank: usize) -> &[usize] {
        &self.owned[rank]
    }

    /// Halo cells of `rank` at `depth` (1-based), ascending global id.
    pub fn halo(&self, rank: usize, depth: usize) -> &[usize] {
        &self.halos[rank][depth - 1]
    }

    pub fn halo_depths(&self, rank: usize) -> &[Vec<usize>] {
        &self.halos[rank]
    }
}

/// Splits `n` items over `k` balanced contiguous blocks; block `r` covers
/// `[split(n,k,r), split(n,k,r+1))`.
fn split(n: usize, k: usize, r: usize) -> usize {
    r * n / k
}

fn block_of(n: usize, k: usize, i: usize) -> usize {
    // Inverse of `split`: the unique r with split(r) <= i < split(r+1).
    let mut r = (i * k) / n;
    while split(n, k, r + 1) <= i {
        r += 1;
    }
    while split(n, k, r) > i {
        r -= 1;
    }
    r
}

/// Serpentine (boustrophedon) cell ordering: row-major with alternating row
/// direction, per panel for cubed spheres. Used as the deterministic
/// space-filling order when no rectangular tiling fits.
fn serpentine_order(mesh: &GlobalMesh2d) -> Vec<usize> {
    let (width, height, panels) = match mesh.kind {
        MeshKind::Planar { nx, ny, .. } => (nx, ny, 1),
        MeshKind::CubedSphere { n } => (n, n, 6),
    };
    let mut order = Vec::with_capacity(mesh.n_cells());
    for p in 0..panels {
        let base = p * width * height;
        for j in 0..height {
            if j % 2 == 0 {
                order.extend((0..width).map(|i| base + j * width + i));
            } else {
                order.extend((0..width).rev().map(|i| base + j * width + i));
            }
        }
    }
    order
}

/// Assigns an owner rank to every cell.
fn assign_owners(mesh: &GlobalMesh2d, nranks: usize) -> Vec<u16> {
    let ncells = mesh.n_cells();
    let mut owner = vec![0u16; ncells];
    match mesh.kind {
        MeshKind::Planar { nx, ny, .. } => {
            // Prefer the rectangular tiling px*py == nranks whose blocks are
            // closest to square; fall back to serpentine ranges.
            let mut best: Option<(usize, usize, usize)> = None;
            for px in 1..=nranks {
                if nranks % px != 0 {
                    continue;
                }
                let py = nranks / px;
                if px > nx || py > ny {
                    continue;
                }
                let skew = (nx * py).abs_diff(ny * px);
                if best.map_or(true, |(s, ..)| skew < s) {
                    best = Some((skew, px, py));
                }
            }
            if let Some((_, px, py)) = best {
                for j in 0..ny {
                    for i in 0..nx {
                        let r = block_of(ny, py, j) * px + block_of(nx, px, i);
                        owner[j * nx + i] = r as u16;
                    }
                }
                return owner;
            }
        }
        MeshKind::CubedSphere { n } => {
            // Panel tiling when nranks = 6k^2 with k <= n.
            let k = (1..=n).find(|&k| 6 * k * k == nranks);
            if let Some(k) = k {
                for f in 0..6 {
                    for j in 0..n {
                        for i in 0..n {
                            let r = f * k * k + block_of(n, k, j) * k + block_of(n, k, i);
                            owner[f * n * n + j * n + i] = r as u16;
                        }
                    }
                }
                return owner;
            }
        }
    }
    for (pos, cell) in serpentine_order(mesh).into_iter().enumerate() {
        owner[cell] = block_of(mesh.n_cells(), nranks, pos) as u16;
    }
    owner
}

/// Partitions `mesh` over `nranks` ranks and grows vertex-adjacency halo
/// layers to `max_halo_depth`.
pub fn partition(
    mesh: &Arc<GlobalMesh2d>,
    nranks: usize,
    max_halo_depth: usize,
) -> Result<Arc<Partition>, MeshError> {
    if nranks == 0 {
        return Err(MeshError::ZeroRanks);
    }
    if nranks > mesh.n_cells() {
        return Err(MeshError::TooManyRanks {
            cells: mesh.n_cells(),
            nranks,
        });
    }
    let owner = assign_owners(mesh, nranks);

    let mut owned = vec![Vec::new(); nranks];
    for (cell, &r) in owner.iter().enumerate() {
        owned[r as usize].push(cell);
    }

    let mut halos = Vec::with_capacity(nranks);
    for r in 0..nranks {
        let mut region: HashSet<usize> = owned[r].iter().copied().collect();
        let mut frontier: Vec<usize> = owned[r].clone();
        let mut layers = Vec::with_capacity(max_halo_depth);
        for _ in 0..max_halo_depth {
            let mut next: Vec<usize> = Vec::new();
            for &c in &frontier {
                for n in mesh.vertex_neighbours(c) {
                    if !region.contains(&n) {
                        region.insert(n);
                        next.push(n);
                    }
                }
            }
            next.sort_unstable();
            layers.push(next.clone());
            frontier = next;
        }
        halos.push(layers);
    }

    Ok(Arc::new(Partition {
        nranks,
        max_halo_depth,
        owner,
        owned,
        halos,
    }))
}
