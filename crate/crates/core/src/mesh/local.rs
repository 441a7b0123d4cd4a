//! Rank-local extruded meshes.

use std::collections::HashMap;
use std::sync::Arc;

use super::{GlobalMesh2d, MeshError, Partition};

/// One rank's view of the mesh: owned cells first, then halo cells by
/// ascending depth (ascending global id within each group), extruded into
/// `nlayers` implicit layers. The vertical carries no storage; a 3D cell is
/// (local column, layer).
#[derive(Debug)]
pub struct LocalMesh3d {
    pub global: Arc<GlobalMesh2d>,
    pub partition: Arc<Partition>,
    pub rank: usize,
    pub nlayers: usize,
    local_cells: Vec<usize>,
    global_to_local: HashMap<usize, usize>,
    owned_cells: usize,
    depth_ends: Vec<usize>,
    verts: Vec<usize>,
    edges: Vec<usize>,
    vert_l: HashMap<usize, usize>,
    edge_l: HashMap<usize, usize>,
    cell_verts: Vec<[usize; 4]>,
    cell_edges: Vec<[usize; 4]>,
    cell_neighbours: Vec<[Option<usize>; 4]>,
    vert_cells: Vec<Vec<usize>>,
}

impl LocalMesh3d {
    pub fn n_cells(&self) -> usize {
        self.local_cells.len()
    }

    /// Number of owned cells; they occupy local indices `0..owned_cells()`.
    pub fn owned_cells(&self) -> usize {
        self.owned_cells
    }

    /// Number of local cells in the region up to halo `depth` (0 = owned).
    pub fn cells_to_depth(&self, depth: usize) -> usize {
        if depth == 0 {
            self.owned_cells
        } else {
            self.depth_ends[depth - 1]
        }
    }

    pub fn max_halo_depth(&self) -> usize {
        self.depth_ends.len()
    }

    /// Halo depth of a local cell: 0 for owned, d for the depth-d band.
    pub fn cell_depth(&self, local: usize) -> usize {
        if local < self.owned_cells {
            return 0;
        }
        1 + self.depth_ends.partition_point(|&end| end <= local)
    }

    pub fn cell_global(&self, local: usize) -> usize {
        self.local_cells[local]
    }

    pub fn cell_local(&self, global: usize) -> Option<usize> {
        self.global_to_local.get(&global).copied()
    }

    pub fn n_verts(&self) -> usize {
        self.verts.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vert_global(&self, local: usize) -> usize {
        self.verts[local]
    }

    pub fn edge_global(&self, local: usize) -> usize {
        self.edges[local]
    }

    pub fn cell_verts(&self, local: usize) -> [usize; 4] {
        self.cell_verts[local]
    }

    pub fn cell_edges(&self, local: usize) -> [usize; 4] {
        self.cell_edges[local]
    }

    /// Local neighbour across each edge; `None` when the neighbour is not in
    /// this rank's local cell set (or the edge is a mesh boundary).
    pub fn cell_neighbours(&self, local: usize) -> [Option<usize>; 4] {
        self.cell_neighbours[local]
    }

    /// Local cells incident to a local vertex, ascending.
    pub fn vert_cells(&self, local_vert: usize) -> &[usize] {
        &self.vert_cells[local_vert]
    }

    /// +1.0 if the edge's canonical normal points out of the local cell.
    pub fn edge_outward_sign(&self, local_cell: usize, local_edge: usize) -> f64 {
        self.global
            .edge(self.edges[local_edge])
            .outward_sign(self.local_cells[local_cell])
    }
}

/// Extrudes one rank of a partitioned mesh into its local 3D view.
pub fn extrude(
    mesh: &Arc<GlobalMesh2d>,
    part: &Arc<Partition>,
    rank: usize,
    nlayers: usize,
) -> Result<Arc<LocalMesh3d>, MeshError> {
    if rank >= part.nranks {
        return Err(MeshError::RankOutOfRange {
            rank,
            nranks: part.nranks,
        });
    }
    if nlayers == 0 {
        return Err(MeshError::ZeroLayers);
    }

    let mut local_cells: Vec<usize> = part.owned(rank).to_vec();
    let owned_cells = local_cells.len();
    let mut depth_ends = Vec::with_capacity(part.max_halo_depth);
    for layer in part.halo_depths(rank) {
        local_cells.extend_from_slice(layer);
        depth_ends.push(local_cells.len());
    }
    let global_to_local: HashMap<usize, usize> =
        local_cells.iter().enumerate().map(|(l, &g)| (g, l)).collect();

    let mut verts: Vec<usize> = local_cells
        .iter()
        .flat_map(|&c| mesh.cell_verts(c))
        .collect();
    verts.sort_unstable();
    verts.dedup();
    let vert_l: HashMap<usize, usize> = verts.iter().enumerate().map(|(l, &g)| (g, l)).collect();

    let mut edges: Vec<usize> = local_cells
        .iter()
        .flat_map(|&c| mesh.cell_edges(c))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let edge_l: HashMap<usize, usize> = edges.iter().enumerate().map(|(l, &g)| (g, l)).collect();

    let cell_verts: Vec<[usize; 4]> = local_cells
        .iter()
        .map(|&c| mesh.cell_verts(c).map(|v| vert_l[&v]))
        .collect();
    let cell_edges: Vec<[usize; 4]> = local_cells
        .iter()
        .map(|&c| mesh.cell_edges(c).map(|e| edge_l[&e]))
        .collect();
    let cell_neighbours: Vec<[Option<usize>; 4]> = local_cells
        .iter()
        .map(|&c| {
            mesh.cell_neighbours(c)
                .map(|n| n.and_then(|n| global_to_local.get(&n).copied()))
        })
        .collect();

    let mut vert_cells = vec![Vec::new(); verts.len()];
    for (l, vs) in cell_verts.iter().enumerate() {
        for &v in vs {
            vert_cells[v].push(l);
        }
    }
    for cs in &mut vert_cells {
        cs.sort_unstable();
    }

    Ok(Arc::new(LocalMesh3d {
        global: Arc::clone(mesh),
        partition: Arc::clone(part),
        rank,
        nlayers,
        local_cells,
        global_to_local,
        owned_cells,
        depth_ends,
        verts,
        edges,
        vert_l,
        edge_l,
        cell_verts,
        cell_edges,
        cell_neighbours,
        vert_cells,
    }))
}

impl LocalMesh3d {
    pub fn vert_local(&self, global: usize) -> Option<usize> {
        self.vert_l.get(&global).copied()
    }

    pub fn edge_local(&self, global: usize) -> Option<usize> {
        self.edge_l.get(&global).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cubed_sphere, build_planar, partition};

    #[test]
    fn c1_single_rank() {
        let mesh = Arc::new(build_cubed_sphere(1).unwrap());
        let part = partition(&mesh, 1, 1).unwrap();
        let local = extrude(&mesh, &part, 0, 30).unwrap();
        assert_eq!(local.n_cells(), 6);
        assert_eq!(local.owned_cells(), 6);
        assert_eq!(local.nlayers, 30);
    }

    #[test]
    fn torus_4x4_rank0_ordering() {
        let mesh = Arc::new(build_planar(4, 4, true, true).unwrap());
        let part = partition(&mesh, 4, 1).unwrap();
        let local = extrude(&mesh, &part, 0, 5).unwrap();
        assert_eq!(local.n_cells(), 16);
        assert_eq!(local.owned_cells(), 4);
        assert_eq!(local.cells_to_depth(1), 16);
        // Owned prefix ascending, halo group ascending.
        for l in 0..3 {
            assert!(local.cell_global(l) < local.cell_global(l + 1));
            assert_eq!(local.cell_depth(l), 0);
        }
        for l in 4..16 {
            assert_eq!(local.cell_depth(l), 1);
        }
        for l in 5..15 {
            assert!(local.cell_global(l) < local.cell_global(l + 1));
        }
        // Bijection local <-> global over owned + halo.
        for l in 0..16 {
            assert_eq!(local.cell_local(local.cell_global(l)), Some(l));
        }
    }

    #[test]
    fn c12_full_extrusion() {
        let mesh = Arc::new(build_cubed_sphere(12).unwrap());
        let part = partition(&mesh, 1, 0).unwrap();
        let local = extrude(&mesh, &part, 0, 30).unwrap();
        assert_eq!(local.n_cells(), 864);
        assert_eq!(local.nlayers, 30);
    }

    #[test]
    fn rejects_bad_rank_and_layers() {
        let mesh = Arc::new(build_planar(3, 3, false, false).unwrap());
        let part = partition(&mesh, 2, 1).unwrap();
        assert!(extrude(&mesh, &part, 2, 4).is_err());
        assert!(extrude(&mesh, &part, 0, 0).is_err());
    }

    #[test]
    fn local_tables_are_consistent_with_global() {
        let mesh = Arc::new(build_cubed_sphere(3).unwrap());
        let part = partition(&mesh, 4, 2).unwrap();
        for rank in 0..4 {
            let local = extrude(&mesh, &part, rank, 3).unwrap();
            for l in 0..local.n_cells() {
                let g = local.cell_global(l);
                let gv = mesh.cell_verts(g);
                let lv = local.cell_verts(l);
                for i in 0..4 {
                    assert_eq!(local.vert_global(lv[i]), gv[i]);
                }
                let ge = mesh.cell_edges(g);
                let le = local.cell_edges(l);
                for i in 0..4 {
                    assert_eq!(local.edge_global(le[i]), ge[i]);
                }
            }
        }
    }
}
