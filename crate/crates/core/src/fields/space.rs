//! Function spaces: dof maps with `map(df, col) + k` addressing over a
//! local extruded mesh.

use std::collections::HashMap;
use std::sync::Arc;

use crate::mesh::LocalMesh3d;

use super::FieldError;

/// The lowest-order function spaces.
///
/// Dofs per 3D cell and entity layout (fixed df order, bottom before top):
///
/// * `W0` (8): cell vertices; df 0..4 bottom vertices, df 4..8 top.
/// * `W1` (12): cell edges; df 0..4 bottom horizontal edges, df 4..8 top
///   horizontal edges, df 8..12 vertical edges above vertices 0..4.
/// * `W2` (6): cell faces; df 0..4 side faces above edges 0..4, df 4 bottom
///   face, df 5 top face.
/// * `W3` (1): cell volume.
/// * `Wtheta` (2): df 0 bottom face centre, df 1 top face centre.
///
/// W0/W1/W2 share dofs across cells (horizontally continuous); W3 shares
/// nothing; Wtheta is horizontally discontinuous but vertically continuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    W0,
    W1,
    W2,
    W3,
    Wtheta,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 5] = [
        SpaceKind::W0,
        SpaceKind::W1,
        SpaceKind::W2,
        SpaceKind::W3,
        SpaceKind::Wtheta,
    ];

    pub fn ndf(self) -> usize {
        match self {
            SpaceKind::W0 => 8,
            SpaceKind::W1 => 12,
            SpaceKind::W2 => 6,
            SpaceKind::W3 => 1,
            SpaceKind::Wtheta => 2,
        }
    }

    /// Whether cells share dofs horizontally.
    pub fn horizontally_continuous(self) -> bool {
        matches!(self, SpaceKind::W0 | SpaceKind::W1 | SpaceKind::W2)
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::W0 => "W0",
            SpaceKind::W1 => "W1",
            SpaceKind::W2 => "W2",
            SpaceKind::W3 => "W3",
            SpaceKind::Wtheta => "Wtheta",
        }
    }

    pub fn parse(s: &str) -> Option<SpaceKind> {
        match s {
            "W0" => Some(SpaceKind::W0),
            "W1" => Some(SpaceKind::W1),
            "W2" => Some(SpaceKind::W2),
            "W3" => Some(SpaceKind::W3),
            "Wtheta" => Some(SpaceKind::Wtheta),
            _ => None,
        }
    }

    /// The 2D entity classes carrying this space's dof columns, with the
    /// vertical entry count of each column: horizontal entity classes get
    /// L+1 entries, vertical ones L.
    fn classes(self, nlayers: usize) -> Vec<(EntityClass, usize)> {
        let l = nlayers;
        match self {
            SpaceKind::W0 => vec![(EntityClass::Vertex, l + 1)],
            SpaceKind::W1 => vec![(EntityClass::Edge, l + 1), (EntityClass::Vertex, l)],
            SpaceKind::W2 => vec![(EntityClass::Edge, l), (EntityClass::Cell, l + 1)],
            SpaceKind::W3 => vec![(EntityClass::Cell, l)],
            SpaceKind::Wtheta => vec![(EntityClass::Cell, l + 1)],
        }
    }

    /// Per df: (class slot in `classes`, which sub-entity of the cell,
    /// vertical offset delta). `map(df, col) = column_base + delta`.
    fn df_layout(self) -> Vec<DfSpec> {
        let spec = |class_slot, sub, delta| DfSpec {
            class_slot,
            sub,
            delta,
        };
        match self {
            SpaceKind::W0 => (0..4)
                .map(|v| spec(0, v, 0))
                .chain((0..4).map(|v| spec(0, v, 1)))
                .collect(),
            SpaceKind::W1 => (0..4)
                .map(|e| spec(0, e, 0))
                .chain((0..4).map(|e| spec(0, e, 1)))
                .chain((0..4).map(|v| spec(1, v, 0)))
                .collect(),
            SpaceKind::W2 => (0..4)
                .map(|e| spec(0, e, 0))
                .chain([spec(1, 0, 0), spec(1, 0, 1)])
                .collect(),
            SpaceKind::W3 => vec![spec(0, 0, 0)],
            SpaceKind::Wtheta => vec![spec(0, 0, 0), spec(0, 0, 1)],
        }
    }
}

/// 2D entity classes a dof column can live on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntityClass {
    Vertex,
    Edge,
    Cell,
}

#[derive(Debug, Clone, Copy)]
struct DfSpec {
    class_slot: usize,
    sub: usize,
    delta: usize,
}

/// Where a dof sits relative to this rank's ownership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DofRegion {
    Owned,
    /// Not owned here, but on an owned cell. Updated by a depth-1 exchange.
    Annexed,
    Halo(usize),
}

/// One dof column: an entity's vertical run of consecutive indices
/// `base..base+len`.
#[derive(Debug, Clone, Copy)]
pub struct ColumnInfo {
    pub class: EntityClass,
    pub entity_local: usize,
    pub base: usize,
    pub len: usize,
}

/// A function space over one rank's local mesh.
///
/// Local dof indices are laid out `[owned | annexed | halo band 1 | ...]`,
/// entity columns consecutive within each region, regions sorted by
/// (entity class, global entity id). Owned dofs therefore occupy a
/// contiguous prefix and `dof_index(df, col, k+1) = dof_index(df, col, k)+1`.
#[derive(Debug)]
pub struct FunctionSpace {
    pub kind: SpaceKind,
    pub mesh: Arc<LocalMesh3d>,
    pub nlayers: usize,
    ndf: usize,
    undf: usize,
    last_owned: usize,
    last_annexed: usize,
    band_ends: Vec<usize>,
    dofmap: Vec<usize>,
    df_entries: Vec<usize>,
    global_ids: Vec<u64>,
    owner: Vec<u16>,
    columns: Vec<ColumnInfo>,
}

impl FunctionSpace {
    pub fn ndf(&self) -> usize {
        self.ndf
    }

    /// Total unique local dofs (owned + annexed + halo).
    pub fn undf(&self) -> usize {
        self.undf
    }

    /// End of the owned prefix.
    pub fn last_owned(&self) -> usize {
        self.last_owned
    }

    /// End of the owned+annexed prefix; dof loops iterate to here.
    pub fn last_annexed(&self) -> usize {
        self.last_annexed
    }

    /// End of the index range valid once the halo is clean to `depth`
    /// (depth 0 = owned + annexed).
    pub fn dofs_to_depth(&self, depth: usize) -> usize {
        if depth == 0 {
            self.last_annexed
        } else {
            self.band_ends[depth - 1]
        }
    }

    pub fn max_halo_depth(&self) -> usize {
        self.band_ends.len()
    }

    /// Base index of the bottom-layer dof for (df, col).
    pub fn map(&self, df: usize, col: usize) -> usize {
        self.dofmap[col * self.ndf + df]
    }

    /// Number of valid vertical entries for a df.
    pub fn df_vertical_entries(&self, df: usize) -> usize {
        self.df_entries[df]
    }

    /// `map(df, col) + k`, with range checking.
    pub fn dof_index(&self, df: usize, col: usize, k: usize) -> Result<usize, FieldError> {
        if df >= self.ndf {
            return Err(FieldError::DfOutOfRange { df, ndf: self.ndf });
        }
        if col >= self.mesh.n_cells() {
            return Err(FieldError::ColOutOfRange {
                col,
                ncells: self.mesh.n_cells(),
            });
        }
        if k >= self.df_entries[df] {
            return Err(FieldError::KOutOfRange {
                k,
                df,
                entries: self.df_entries[df],
            });
        }
        Ok(self.map(df, col) + k)
    }

    /// The dofmap row of one column.
    pub fn column(&self, col: usize) -> &[usize] {
        &self.dofmap[col * self.ndf..(col + 1) * self.ndf]
    }

    pub fn global_id(&self, dof: usize) -> u64 {
        self.global_ids[dof]
    }

    pub fn owner(&self, dof: usize) -> usize {
        self.owner[dof] as usize
    }

    pub fn region(&self, dof: usize) -> DofRegion {
        if dof < self.last_owned {
            DofRegion::Owned
        } else if dof < self.last_annexed {
            DofRegion::Annexed
        } else {
            DofRegion::Halo(1 + self.band_ends.partition_point(|&e| e <= dof))
        }
    }

    /// (global id, local index) of owned dofs, positionally `0..last_owned`.
    pub fn owned_global_ids(&self) -> &[u64] {
        &self.global_ids[..self.last_owned]
    }

    /// Dof columns in layout order (bases ascending). Columns whose base is
    /// below `last_annexed` are exactly the owned+annexed ones.
    pub fn dof_columns(&self) -> &[ColumnInfo] {
        &self.columns
    }

    /// Halo gid groups as fed to routing construction: group d covers the
    /// dofs a depth-d exchange must fill, so group 1 includes the annexed
    /// band.
    pub fn halo_gid_groups(&self) -> Vec<Vec<u64>> {
        let mut groups = Vec::with_capacity(self.band_ends.len());
        let mut start = self.last_owned;
        for (d, &end) in self.band_ends.iter().enumerate() {
            let _ = d;
            groups.push(self.global_ids[start..end].to_vec());
            start = end;
        }
        groups
    }
}

/// Builds the dofmap, numbering, global ids and ownership for `kind` over
/// `mesh`. Ownership of a shared dof goes to the rank owning the incident
/// cell with the smallest global id.
pub fn make_function_space(mesh: &Arc<LocalMesh3d>, kind: SpaceKind) -> Arc<FunctionSpace> {
    let nlayers = mesh.nlayers;
    let classes = kind.classes(nlayers);
    let global = &mesh.global;
    let part = &mesh.partition;
    let max_depth = mesh.max_halo_depth();

    // Global base offset of each class slot in the space's global dof
    // numbering (class columns are globally dense by entity id).
    let mut class_global_offsets = Vec::with_capacity(classes.len());
    let mut acc = 0u64;
    for &(class, len) in &classes {
        class_global_offsets.push(acc);
        let count = match class {
            EntityClass::Vertex => global.n_verts(),
            EntityClass::Edge => global.n_edges(),
            EntityClass::Cell => global.n_cells(),
        };
        acc += (count * len) as u64;
    }

    // Collect the local entity columns per class with owner and region.
    struct Column {
        class_slot: usize,
        entity_gid: usize,
        len: usize,
        owner: u16,
        region: DofRegion,
    }
    let mut columns: Vec<Column> = Vec::new();
    for (slot, &(class, len)) in classes.iter().enumerate() {
        let count = match class {
            EntityClass::Vertex => mesh.n_verts(),
            EntityClass::Edge => mesh.n_edges(),
            EntityClass::Cell => mesh.n_cells(),
        };
        for le in 0..count {
            let (gid, owner, dmin) = match class {
                EntityClass::Cell => {
                    let g = mesh.cell_global(le);
                    (g, part.owner(g), mesh.cell_depth(le))
                }
                EntityClass::Vertex => {
                    let g = mesh.vert_global(le);
                    let min_cell = *global.vert_cells(g).iter().min().unwrap();
                    let dmin = mesh
                        .vert_cells(le)
                        .iter()
                        .map(|&c| mesh.cell_depth(c))
                        .min()
                        .unwrap();
                    (g, part.owner(min_cell), dmin)
                }
                EntityClass::Edge => {
                    let g = mesh.edge_global(le);
                    let min_cell = global.edge(g).incident_cells().min().unwrap();
                    // Local incident cells of the edge come from scanning its
                    // (up to two) global incident cells.
                    let dmin = global
                        .edge(g)
                        .incident_cells()
                        .filter_map(|c| mesh.cell_local(c))
                        .map(|l| mesh.cell_depth(l))
                        .min()
                        .unwrap();
                    (g, part.owner(min_cell), dmin)
                }
            };
            let region = if owner == mesh.rank {
                DofRegion::Owned
            } else if dmin == 0 {
                DofRegion::Annexed
            } else {
                DofRegion::Halo(dmin)
            };
            columns.push(Column {
                class_slot: slot,
                entity_gid: gid,
                len,
                owner: owner as u16,
                region,
            });
        }
    }
    columns.sort_by_key(|c| (c.region, c.class_slot, c.entity_gid));

    // Assign column bases and per-dof metadata.
    let mut base_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut global_ids = Vec::new();
    let mut owner = Vec::new();
    let mut last_owned = 0;
    let mut last_annexed = 0;
    let mut band_ends = vec![0usize; max_depth];
    let mut next = 0usize;
    let mut column_infos = Vec::with_capacity(columns.len());
    for col in &columns {
        base_of.insert((col.class_slot, col.entity_gid), next);
        let class = classes[col.class_slot].0;
        let entity_local = match class {
            EntityClass::Vertex => mesh.vert_local(col.entity_gid).unwrap(),
            EntityClass::Edge => mesh.edge_local(col.entity_gid).unwrap(),
            EntityClass::Cell => mesh.cell_local(col.entity_gid).unwrap(),
        };
        column_infos.push(ColumnInfo {
            class,
            entity_local,
            base: next,
            len: col.len,
        });
        let gbase = class_global_offsets[col.class_slot] + (col.entity_gid * col.len) as u64;
        for k in 0..col.len {
            global_ids.push(gbase + k as u64);
            owner.push(col.owner);
        }
        next += col.len;
        match col.region {
            DofRegion::Owned => last_owned = next,
            DofRegion::Annexed => last_annexed = next,
            DofRegion::Halo(d) => band_ends[d - 1] = next,
        }
    }
    let undf = next;
    last_annexed = last_annexed.max(last_owned);
    // Empty bands inherit the previous end.
    let mut prev = last_annexed;
    for end in band_ends.iter_mut() {
        if *end == 0 {
            *end = prev;
        }
        prev = *end;
    }

    // Dofmap: per local cell, per df, the base index.
    let ndf = kind.ndf();
    let layout = kind.df_layout();
    let mut dofmap = Vec::with_capacity(mesh.n_cells() * ndf);
    for lc in 0..mesh.n_cells() {
        let verts = mesh.cell_verts(lc);
        let edges = mesh.cell_edges(lc);
        for df in &layout {
            let entity_gid = match classes[df.class_slot].0 {
                EntityClass::Vertex => mesh.vert_global(verts[df.sub]),
                EntityClass::Edge => mesh.edge_global(edges[df.sub]),
                EntityClass::Cell => mesh.cell_global(lc),
            };
            dofmap.push(base_of[&(df.class_slot, entity_gid)] + df.delta);
        }
    }

    let df_entries = layout
        .iter()
        .map(|df| classes[df.class_slot].1 - df.delta)
        .collect();

    Arc::new(FunctionSpace {
        kind,
        mesh: Arc::clone(mesh),
        nlayers,
        ndf,
        undf,
        last_owned,
        last_annexed,
        band_ends,
        dofmap,
        df_entries,
        global_ids,
        owner,
        columns: column_infos,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_cubed_sphere, build_planar, extrude, partition};
    use std::collections::HashSet;

    fn space_on(
        mesh: crate::mesh::GlobalMesh2d,
        nranks: usize,
        rank: usize,
        depth: usize,
        nlayers: usize,
        kind: SpaceKind,
    ) -> Arc<FunctionSpace> {
        let mesh = Arc::new(mesh);
        let part = partition(&mesh, nranks, depth).unwrap();
        let local = extrude(&mesh, &part, rank, nlayers).unwrap();
        make_function_space(&local, kind)
    }

    /// Entity-enumeration oracle for undf on a single rank: count global
    /// (class entity, level) pairs straight from the global mesh tables.
    fn undf_oracle(mesh: &crate::mesh::GlobalMesh2d, kind: SpaceKind, l: usize) -> usize {
        let (v, e, f) = (mesh.n_verts(), mesh.n_edges(), mesh.n_cells());
        match kind {
            SpaceKind::W0 => v * (l + 1),
            SpaceKind::W1 => e * (l + 1) + v * l,
            SpaceKind::W2 => e * l + f * (l + 1),
            SpaceKind::W3 => f * l,
            SpaceKind::Wtheta => f * (l + 1),
        }
    }

    #[test]
    fn undf_counts_on_4x4_torus() {
        let build = || build_planar(4, 4, true, true).unwrap();
        let w3 = space_on(build(), 1, 0, 0, 10, SpaceKind::W3);
        assert_eq!(w3.undf(), 160);
        assert_eq!(w3.ndf(), 1);
        let wt = space_on(build(), 1, 0, 0, 10, SpaceKind::Wtheta);
        assert_eq!(wt.undf(), 176);
        let w2 = space_on(build(), 1, 0, 0, 10, SpaceKind::W2);
        assert_eq!(w2.undf(), 496);
    }

    #[test]
    fn undf_matches_entity_enumeration_oracle() {
        for (mesh, name) in [
            (build_planar(4, 4, true, true).unwrap(), "torus"),
            (build_planar(5, 3, false, false).unwrap(), "plane"),
            (build_cubed_sphere(2).unwrap(), "c2"),
            (build_cubed_sphere(3).unwrap(), "c3"),
        ] {
            for l in [1usize, 4, 10] {
                for kind in SpaceKind::ALL {
                    let expect = undf_oracle(&mesh, kind, l);
                    let m = Arc::new(clone_mesh(&mesh));
                    let part = partition(&m, 1, 0).unwrap();
                    let local = extrude(&m, &part, 0, l).unwrap();
                    let fs = make_function_space(&local, kind);
                    assert_eq!(fs.undf(), expect, "{name} {kind:?} L={l}");
                    assert_eq!(fs.last_owned(), expect, "single rank owns all");
                }
            }
        }
    }

    // GlobalMesh2d is not Clone; rebuild from its kind.
    fn clone_mesh(mesh: &crate::mesh::GlobalMesh2d) -> crate::mesh::GlobalMesh2d {
        match mesh.kind {
            crate::mesh::MeshKind::CubedSphere { n } => build_cubed_sphere(n).unwrap(),
            crate::mesh::MeshKind::Planar {
                nx,
                ny,
                periodic_x,
                periodic_y,
            } => build_planar(nx, ny, periodic_x, periodic_y).unwrap(),
        }
    }

    #[test]
    fn cubed_sphere_analytic_counts() {
        let n = 3usize;
        let l = 7usize;
        let f = 6 * n * n;
        let e = 12 * n * n;
        let v = 6 * n * n + 2;
        let w3 = space_on(build_cubed_sphere(n).unwrap(), 1, 0, 0, l, SpaceKind::W3);
        assert_eq!(w3.undf(), f * l);
        let wt = space_on(build_cubed_sphere(n).unwrap(), 1, 0, 0, l, SpaceKind::Wtheta);
        assert_eq!(wt.undf(), f * (l + 1));
        let w0 = space_on(build_cubed_sphere(n).unwrap(), 1, 0, 0, l, SpaceKind::W0);
        assert_eq!(w0.undf(), v * (l + 1));
        let w2 = space_on(build_cubed_sphere(n).unwrap(), 1, 0, 0, l, SpaceKind::W2);
        assert_eq!(w2.undf(), e * l + f * (l + 1));
    }

    #[test]
    fn dof_index_is_map_plus_k_and_contiguous() {
        let fs = space_on(build_planar(4, 3, true, true).unwrap(), 1, 0, 0, 6, SpaceKind::W3);
        for col in 0..6 {
            let b = fs.map(0, col);
            assert_eq!(fs.dof_index(0, col, 0).unwrap(), b);
            assert_eq!(fs.dof_index(0, col, 3).unwrap(), b + 3);
        }
        for kind in SpaceKind::ALL {
            let fs = space_on(build_planar(4, 3, true, true).unwrap(), 1, 0, 0, 6, kind);
            for col in [0usize, 5, 11] {
                for df in 0..fs.ndf() {
                    for k in 0..fs.df_vertical_entries(df) - 1 {
                        let a = fs.dof_index(df, col, k).unwrap();
                        let b = fs.dof_index(df, col, k + 1).unwrap();
                        assert_eq!(b, a + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn dof_index_rejects_out_of_range() {
        let fs = space_on(build_planar(3, 3, true, true).unwrap(), 1, 0, 0, 4, SpaceKind::W2);
        assert!(matches!(
            fs.dof_index(6, 0, 0),
            Err(FieldError::DfOutOfRange { .. })
        ));
        assert!(matches!(
            fs.dof_index(0, 99, 0),
            Err(FieldError::ColOutOfRange { .. })
        ));
        // Side-face df has L entries, bottom-face df L+1, top-face df L.
        assert!(fs.dof_index(0, 0, 3).is_ok());
        assert!(matches!(
            fs.dof_index(0, 0, 4),
            Err(FieldError::KOutOfRange { .. })
        ));
        assert!(fs.dof_index(4, 0, 4).is_ok());
        assert!(fs.dof_index(5, 0, 4).is_err());
    }

    #[test]
    fn shared_vertex_dof_has_one_index_across_cells() {
        let fs = space_on(build_planar(4, 4, true, true).unwrap(), 1, 0, 0, 5, SpaceKind::W0);
        let mesh = Arc::clone(&fs.mesh);
        // Cross-cell consistency: any shared vertex yields the same index at
        // equal k from both columns.
        for ca in 0..mesh.n_cells() {
            for cb in 0..mesh.n_cells() {
                if ca == cb {
                    continue;
                }
                let va = mesh.cell_verts(ca);
                let vb = mesh.cell_verts(cb);
                for (ia, a) in va.iter().enumerate() {
                    for (ib, b) in vb.iter().enumerate() {
                        if a == b {
                            for k in 0..3 {
                                assert_eq!(
                                    fs.dof_index(ia, ca, k).unwrap(),
                                    fs.dof_index(ib, cb, k).unwrap()
                                );
                            }
                            // Top dfs of the same vertex agree too.
                            assert_eq!(fs.map(ia + 4, ca), fs.map(ib + 4, cb));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ownership_prefix_and_regions() {
        let mesh = Arc::new(build_planar(4, 4, true, true).unwrap());
        let part = partition(&mesh, 4, 1).unwrap();
        for rank in 0..4 {
            let local = extrude(&mesh, &part, rank, 3).unwrap();
            for kind in SpaceKind::ALL {
                let fs = make_function_space(&local, kind);
                for dof in 0..fs.undf() {
                    let r = fs.region(dof);
                    match r {
                        DofRegion::Owned => assert_eq!(fs.owner(dof), rank),
                        _ => assert_ne!(fs.owner(dof), rank),
                    }
                }
                if !kind.horizontally_continuous() {
                    assert_eq!(fs.last_owned(), fs.last_annexed(), "{kind:?} has no annexed dofs");
                }
            }
        }
    }

    #[test]
    fn cross_rank_dof_identity() {
        // Every dof in a rank's halo is owned by exactly one rank, and gids
        // agree: collect (gid -> owner) claims from all ranks.
        let mesh = Arc::new(build_cubed_sphere(2).unwrap());
        let part = partition(&mesh, 6, 1).unwrap();
        for kind in SpaceKind::ALL {
            let mut owner_claims: HashMap<u64, usize> = HashMap::new();
            let mut spaces = Vec::new();
            for rank in 0..6 {
                let local = extrude(&mesh, &part, rank, 2).unwrap();
                let fs = make_function_space(&local, kind);
                for dof in 0..fs.last_owned() {
                    let prev = owner_claims.insert(fs.global_id(dof), rank);
                    assert!(prev.is_none(), "gid owned twice");
                }
                spaces.push(fs);
            }
            for fs in &spaces {
                for dof in fs.last_owned()..fs.undf() {
                    let gid = fs.global_id(dof);
                    assert_eq!(owner_claims.get(&gid).copied(), Some(fs.owner(dof)));
                }
            }
            // Union of owned gids over ranks equals the single-rank space.
            let part1 = partition(&mesh, 1, 0).unwrap();
            let local1 = extrude(&mesh, &part1, 0, 2).unwrap();
            let serial = make_function_space(&local1, kind);
            let all: HashSet<u64> = (0..serial.undf()).map(|d| serial.global_id(d)).collect();
            assert_eq!(owner_claims.len(), all.len());
            assert!(owner_claims.keys().all(|g| all.contains(g)));
        }
    }

    #[test]
    fn deterministic_numbering() {
        let a = space_on(build_cubed_sphere(2).unwrap(), 6, 2, 1, 4, SpaceKind::W2);
        let b = space_on(build_cubed_sphere(2).unwrap(), 6, 2, 1, 4, SpaceKind::W2);
        assert_eq!(a.undf(), b.undf());
        for d in 0..a.undf() {
            assert_eq!(a.global_id(d), b.global_id(d));
        }
        assert_eq!(a.column(3), b.column(3));
    }
}
