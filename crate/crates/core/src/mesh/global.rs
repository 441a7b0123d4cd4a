//! Global 2D mesh generation: equi-angular cubed spheres and planar grids.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use super::MeshError;

/// What a global mesh was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    /// Six n-by-n panels stitched into a sphere.
    CubedSphere { n: usize },
    Planar {
        nx: usize,
        ny: usize,
        periodic_x: bool,
        periodic_y: bool,
    },
}

/// Axis of the canonical normal of a planar edge.
///
/// An `X` edge separates horizontally adjacent cells (normal +x), a `Y` edge
/// vertically adjacent ones (normal +y). Cubed-sphere edges carry no axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeAxis {
    X,
    Y,
}

/// A mesh edge with its endpoints and incident cells in canonical order:
/// the edge's canonical normal points out of `cells.0` and into `cells.1`.
/// Boundary edges of non-periodic planar meshes have one `None` slot.
#[derive(Debug, Clone)]
pub struct Edge {
    pub verts: (usize, usize),
    pub cells: (Option<usize>, Option<usize>),
}

impl Edge {
    pub fn incident_cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.0.into_iter().chain(self.cells.1)
    }

    /// +1.0 if the canonical normal points out of `cell`, -1.0 if into it.
    pub fn outward_sign(&self, cell: usize) -> f64 {
        if self.cells.0 == Some(cell) {
            1.0
        } else {
            -1.0
        }
    }

    /// The incident cell on the other side of the edge, if any.
    pub fn other_cell(&self, cell: usize) -> Option<usize> {
        if self.cells.0 == Some(cell) {
            self.cells.1
        } else {
            self.cells.0
        }
    }
}

/// Immutable global 2D topology (plus coordinates as metadata).
///
/// Cells, vertices and edges are identified by dense global ids. Per-cell
/// tables are in a fixed local order: vertices counter-clockwise 0..4, edge
/// `i` between vertices `i` and `(i+1) % 4`.
#[derive(Debug)]
pub struct GlobalMesh2d {
    pub kind: MeshKind,
    cell_verts: Vec<[usize; 4]>,
    cell_edges: Vec<[usize; 4]>,
    cell_neighbours: Vec<[Option<usize>; 4]>,
    edges: Vec<Edge>,
    edge_axis: Option<Vec<EdgeAxis>>,
    vert_coords: Vec<[f64; 3]>,
    vert_cells: Vec<Vec<usize>>,
}

impl GlobalMesh2d {
    pub fn n_cells(&self) -> usize {
        self.cell_verts.len()
    }

    pub fn n_verts(&self) -> usize {
        self.vert_coords.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// V - E + F: 2 for a sphere, 0 for a torus.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_verts() as i64 - self.n_edges() as i64 + self.n_cells() as i64
    }

    pub fn cell_verts(&self, cell: usize) -> [usize; 4] {
        self.cell_verts[cell]
    }

    pub fn cell_edges(&self, cell: usize) -> [usize; 4] {
        self.cell_edges[cell]
    }

    /// Neighbour across each of the cell's four edges.
    pub fn cell_neighbours(&self, cell: usize) -> [Option<usize>; 4] {
        self.cell_neighbours[cell]
    }

    pub fn edge(&self, edge: usize) -> &Edge {
        &self.edges[edge]
    }

    pub fn edge_axis(&self, edge: usize) -> Option<EdgeAxis> {
        self.edge_axis.as_ref().map(|a| a[edge])
    }

    pub fn vert_coord(&self, vert: usize) -> [f64; 3] {
        self.vert_coords[vert]
    }

    /// Cells incident to a vertex, ascending. Cubed-sphere corners have 3,
    /// everything else 4 (fewer on planar boundaries).
    pub fn vert_cells(&self, vert: usize) -> &[usize] {
        &self.vert_cells[vert]
    }

    /// Cells sharing at least one vertex with `cell` (excluding itself),
    /// ascending and deduplicated.
    pub fn vertex_neighbours(&self, cell: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(8);
        for &v in &self.cell_verts[cell] {
            for &c in &self.vert_cells[v] {
                if c != cell {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Plain-text entity listing, one entity per line, ascending global id.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let kind = match self.kind {
            MeshKind::CubedSphere { n } => format!("cubed-sphere n={n}"),
            MeshKind::Planar {
                nx,
                ny,
                periodic_x,
                periodic_y,
            } => format!("planar {nx}x{ny} periodic_x={periodic_x} periodic_y={periodic_y}"),
        };
        let _ = writeln!(
            s,
            "mesh {kind} cells={} edges={} vertices={}",
            self.n_cells(),
            self.n_edges(),
            self.n_verts()
        );
        for (c, (vs, es)) in self.cell_verts.iter().zip(&self.cell_edges).enumerate() {
            let _ = writeln!(
                s,
                "cell {c} verts {} {} {} {} edges {} {} {} {}",
                vs[0], vs[1], vs[2], vs[3], es[0], es[1], es[2], es[3]
            );
        }
        let fmt_cell = |c: Option<usize>| c.map_or("-".to_string(), |c| c.to_string());
        for (e, edge) in self.edges.iter().enumerate() {
            let _ = writeln!(
                s,
                "edge {e} verts {} {} cells {} {}",
                edge.verts.0,
                edge.verts.1,
                fmt_cell(edge.cells.0),
                fmt_cell(edge.cells.1)
            );
        }
        for (v, coord) in self.vert_coords.iter().enumerate() {
            let cells: Vec<String> = self.vert_cells[v].iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                s,
                "vertex {v} cells {} coord {:.6} {:.6} {:.6}",
                cells.join(" "),
                coord[0],
                coord[1],
                coord[2]
            );
        }
        s
    }

    /// Derives edges, adjacency and incidence from the cell-vertex table.
    /// Edge ids follow first encounter scanning cells ascending, local edges
    /// 0..4; `cells.0` is the first cell that produced the edge.
    fn finish(
        kind: MeshKind,
        cell_verts: Vec<[usize; 4]>,
        vert_coords: Vec<[f64; 3]>,
        edge_axis_of: impl Fn(usize, usize) -> Option<EdgeAxis>,
    ) -> Self {
        let ncells = cell_verts.len();
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        let mut cell_edges = vec![[usize::MAX; 4]; ncells];
        for (c, vs) in cell_verts.iter().enumerate() {
            for i in 0..4 {
                let (a, b) = (vs[i], vs[(i + 1) % 4]);
                let key = (a.min(b), a.max(b));
                match edge_ids.get(&key) {
                    Some(&e) => {
                        cell_edges[c][i] = e;
                        debug_assert!(edges[e].cells.1.is_none());
                        edges[e].cells.1 = Some(c);
                    }
                    None => {
                        let e = edges.len();
                        edge_ids.insert(key, e);
                        edges.push(Edge {
                            verts: (a, b),
                            cells: (Some(c), None),
                        });
                        cell_edges[c][i] = e;
                    }
                }
            }
        }

        let edge_axis = match kind {
            MeshKind::Planar { .. } => {
                let axes = edges
                    .iter()
                    .map(|e| edge_axis_of(e.verts.0, e.verts.1).expect("planar edge axis"))
                    .collect();
                Some(axes)
            }
            MeshKind::CubedSphere { .. } => None,
        };

        let mut cell_neighbours = vec![[None; 4]; ncells];
        for (c, es) in cell_edges.iter().enumerate() {
            for i in 0..4 {
                cell_neighbours[c][i] = edges[es[i]].other_cell(c);
            }
        }

        let mut vert_cells = vec![Vec::new(); vert_coords.len()];
        for (c, vs) in cell_verts.iter().enumerate() {
            for &v in vs {
                vert_cells[v].push(c);
            }
        }

        GlobalMesh2d {
            kind,
            cell_verts,
            cell_edges,
            cell_neighbours,
            edges,
            edge_axis,
            vert_coords,
            vert_cells,
        }
    }
}

/// Builds the equi-angular cubed sphere with `n` subdivisions per panel:
/// 6n^2 cells, 12n^2 edges, 6n^2+2 vertices on the unit sphere.
///
/// Panel stitching works on exact integer lattice points of the [0,n]^3 cube
/// surface, so shared panel edges and the eight 3-cell corners fall out of
/// deduplication with no floating-point tolerance. Cell ids are panel-major,
/// row-major within a panel.
pub fn build_cubed_sphere(n: usize) -> Result<GlobalMesh2d, MeshError> {
    if n == 0 {
        return Err(MeshError::ZeroSubdivision);
    }
    // Lattice coordinates of panel point (f, i, j) on the cube surface.
    let lattice = |f: usize, i: usize, j: usize| -> (usize, usize, usize) {
        match f {
            0 => (i, j, 0),
            1 => (i, j, n),
            2 => (i, 0, j),
            3 => (i, n, j),
            4 => (0, i, j),
            _ => (n, i, j),
        }
    };
    let mut vert_ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut vert_coords: Vec<[f64; 3]> = Vec::new();
    let mut vert_of = |key: (usize, usize, usize)| -> usize {
        *vert_ids.entry(key).or_insert_with(|| {
            // Equi-angular warp per axis, then radial projection.
            let warp = |c: usize| ((c as f64 / n as f64) - 0.5) * FRAC_PI_2;
            let (x, y, z) = (warp(key.0).tan(), warp(key.1).tan(), warp(key.2).tan());
            let r = (x * x + y * y + z * z).sqrt();
            vert_coords.push([x / r, y / r, z / r]);
            vert_coords.len() - 1
        })
    };

    let mut cell_verts = Vec::with_capacity(6 * n * n);
    for f in 0..6 {
        for j in 0..n {
            for i in 0..n {
                cell_verts.push([
                    vert_of(lattice(f, i, j)),
                    vert_of(lattice(f, i + 1, j)),
                    vert_of(lattice(f, i + 1, j + 1)),
                    vert_of(lattice(f, i, j + 1)),
                ]);
            }
        }
    }

    Ok(GlobalMesh2d::finish(
        MeshKind::CubedSphere { n },
        cell_verts,
        vert_coords,
        |_, _| None,
    ))
}

/// Builds an nx-by-ny planar quadrilateral mesh, optionally periodic per
/// axis. Cell ids are row-major; edge canonical normals point +x / +y and
/// `cells.0` is always the cell the normal exits.
pub fn build_planar(
    nx: usize,
    ny: usize,
    periodic_x: bool,
    periodic_y: bool,
) -> Result<GlobalMesh2d, MeshError> {
    if nx == 0 || ny == 0 {
        return Err(MeshError::EmptyPlanar(nx, ny));
    }
    // A periodic axis of extent < 3 would make two cells adjacent through
    // two distinct edges with identical endpoints, which a simple edge
    // table cannot represent.
    if (periodic_x && nx < 3) || (periodic_y && ny < 3) {
        return Err(MeshError::PeriodicTooSmall(nx, ny));
    }
    let nvx = if periodic_x { nx } else { nx + 1 };
    let nvy = if periodic_y { ny } else { ny + 1 };
    let vid = |i: usize, j: usize| (j % nvy) * nvx + (i % nvx);

    let mut vert_coords = Vec::with_capacity(nvx * nvy);
    for j in 0..nvy {
        for i in 0..nvx {
            vert_coords.push([i as f64, j as f64, 0.0]);
        }
    }

    let mut cell_verts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            cell_verts.push([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }

    let mesh = GlobalMesh2d::finish(
        MeshKind::Planar {
            nx,
            ny,
            periodic_x,
            periodic_y,
        },
        cell_verts,
        vert_coords,
        |a, b| {
            // Same vertex row -> edge runs along x -> normal is +y.
            if a / nvx == b / nvx {
                Some(EdgeAxis::Y)
            } else {
                Some(EdgeAxis::X)
            }
        },
    );

    // Re-orient edge cell slots so the canonical normal is +x / +y: for a Y
    // edge at vertex row jv, slot 0 must be the cell in row jv-1 (below); for
    // an X edge at vertex column iv, the cell in column iv-1 (left of it).
    let mut mesh = mesh;
    let cell_col = |c: usize| c % nx;
    let cell_row = |c: usize| c / nx;
    for (e, edge) in mesh.edges.iter_mut().enumerate() {
        let axis = mesh.edge_axis.as_ref().unwrap()[e];
        let (va, vb) = edge.verts;
        let exits = |c: usize| -> bool {
            match axis {
                EdgeAxis::Y => {
                    let jv = va / nvx;
                    cell_row(c) == (jv + ny - 1) % ny && (periodic_y || jv > 0)
                }
                EdgeAxis::X => {
                    let iv = if va / nvx == vb / nvx {
                        unreachable!()
                    } else {
                        va % nvx
                    };
                    cell_col(c) == (iv + nx - 1) % nx && (periodic_x || iv > 0)
                }
            }
        };
        let (c0, c1) = edge.cells;
        let mut slots = [None, None];
        for c in c0.into_iter().chain(c1) {
            if exits(c) {
                slots[0] = Some(c);
            } else {
                slots[1] = Some(c);
            }
        }
        edge.cells = (slots[0], slots[1]);
    }
    // Slot reordering invalidates nothing else, but neighbour tables were
    // derived before it; rebuild them.
    for c in 0..mesh.cell_verts.len() {
        for i in 0..4 {
            let e = mesh.cell_edges[c][i];
            mesh.cell_neighbours[c][i] = mesh.edges[e].other_cell(c);
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_is_c1() {
        let m = build_cubed_sphere(1).unwrap();
        assert_eq!(m.n_cells(), 6);
        assert_eq!(m.n_verts(), 8);
        assert_eq!(m.n_edges(), 12);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn c2_entity_counts_match_euler() {
        let m = build_cubed_sphere(2).unwrap();
        assert_eq!(m.n_cells(), 24);
        assert_eq!(m.n_verts(), 26);
        assert_eq!(m.n_edges(), 48);
        assert_eq!(26 - 48 + 24, 2);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn c12_has_864_columns() {
        let m = build_cubed_sphere(12).unwrap();
        assert_eq!(m.n_cells(), 864);
    }

    #[test]
    fn cubed_sphere_counts_n1_to_8() {
        for n in 1..=8usize {
            let m = build_cubed_sphere(n).unwrap();
            assert_eq!(m.n_cells(), 6 * n * n, "F at n={n}");
            assert_eq!(m.n_edges(), 12 * n * n, "E at n={n}");
            assert_eq!(m.n_verts(), 6 * n * n + 2, "V at n={n}");
            let three_cell = (0..m.n_verts())
                .filter(|&v| m.vert_cells(v).len() == 3)
                .count();
            assert_eq!(three_cell, 8, "corner count at n={n}");
            for v in 0..m.n_verts() {
                let k = m.vert_cells(v).len();
                assert!(k == 3 || k == 4);
            }
        }
    }

    #[test]
    fn cubed_sphere_edges_have_two_cells() {
        let m = build_cubed_sphere(3).unwrap();
        for e in 0..m.n_edges() {
            assert_eq!(m.edge(e).incident_cells().count(), 2);
        }
    }

    #[test]
    fn cubed_sphere_cells_have_distinct_entities() {
        let m = build_cubed_sphere(4).unwrap();
        for c in 0..m.n_cells() {
            let mut vs = m.cell_verts(c).to_vec();
            vs.sort_unstable();
            vs.dedup();
            assert_eq!(vs.len(), 4);
            let mut es = m.cell_edges(c).to_vec();
            es.sort_unstable();
            es.dedup();
            assert_eq!(es.len(), 4);
        }
    }

    #[test]
    fn cubed_sphere_coords_on_unit_sphere() {
        let m = build_cubed_sphere(3).unwrap();
        for v in 0..m.n_verts() {
            let [x, y, z] = m.vert_coord(v);
            let r = (x * x + y * y + z * z).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn torus_3x3() {
        let m = build_planar(3, 3, true, true).unwrap();
        assert_eq!(m.n_cells(), 9);
        assert_eq!(m.n_verts(), 9);
        assert_eq!(m.n_edges(), 18);
        assert_eq!(m.euler_characteristic(), 0);
    }

    // The spec sheet quotes 10 vertices / 13 edges for this case, but direct
    // enumeration of a 4x1 cylinder (periodic in x only) gives 4 vertex
    // columns x 2 rows = 8 vertices and 8 + 4 = 12 edges, chi = 0.
    #[test]
    fn cylinder_4x1_direct_enumeration() {
        let m = build_planar(4, 1, true, false).unwrap();
        assert_eq!(m.n_cells(), 4);
        assert_eq!(m.n_verts(), 8);
        assert_eq!(m.n_edges(), 12);
        assert_eq!(m.euler_characteristic(), 0);
        // Boundary edges (the two open rims) have one incident cell.
        let boundary = (0..m.n_edges())
            .filter(|&e| m.edge(e).incident_cells().count() == 1)
            .count();
        assert_eq!(boundary, 8);
    }

    #[test]
    fn torus_16x16_neighbours() {
        let m = build_planar(16, 16, true, true).unwrap();
        assert_eq!(m.n_cells(), 256);
        for c in 0..m.n_cells() {
            let ns: Vec<usize> = m.cell_neighbours(c).iter().flatten().copied().collect();
            let mut d = ns.clone();
            d.sort_unstable();
            d.dedup();
            assert_eq!(d.len(), 4, "cell {c} neighbours {ns:?}");
        }
    }

    #[test]
    fn biperiodic_rejects_small_extents() {
        assert!(build_planar(2, 3, true, true).is_err());
        assert!(build_planar(3, 2, true, true).is_err());
        assert!(build_planar(3, 3, true, true).is_ok());
    }

    #[test]
    fn planar_canonical_normals() {
        let m = build_planar(4, 3, true, true).unwrap();
        for c in 0..m.n_cells() {
            let (i, j) = (c % 4, c / 4);
            let es = m.cell_edges(c);
            // South edge: normal +y enters the cell from below.
            assert_eq!(m.edge(es[0]).cells.1, Some(c));
            assert_eq!(m.edge(es[0]).cells.0, Some(((j + 2) % 3) * 4 + i));
            // East edge: normal +x exits the cell.
            assert_eq!(m.edge(es[1]).cells.0, Some(c));
            assert_eq!(m.edge(es[1]).cells.1, Some(j * 4 + (i + 1) % 4));
            // North edge exits, west edge enters.
            assert_eq!(m.edge(es[2]).cells.0, Some(c));
            assert_eq!(m.edge(es[3]).cells.1, Some(c));
            assert_eq!(m.edge_axis(es[0]), Some(EdgeAxis::Y));
            assert_eq!(m.edge_axis(es[1]), Some(EdgeAxis::X));
        }
    }

    #[test]
    fn dump_golden_2x2() {
        let m = build_planar(2, 2, false, false).unwrap();
        let dump = m.dump();
        let expected_head = "\
mesh planar 2x2 periodic_x=false periodic_y=false cells=4 edges=12 vertices=9
cell 0 verts 0 1 4 3 edges 0 1 2 3
cell 1 verts 1 2 5 4 edges 4 5 6 1
cell 2 verts 3 4 7 6 edges 2 7 8 9
cell 3 verts 4 5 8 7 edges 6 10 11 7
edge 0 verts 0 1 cells - 0
";
        assert!(dump.starts_with(expected_head), "dump was:\n{dump}");
        assert_eq!(dump.lines().count(), 1 + 4 + 12 + 9);
    }
}
