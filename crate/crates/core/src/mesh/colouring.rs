//! Greedy cell colouring so that no two same-colour cells share a vertex.
//!
//! Cells of one colour then share no dof of any implemented continuous
//! space, which is the race-freedom contract for threaded increment loops.

use super::LocalMesh3d;

#[derive(Debug, Clone)]
pub struct Colouring {
    colour_of: Vec<u32>,
    cells_by_colour: Vec<Vec<usize>>,
}

impl Colouring {
    pub fn n_colours(&self) -> usize {
        self.cells_by_colour.len()
    }

    pub fn colour_of(&self, local_cell: usize) -> usize {
        self.colour_of[local_cell] as usize
    }

    /// Local cells of one colour, ascending local index.
    pub fn cells(&self, colour: usize) -> &[usize] {
        &self.cells_by_colour[colour]
    }
}

/// Deterministic greedy colouring: ascending local cell index, smallest
/// feasible colour, covering owned and halo cells alike.
pub fn colour(local: &LocalMesh3d) -> Colouring {
    let n = local.n_cells();
    let mut colour_of = vec![u32::MAX; n];
    let mut ncolours = 0usize;
    let mut used = Vec::new();
    for c in 0..n {
        used.clear();
        used.resize(ncolours + 1, false);
        for &v in &local.cell_verts(c) {
            for &nb in local.vert_cells(v) {
                let col = colour_of[nb];
                if col != u32::MAX {
                    used[col as usize] = true;
                }
            }
        }
        let col = used.iter().position(|&u| !u).unwrap();
        colour_of[c] = col as u32;
        ncolours = ncolours.max(col + 1);
    }
    let mut cells_by_colour = vec![Vec::new(); ncolours];
    for (c, &col) in colour_of.iter().enumerate() {
        cells_by_colour[col as usize].push(c);
    }
    Colouring {
        colour_of,
        cells_by_colour,
    }
}
