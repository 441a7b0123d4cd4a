//! Per-cell dense local operators mapping one space to another.

use std::sync::Arc;

use super::{FieldError, FunctionSpace};

/// A local operator: one dense ndf_to x ndf_from block per 3D cell, stored
/// per column with one block per layer. `matrix_vector` gathers the source
/// footprint of a cell, multiplies the block and scatters into the target
/// footprint.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    from: Arc<FunctionSpace>,
    to: Arc<FunctionSpace>,
    block: usize,
    data: Vec<f64>,
}

impl LocalOperator {
    /// Zero-initialised operator over every local column.
    pub fn zeros(from: &Arc<FunctionSpace>, to: &Arc<FunctionSpace>) -> LocalOperator {
        let ncells = from.mesh.n_cells();
        let block = from.ndf() * to.ndf();
        LocalOperator {
            from: Arc::clone(from),
            to: Arc::clone(to),
            block,
            data: vec![0.0; ncells * from.mesh.nlayers * block],
        }
    }

    pub fn from_space(&self) -> &Arc<FunctionSpace> {
        &self.from
    }

    pub fn to_space(&self) -> &Arc<FunctionSpace> {
        &self.to
    }

    /// The ndf_to x ndf_from block of (column, layer), row-major.
    pub fn layer_block(&self, col: usize, k: usize) -> &[f64] {
        let off = (col * self.from.mesh.nlayers + k) * self.block;
        &self.data[off..off + self.block]
    }

    pub fn layer_block_mut(&mut self, col: usize, k: usize) -> &mut [f64] {
        let off = (col * self.from.mesh.nlayers + k) * self.block;
        &mut self.data[off..off + self.block]
    }

    /// Overwrites the block of (column, layer); `values` must be
    /// ndf_to * ndf_from entries, row-major over target dfs.
    pub fn set_layer_block(&mut self, col: usize, k: usize, values: &[f64]) -> Result<(), FieldError> {
        if values.len() != self.block {
            return Err(FieldError::OperatorShape {
                expected: self.block,
                got: values.len(),
            });
        }
        self.layer_block_mut(col, k).copy_from_slice(values);
        Ok(())
    }

    /// Identity blocks on every cell (requires ndf_from == ndf_to).
    pub fn identity(from: &Arc<FunctionSpace>, to: &Arc<FunctionSpace>) -> LocalOperator {
        assert_eq!(from.ndf(), to.ndf(), "identity needs square blocks");
        let mut op = LocalOperator::zeros(from, to);
        let ndf = from.ndf();
        for col in 0..from.mesh.n_cells() {
            for k in 0..from.mesh.nlayers {
                let b = op.layer_block_mut(col, k);
                for d in 0..ndf {
                    b[d * ndf + d] = 1.0;
                }
            }
        }
        op
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{make_function_space, SpaceKind};
    use crate::mesh::{build_planar, extrude, partition};

    #[test]
    fn block_shape_checked() {
        let mesh = Arc::new(build_planar(3, 3, true, true).unwrap());
        let part = partition(&mesh, 1, 0).unwrap();
        let local = extrude(&mesh, &part, 0, 2).unwrap();
        let w2 = make_function_space(&local, SpaceKind::W2);
        let w3 = make_function_space(&local, SpaceKind::W3);
        let mut op = LocalOperator::zeros(&w2, &w3);
        assert_eq!(op.layer_block(0, 0).len(), 6);
        assert!(op.set_layer_block(0, 0, &[1.0; 6]).is_ok());
        assert!(op.set_layer_block(0, 0, &[1.0; 4]).is_err());
    }
}
