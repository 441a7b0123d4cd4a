//! Field storage with halo cleanliness state.

use std::sync::Arc;

use super::{FieldError, FunctionSpace};

/// A real-valued field over a function space, halo entries included,
/// vertically adjacent dofs contiguous.
///
/// `clean_halo_depth` records the deepest halo band currently up to date
/// with the owning ranks; 0 means only owned+annexed entries are valid.
/// Owned and annexed entries are kept valid by every producer path, so they
/// carry no flag.
#[derive(Debug, Clone)]
pub struct Field {
    space: Arc<FunctionSpace>,
    data: Vec<f64>,
    clean_halo_depth: usize,
}

impl Field {
    pub fn space(&self) -> &Arc<FunctionSpace> {
        &self.space
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn clean_halo_depth(&self) -> usize {
        self.clean_halo_depth
    }

    /// Marks all halo bands out of date.
    pub fn set_dirty(&mut self) {
        self.clean_halo_depth = 0;
    }

    /// Raises the clean depth to `depth` (monotone; never lowers).
    pub fn set_clean(&mut self, depth: usize) -> Result<(), FieldError> {
        let max = self.space.max_halo_depth();
        if depth > max {
            return Err(FieldError::DepthOutOfRange { depth, max });
        }
        self.clean_halo_depth = self.clean_halo_depth.max(depth);
        Ok(())
    }
}

/// A field with every entry (halo included) set to `initial`. Uniform data
/// is trivially clean to the maximum depth.
pub fn make_field(space: &Arc<FunctionSpace>, initial: f64) -> Field {
    Field {
        space: Arc::clone(space),
        data: vec![initial; space.undf()],
        clean_halo_depth: space.max_halo_depth(),
    }
}
