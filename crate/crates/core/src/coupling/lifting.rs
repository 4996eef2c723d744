//! Transfer between interface traces and fluid vectors.

use crate::error::{FsiError, Result};
use crate::fem::{DofMap, UY};
use crate::mesh::StructuredMesh;

/// Maps a nodal trace on the interface (ascending `x`, endpoints included)
/// to the transverse-velocity DOFs of the fluid (nodal zero extension) and
/// back.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftingOperator {
    n_dofs: usize,
    /// Fluid `u_y` DOF per interface node.
    targets: Vec<usize>,
}

impl LiftingOperator {
    pub fn new(mesh: &StructuredMesh, dofs: DofMap) -> Self {
        LiftingOperator {
            n_dofs: dofs.n_dofs(),
            targets: mesh
                .interface_nodes
                .iter()
                .map(|&n| dofs.index(n, UY))
                .collect(),
        }
    }

    pub fn interface_len(&self) -> usize {
        self.targets.len()
    }

    pub fn fluid_dof(&self, k: usize) -> usize {
        self.targets[k]
    }

    /// Interior interface positions `1..len-1`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.targets.len() - 1
    }

    fn check(&self, expected: usize, actual: usize) -> Result<()> {
        if expected != actual {
            return Err(FsiError::DimensionMismatch { expected, actual });
        }
        Ok(())
    }

    /// Fluid vector carrying `trace` on the interface `u_y` DOFs and zero
    /// everywhere else.
    pub fn apply(&self, trace: &[f64]) -> Result<Vec<f64>> {
        self.check(self.targets.len(), trace.len())?;
        let mut out = vec![0.0; self.n_dofs];
        for (&dof, &w) in self.targets.iter().zip(trace) {
            out[dof] = w;
        }
        Ok(out)
    }

    /// Interface trace of a fluid vector.
    pub fn restrict(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(self.n_dofs, v.len())?;
        Ok(self.targets.iter().map(|&dof| v[dof]).collect())
    }

    /// Interface trace of a fluid vector; endpoints set to zero.
    pub fn restrict_interior(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(self.n_dofs, v.len())?;
        let mut out = vec![0.0; self.targets.len()];
        for k in self.interior() {
            out[k] = v[self.targets[k]];
        }
        Ok(out)
    }
}
