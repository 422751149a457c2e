//! Nyström discretization of the 2×2 boundary integral system and its
//! dense and iterative solvers.
//!
//! Unknowns are interleaved per node, `(ρ₁, ρ₂)` at index `(2i, 2i+1)`,
//! with nodes numbered component by component.

mod assemble;
mod solve;

pub use solve::{condition_1norm, condition_2norm, solve_dense, solve_iterative, DensitySolution, GmresOptions, SolveReport};

use crate::error::Result;
use crate::geometry::Panelization;
use crate::kernels::{BoundaryCondition, KernelEvaluator, MaterialParams, Side};
use crate::surfaceops::{hilbert_matrix, laplace_dlp_matrix, SurfaceOperator};
use std::sync::Arc;

/// A boundary value problem on a fixed discretization, without data.
#[derive(Debug, Clone)]
pub struct BvProblem {
    pub geometry: Panelization,
    pub evaluator: KernelEvaluator,
    pub side: Side,
    hilbert: Option<SurfaceOperator>,
    dlp_squared: Option<SurfaceOperator>,
}

impl BvProblem {
    pub fn new(geometry: Panelization, bc: Arc<dyn BoundaryCondition>, mp: MaterialParams, side: Side) -> Result<Self> {
        let evaluator = KernelEvaluator::new(bc, mp)?;
        let (hilbert, dlp_squared) = if evaluator.uses_hilbert() {
            let h = hilbert_matrix(&geometry)?;
            let d2 = laplace_dlp_matrix(&geometry)?.square()?;
            (Some(h), Some(d2))
        } else {
            (None, None)
        };
        Ok(BvProblem { geometry, evaluator, side, hilbert, dlp_squared })
    }

    /// Number of nodes `N`; the system has `2N` unknowns.
    pub fn nodes(&self) -> usize {
        self.geometry.len()
    }

    pub fn unknowns(&self) -> usize {
        2 * self.geometry.len()
    }

    /// Discrete Hilbert transform, present when the representation uses it.
    pub fn hilbert(&self) -> Option<&SurfaceOperator> {
        self.hilbert.as_ref()
    }

    pub fn dlp_squared(&self) -> Option<&SurfaceOperator> {
        self.dlp_squared.as_ref()
    }
}
