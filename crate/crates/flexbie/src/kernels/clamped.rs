use super::forms::{self, FrameVars};
use super::{BcKind, BoundaryCondition, Coefficients, KernelTables, LogSplit, MaterialParams, Side, SurfacePoint, Term};
use super::{ENTRIES, K11, K12, K21, K22};
use crate::error::Result;
use crate::greens::D::*;
use std::f64::consts::PI;

/// `u = 0`, `∂u/∂n = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Clamped;

impl BoundaryCondition for Clamped {
    fn kind(&self) -> BcKind {
        BcKind::Clamped
    }

    fn check(&self, _mp: &MaterialParams) -> Result<()> {
        Ok(())
    }

    fn tables(&self, _c: &Coefficients) -> KernelTables {
        KernelTables {
            trace: [vec![Term::new(1.0, &[])], vec![Term::new(1.0, &[Nx])]],
            rep: [
                vec![Term::new(1.0, &[Ny, Ny, Ny]), Term::new(3.0, &[Ny, Ty, Ty])],
                vec![Term::new(-1.0, &[Ny, Ny]), Term::new(1.0, &[Ty, Ty])],
            ],
            rep_h: vec![],
        }
    }

    fn biharmonic(&self, _c: &Coefficients, v: &FrameVars, _x: &SurfacePoint, _y: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        let mut out = [LogSplit::default(); ENTRIES];
        out[K11] = LogSplit::plain(forms::clamped_k11(v));
        out[K12] = LogSplit::plain(forms::clamped_k12(v));
        out[K21] = LogSplit::plain(forms::clamped_k21(v));
        out[K22] = LogSplit::plain(forms::clamped_k22(v));
        out
    }

    fn biharmonic_limit(&self, _c: &Coefficients, x: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        let k = x.kappa;
        let mut out = [LogSplit::default(); ENTRIES];
        out[K12] = LogSplit::plain(1.0 / (4.0 * PI));
        out[K21] = LogSplit::plain(-3.0 * k * k / (4.0 * PI));
        out[K22] = LogSplit::plain(k / (2.0 * PI));
        out
    }

    fn jump(&self, _c: &Coefficients, side: Side, x: &SurfacePoint) -> [[f64; 2]; 2] {
        let s = side.sign();
        [[-0.5 * s, 0.0], [s * x.kappa, -0.5 * s]]
    }
}
