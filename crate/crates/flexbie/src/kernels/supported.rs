use super::forms::{self, FrameVars};
use super::{BcKind, BoundaryCondition, Coefficients, Factor, KernelTables, LogSplit, MaterialParams, Side, SurfacePoint, Term};
use super::{ENTRIES, K11, K12, K21, K22};
use crate::error::{FlexError, Result};
use crate::greens::D::*;
use std::f64::consts::PI;

/// `u = 0`, `νΔu + (1−ν)∂²u/∂n² = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Supported;

impl BoundaryCondition for Supported {
    fn kind(&self) -> BcKind {
        BcKind::Supported
    }

    fn check(&self, mp: &MaterialParams) -> Result<()> {
        if (mp.nu + 1.0).abs() < 1e-12 || (mp.nu - 3.0).abs() < 1e-12 {
            return Err(FlexError::Params(format!(
                "supported plate equation is not of the second kind for nu = {}",
                mp.nu
            )));
        }
        Ok(())
    }

    fn tables(&self, c: &Coefficients) -> KernelTables {
        KernelTables {
            trace: [vec![Term::new(1.0, &[])], vec![Term::new(1.0, &[Nx, Nx]), Term::new(c.nu, &[Tx, Tx])]],
            rep: [
                vec![
                    Term::new(1.0, &[Ny, Ny, Ny]),
                    Term::new(c.alpha1, &[Ny, Ty, Ty]),
                    Term::with(c.alpha2, Factor::KappaY, &[Ny, Ny]),
                    Term::with(c.alpha3, Factor::DKappaY, &[Ty]),
                ],
                vec![Term::new(1.0, &[Ny])],
            ],
            rep_h: vec![],
        }
    }

    fn biharmonic(&self, c: &Coefficients, v: &FrameVars, _x: &SurfacePoint, y: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        let (ka, kb) = (c.alpha2 * y.kappa, c.alpha3 * y.dkappa);
        let mut out = [LogSplit::default(); ENTRIES];
        out[K11] = LogSplit {
            smooth: forms::supported_k11_geo(v, c.nu) + ka * forms::supported_nyny(v) + kb * forms::supported_ty(v),
            log: ka * forms::supported_nyny_log(v) + kb * forms::supported_ty_log(v),
        };
        out[K12] = LogSplit { smooth: forms::supported_k12(v), log: forms::supported_k12_log(v) };
        out[K21] = LogSplit::plain(
            forms::supported_k21_geo(v, c.nu)
                + ka * forms::supported_k21_kap(v, c.nu)
                + kb * forms::supported_k21_dkap(v, c.nu),
        );
        out[K22] = LogSplit::plain(forms::free_k11a(v, c.nu));
        out
    }

    fn biharmonic_limit(&self, c: &Coefficients, x: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        let (k, kpp, nu) = (x.kappa, x.ddkappa, c.nu);
        let mut out = [LogSplit::default(); ENTRIES];
        out[K11] = LogSplit { smooth: k * (1.0 + nu + c.alpha2) / (8.0 * PI), log: c.alpha2 * k / (8.0 * PI) };
        out[K21] = LogSplit::plain(
            (nu - 1.0) * (12.0 * k.powi(3) * (nu * nu - nu + 4.0) + kpp * (-5.0 * nu * nu + 4.0 * nu + 33.0))
                / (48.0 * PI * (nu - 3.0)),
        );
        out[K22] = LogSplit::plain((3.0 * nu - 1.0) * k / (8.0 * PI));
        out
    }

    fn jump(&self, c: &Coefficients, side: Side, x: &SurfacePoint) -> [[f64; 2]; 2] {
        let s = side.sign();
        [[-0.5 * s, 0.0], [s * c.c0 * x.kappa * x.kappa, -0.5 * s]]
    }
}
