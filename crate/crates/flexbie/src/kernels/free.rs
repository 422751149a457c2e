use super::forms::{self, FrameVars};
use super::{BcKind, BoundaryCondition, Coefficients, Factor, KernelTables, LogSplit, MaterialParams, Side, SurfacePoint, SurfaceTerms, Term};
use super::{ENTRIES, K11, K11H, K12, K21, K21H, K22};
use crate::error::{FlexError, Result};
use crate::greens::D::*;
use std::f64::consts::PI;

/// Vanishing bending moment and Kirchhoff shear:
/// `B₁u = νΔu + (1−ν)∂²u/∂n²`,
/// `B₂u = ∂³u/∂n³ + (2−ν)∂_τ∂_τ∂_n u + (1−ν)κ(∂²_τ − ∂²_n)u`.
///
/// The first density enters as `K₁ᵃ[ρ₁] + β^± K₁ᵇ[Hρ₁]`; the system
/// uses the combined kernels `K₁₁ᵇ + (β/2)K^H` and `K₂₁ᵃ − (β/2)∂_{τ_x}K^H`
/// on each component, with the matching `−2β β^± D²` term.
#[derive(Debug, Clone, Copy, Default)]
pub struct Free;

impl BoundaryCondition for Free {
    fn kind(&self) -> BcKind {
        BcKind::Free
    }

    fn check(&self, mp: &MaterialParams) -> Result<()> {
        let beta = 0.5 * (1.0 + mp.nu);
        if (beta * beta - 1.0).abs() < 1e-12 {
            return Err(FlexError::Params(format!("free plate equation needs beta^2 != 1, got nu = {}", mp.nu)));
        }
        Ok(())
    }

    fn tables(&self, c: &Coefficients) -> KernelTables {
        let nu = c.nu;
        KernelTables {
            trace: [
                vec![Term::new(1.0, &[Nx, Nx]), Term::new(nu, &[Tx, Tx])],
                vec![
                    Term::new(1.0, &[Nx, Nx, Nx]),
                    Term::new(2.0 - nu, &[Nx, Tx, Tx]),
                    Term::with(1.0 - nu, Factor::KappaX, &[Tx, Tx]),
                    Term::with(nu - 1.0, Factor::KappaX, &[Nx, Nx]),
                ],
            ],
            rep: [vec![Term::new(1.0, &[Ny])], vec![Term::new(1.0, &[])]],
            rep_h: vec![Term::new(1.0, &[Ty])],
        }
    }

    fn biharmonic(&self, c: &Coefficients, v: &FrameVars, x: &SurfacePoint, _y: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        let nu = c.nu;
        let kx = (1.0 - nu) * x.kappa;
        let mut out = [LogSplit::default(); ENTRIES];
        out[K11] = LogSplit::plain(forms::free_k11a(v, nu));
        out[K12] = LogSplit { smooth: forms::free_k12(v, nu), log: forms::free_k12_log(v, nu) };
        out[K21] = LogSplit::plain(forms::free_k21a_h_geo(v, nu) + kx * forms::free_k21a_kap(v));
        out[K22] = LogSplit::plain(forms::free_k22_geo(v, nu) + kx * forms::free_k22_kap(v));
        out[K11H] = LogSplit::plain(forms::free_k11b_h(v, nu));
        out[K21H] = LogSplit::plain(forms::free_k21b_geo(v, nu) + kx * forms::free_k21b_kap(v));
        out
    }

    fn biharmonic_limit(&self, c: &Coefficients, x: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        let (k, nu) = (x.kappa, c.nu);
        let mut out = [LogSplit::default(); ENTRIES];
        out[K11] = LogSplit::plain((3.0 * nu - 1.0) * k / (8.0 * PI));
        out[K12] = LogSplit { smooth: (1.0 + 3.0 * nu) / (8.0 * PI), log: (1.0 + nu) / (8.0 * PI) };
        out[K21] = LogSplit::plain((1.0 - nu) * k * k / (8.0 * PI));
        out[K22] = LogSplit::plain((3.0 - nu) * k / (8.0 * PI));
        out[K21H] = LogSplit::plain((1.0 + nu) * x.dkappa / (24.0 * PI));
        out
    }

    fn augmentation(&self, c: &Coefficients, v: &FrameVars) -> [f64; ENTRIES] {
        let mut out = [0.0; ENTRIES];
        out[K11H] = 0.5 * c.beta * forms::hilbert(v);
        out[K21] = -0.5 * c.beta * forms::hilbert_dtx(v);
        out
    }

    fn jump(&self, c: &Coefficients, side: Side, _x: &SurfacePoint) -> [[f64; 2]; 2] {
        let s = side.sign();
        [[-0.5 * s + 0.5 * s * c.beta * c.beta, 0.0], [0.0, 0.5 * s]]
    }

    fn surface_terms(&self, c: &Coefficients, side: Side) -> SurfaceTerms {
        let bpm = c.beta_pm(side);
        SurfaceTerms { hilbert_coupling: bpm, dlp_squared: -2.0 * c.beta * bpm }
    }
}
