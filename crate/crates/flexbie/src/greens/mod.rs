//! The flexural Green's function
//! `G = (1/2k²)[(i/4)H₀⁽¹⁾(kr) − K₀(kr)/2π]`, the biharmonic
//! `G^B = r² ln r / 8π`, and their directional derivatives up to order 5.
//!
//! Near the diagonal `G` is evaluated as the series for `G − G^B` plus the
//! closed-form `G^B`, which avoids the cancellation between the Hankel and
//! Macdonald terms.

pub mod closed;
mod contract;
mod radial;

pub use contract::{contract, contract_diagonal, term_count, Dir, MAX_ORDER};
pub use radial::{
    biharmonic, direct, flexural, remainder_log, remainder_split, RemainderSeries, Split, ORDERS, SERIES_THRESHOLD,
};

use crate::error::{FlexError, Result};
use crate::geometry::Vec2;
use num_complex::Complex64;

/// Normal and tangent at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub n: Vec2,
    pub t: Vec2,
}

impl Frame {
    pub fn new(n: Vec2, t: Vec2) -> Self {
        Frame { n, t }
    }

    /// Frame with the normal `n` and tangent obtained by a quarter turn,
    /// matching `n = (τ_y, −τ_x)`.
    pub fn from_normal(n: Vec2) -> Self {
        Frame { n, t: Vec2::new(-n.y, n.x) }
    }
}

/// Derivative directions drawn from the two frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum D {
    Nx,
    Tx,
    Ny,
    Ty,
}

impl D {
    pub fn dir(self, fx: &Frame, fy: &Frame) -> Dir {
        match self {
            D::Nx => Dir::x(fx.n),
            D::Tx => Dir::x(fx.t),
            D::Ny => Dir::y(fy.n),
            D::Ty => Dir::y(fy.t),
        }
    }
}

/// Radial data plus frames; individual derivatives are contracted on demand.
#[derive(Debug, Clone, Copy)]
pub struct Derivs<T> {
    pub z: Vec2,
    pub fx: Frame,
    pub fy: Frame,
    pub radial: [T; ORDERS],
}

pub type GreensDerivs = Derivs<Complex64>;
pub type BiharmonicDerivs = Derivs<f64>;

impl<T> Derivs<T>
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    pub fn value(&self) -> T {
        self.radial[0]
    }

    /// `G_{d₁…dₙ}`, e.g. `d(&[D::Nx, D::Ny, D::Ny])`.
    pub fn d(&self, word: &[D]) -> T {
        let mut dirs = [Dir::x(Vec2::zeros()); MAX_ORDER];
        for (slot, w) in dirs.iter_mut().zip(word) {
            *slot = w.dir(&self.fx, &self.fy);
        }
        contract(self.z, &dirs[..word.len()], &self.radial)
    }

    /// Derivative along arbitrary directions.
    pub fn along(&self, dirs: &[Dir]) -> T {
        contract(self.z, dirs, &self.radial)
    }
}

fn check_distinct(x: Vec2, y: Vec2) -> Result<f64> {
    let r = (x - y).norm();
    if !(r > 0.0) || !r.is_finite() {
        return Err(FlexError::Domain(format!("Green's function evaluated at coincident points {x:?}")));
    }
    Ok(r)
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(FlexError::Params(format!("wavenumber must be positive and finite, got {k}")));
    }
    Ok(())
}

/// `G` and its derivatives at `(x, y)`.
pub fn eval_g(x: Vec2, y: Vec2, k: f64, fx: Frame, fy: Frame) -> Result<GreensDerivs> {
    check_k(k)?;
    let r = check_distinct(x, y)?;
    let radial = flexural(&RemainderSeries::new(k), r, k)?;
    Ok(Derivs { z: x - y, fx, fy, radial })
}

/// Same as [`eval_g`] with a precomputed series (for loops over many pairs).
pub fn eval_g_with(series: &RemainderSeries, x: Vec2, y: Vec2, k: f64, fx: Frame, fy: Frame) -> Result<GreensDerivs> {
    let r = check_distinct(x, y)?;
    let radial = flexural(series, r, k)?;
    Ok(Derivs { z: x - y, fx, fy, radial })
}

/// `G − G^B` by its power series; rejected above the series threshold.
pub fn eval_g_minus_gb(x: Vec2, y: Vec2, k: f64, fx: Frame, fy: Frame) -> Result<GreensDerivs> {
    check_k(k)?;
    let r = check_distinct(x, y)?;
    if k * r > SERIES_THRESHOLD {
        return Err(FlexError::Domain(format!(
            "series for G − G^B used at k·r = {} above threshold {SERIES_THRESHOLD}",
            k * r
        )));
    }
    let r2 = r * r;
    let radial = RemainderSeries::new(k).eval(0.5 * r2).collapse(r2.ln());
    Ok(Derivs { z: x - y, fx, fy, radial })
}

/// `G^B` and its derivatives.
pub fn eval_gb_derivs(x: Vec2, y: Vec2, fx: Frame, fy: Frame) -> Result<BiharmonicDerivs> {
    let r = check_distinct(x, y)?;
    let r2 = r * r;
    Ok(Derivs { z: x - y, fx, fy, radial: biharmonic(r2).collapse(r2.ln()) })
}

/// `G = smooth + coefficient·ln|x − y|` with both parts smooth.
pub fn log_split(x: Vec2, y: Vec2, k: f64, fx: Frame, fy: Frame) -> Result<(GreensDerivs, GreensDerivs)> {
    check_k(k)?;
    let r = check_distinct(x, y)?;
    if k * r > SERIES_THRESHOLD {
        return Err(FlexError::Domain(format!(
            "log split needs k·r ≤ {SERIES_THRESHOLD}, got {}",
            k * r
        )));
    }
    let (smooth, log) = split_radial(&RemainderSeries::new(k), r * r);
    // the split radial log part multiplies ln r² = 2 ln r
    let log2 = log.map(|v| v * 2.0);
    Ok((Derivs { z: x - y, fx, fy, radial: smooth }, Derivs { z: x - y, fx, fy, radial: log2 }))
}

/// Radial derivatives of the full `G` as `(smooth, coefficient of ln r²)`.
pub fn split_radial(series: &RemainderSeries, r2: f64) -> ([Complex64; ORDERS], [Complex64; ORDERS]) {
    let rem = series.eval(0.5 * r2);
    let b = biharmonic(r2);
    let mut s = rem.smooth;
    let mut l = rem.log;
    for j in 0..ORDERS {
        s[j] += b.smooth[j];
        l[j] += b.log[j];
    }
    (s, l)
}
