//! Dense surface operators on a panelization: Hilbert transform,
//! arc-length derivative, Laplace double layer and their products.
//!
//! Every operator acts component by component; cross-component blocks are
//! zero. `H` and `d/ds` go through an equispaced arc-length grid with
//! twice as many points as the component has nodes: panel values are
//! interpolated onto the grid, a Fourier multiplier is applied, and the
//! trigonometric interpolant is evaluated back at the nodes.

use crate::error::{FlexError, Result};
use crate::geometry::{Component, Panelization};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::ops::Range;

const OVERSAMPLE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Hilbert,
    ArcDerivative,
    DoubleLayer,
    Composite,
}

#[derive(Debug, Clone)]
pub struct SurfaceOperator {
    pub matrix: DMatrix<f64>,
    pub kind: OperatorKind,
    /// Node ranges of the diagonal blocks, one per component.
    pub blocks: Vec<Range<usize>>,
}

impl SurfaceOperator {
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(x);
        (&self.matrix * v).as_slice().to_vec()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SurfaceOperator) -> Result<SurfaceOperator> {
        if self.blocks != other.blocks {
            return Err(FlexError::Geometry("operators built on different panelizations".into()));
        }
        let mut matrix = DMatrix::zeros(self.len(), self.len());
        // block-diagonal product
        for b in &self.blocks {
            let n = b.len();
            let a = self.matrix.view((b.start, b.start), (n, n));
            let c = other.matrix.view((b.start, b.start), (n, n));
            matrix.view_mut((b.start, b.start), (n, n)).copy_from(&(a * c));
        }
        Ok(SurfaceOperator { matrix, kind: OperatorKind::Composite, blocks: self.blocks.clone() })
    }

    pub fn square(&self) -> Result<SurfaceOperator> {
        self.compose(self)
    }
}

fn blocks(p: &Panelization) -> Vec<Range<usize>> {
    p.components.iter().map(|c| c.nodes.clone()).collect()
}

fn check_closed(p: &Panelization) -> Result<()> {
    for (i, c) in p.components.iter().enumerate() {
        let a = c.curve.position(0.0);
        let b = c.curve.position(std::f64::consts::TAU);
        if (a - b).norm() > 1e-10 * c.length.max(1.0) {
            return Err(FlexError::Geometry(format!("component {i} is not closed")));
        }
        if c.nodes.is_empty() {
            return Err(FlexError::Geometry(format!("component {i} has no nodes")));
        }
    }
    Ok(())
}

/// Interpolation from panel nodes to `m` equispaced arc-length points.
/// Row `j` holds the Lagrange weights on the owning panel.
fn equispaced_interp(p: &Panelization, c: &Component, m: usize) -> Vec<(usize, Vec<f64>)> {
    let panels = &p.panels[c.panels.clone()];
    (0..m)
        .map(|j| {
            let sigma = c.length * j as f64 / m as f64;
            let k = panels.partition_point(|pa| pa.arc_start <= sigma).saturating_sub(1);
            let pa = &panels[k];
            let mut t = pa.t0 + (sigma - pa.arc_start) / pa.arc_length * (pa.t1 - pa.t0);
            for _ in 0..50 {
                let f = pa.arc_start + c.curve.arc_length(pa.t0, t) - sigma;
                let step = f / c.curve.frenet_at(t).speed;
                t -= step;
                if step.abs() < 1e-15 * (pa.t1 - pa.t0) {
                    break;
                }
            }
            let u = (2.0 * (t - pa.t0) / (pa.t1 - pa.t0) - 1.0).clamp(-1.0, 1.0);
            let mut w = vec![0.0; p.order];
            p.rule.lagrange(u, &mut w);
            (pa.nodes.start - c.nodes.start, w)
        })
        .collect()
}

/// Fourier multiplier from grid values to node values:
/// `out_i = Σ_j T(θ_ij) g_j` with `θ_ij = 2π(s_i − σ_j)/L`.
fn multiplier_block<F>(p: &Panelization, c: &Component, kernel: F) -> DMatrix<f64>
where
    F: Fn(f64, usize) -> f64 + Sync,
{
    let n = c.nodes.len();
    let m = OVERSAMPLE * n;
    let interp = equispaced_interp(p, c, m);
    let order = p.order;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = p.nodes[c.nodes.start + i].arc;
            let mut row = vec![0.0; n];
            for (j, (start, w)) in interp.iter().enumerate() {
                let sigma = c.length * j as f64 / m as f64;
                let theta = 2.0 * PI * (s - sigma) / c.length;
                let t = kernel(theta, m);
                for q in 0..order {
                    row[start + q] += t * w[q];
                }
            }
            row
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// `(2/M) Σ sin mθ` and `(2/M) Σ m sin mθ` over `1 ≤ m < M/2`.
fn sine_sums(theta: f64, m: usize) -> (f64, f64) {
    let kmax = m / 2 - 1;
    let (st, ct) = theta.sin_cos();
    let (mut s, mut c) = (st, ct);
    let (mut s1, mut s2) = (0.0, 0.0);
    for k in 1..=kmax {
        s1 += s;
        s2 += k as f64 * s;
        let ns = s * ct + c * st;
        c = c * ct - s * st;
        s = ns;
    }
    (2.0 * s1 / m as f64, 2.0 * s2 / m as f64)
}

/// Hilbert transform `H[f](x) = ∫ (x−y)·τ(y) / (π|x−y|²) f(y) dS(y)`.
pub fn hilbert_matrix(p: &Panelization) -> Result<SurfaceOperator> {
    check_closed(p)?;
    let mut matrix = DMatrix::zeros(p.len(), p.len());
    for c in &p.components {
        let mut block = multiplier_block(p, c, |th, m| sine_sums(th, m).0);
        let len = c.length;
        let nodes = &p.nodes[c.nodes.clone()];
        // smooth remainder K^H − cot(π(s−s')/L)/L, zero on the diagonal
        for (j, y) in nodes.iter().enumerate() {
            for (i, x) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let r = x.position - y.position;
                let kh = r.dot(&y.tangent) / (PI * r.norm_squared());
                let cot = 1.0 / (PI * (x.arc - y.arc) / len).tan() / len;
                block[(i, j)] += (kh - cot) * y.weight;
            }
        }
        let n = c.nodes.len();
        matrix.view_mut((c.nodes.start, c.nodes.start), (n, n)).copy_from(&block);
    }
    Ok(SurfaceOperator { matrix, kind: OperatorKind::Hilbert, blocks: blocks(p) })
}

/// Arc-length derivative by spectral differentiation on each component.
pub fn dds_matrix(p: &Panelization) -> Result<SurfaceOperator> {
    check_closed(p)?;
    let mut matrix = DMatrix::zeros(p.len(), p.len());
    for c in &p.components {
        let scale = 2.0 * PI / c.length;
        let block = multiplier_block(p, c, |th, m| -scale * sine_sums(th, m).1);
        let n = c.nodes.len();
        matrix.view_mut((c.nodes.start, c.nodes.start), (n, n)).copy_from(&block);
    }
    Ok(SurfaceOperator { matrix, kind: OperatorKind::ArcDerivative, blocks: blocks(p) })
}

/// Laplace double layer `D[f](x) = ∫ (x−y)·n(y) / (2π|x−y|²) f(y) dS(y)`,
/// diagonal `−κ/4π`.
pub fn laplace_dlp_matrix(p: &Panelization) -> Result<SurfaceOperator> {
    check_closed(p)?;
    let mut matrix = DMatrix::zeros(p.len(), p.len());
    for c in &p.components {
        let nodes = &p.nodes[c.nodes.clone()];
        let n = nodes.len();
        let mut block = matrix.view_mut((c.nodes.start, c.nodes.start), (n, n));
        for (j, y) in nodes.iter().enumerate() {
            for (i, x) in nodes.iter().enumerate() {
                let k = if i == j {
                    -y.kappa / (4.0 * PI)
                } else {
                    let r = x.position - y.position;
                    r.dot(&y.normal) / (2.0 * PI * r.norm_squared())
                };
                block[(i, j)] = k * y.weight;
            }
        }
    }
    Ok(SurfaceOperator { matrix, kind: OperatorKind::DoubleLayer, blocks: blocks(p) })
}
