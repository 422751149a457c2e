use super::BvProblem;
use crate::error::Result;
use crate::geometry::{Node, Panel};
use crate::kernels::{SurfacePoint, ENTRIES, K11, K11H, K12, K21, K21H, K22};
use crate::quadrature::{adaptive_integrate, log_weights, GaussRule};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

type Block = [Complex64; ENTRIES];

const NEAR_RULE: usize = 16;
const NEAR_REL_TOL: f64 = 1e-13;
const NEAR_ABS_TOL: f64 = 1e-15;

/// `dt` wrapped into `(−π, π]`.
pub(crate) fn wrap(dt: f64) -> f64 {
    let d = dt.rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Panel chart coordinate of parameter `t`, taking the nearest periodic copy.
pub(crate) fn local_coord(panel: &Panel, t: f64) -> f64 {
    let mid = 0.5 * (panel.t0 + panel.t1);
    2.0 * wrap(t - mid) / (panel.t1 - panel.t0)
}

/// Shared per-assembly data.
pub(crate) struct RowContext {
    /// Log product weights for each node of a panel as the target.
    self_log: Vec<Vec<f64>>,
    near_rule: GaussRule,
}

impl RowContext {
    pub(crate) fn new(problem: &BvProblem) -> Result<Self> {
        let rule = &problem.geometry.rule;
        let self_log = rule.nodes.iter().map(|&u| log_weights(rule, u)).collect::<Result<_>>()?;
        Ok(RowContext { self_log, near_rule: GaussRule::new(NEAR_RULE) })
    }
}

fn scaled(b: &Block, w: f64) -> Block {
    b.map(|v| v * w)
}

impl BvProblem {
    /// Assembles the dense `2N × 2N` Nyström matrix, rows in parallel.
    pub fn assemble(&self) -> Result<DMatrix<Complex64>> {
        let n = self.nodes();
        let ctx = RowContext::new(self)?;
        // column-major storage of the transpose keeps each row contiguous
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        a.as_mut_slice().par_chunks_mut(4 * n).enumerate().try_for_each(|(i, rows)| {
            let (r1, r2) = rows.split_at_mut(2 * n);
            self.system_rows(i, &ctx, r1, r2)
        })?;
        a.transpose_mut();
        Ok(a)
    }

    /// Writes the two matrix rows of target node `i`.
    fn system_rows(&self, i: usize, ctx: &RowContext, r1: &mut [Complex64], r2: &mut [Complex64]) -> Result<()> {
        let k = self.kernel_row(i, ctx)?;
        for (j, b) in k.iter().enumerate() {
            r1[2 * j] = b[K11];
            r1[2 * j + 1] = b[K12];
            r2[2 * j] = b[K21];
            r2[2 * j + 1] = b[K22];
        }
        let terms = self.evaluator.surface_terms(self.side);
        if let Some(h) = &self.hilbert {
            // kernels on Hρ₁, composed with H
            let hc = terms.hilbert_coupling;
            for block in &h.blocks {
                for j in block.clone() {
                    let (mut s1, mut s2) = (Complex64::default(), Complex64::default());
                    for l in block.clone() {
                        let hv = h.matrix[(l, j)];
                        s1 += k[l][K11H] * hv;
                        s2 += k[l][K21H] * hv;
                    }
                    r1[2 * j] += s1 * hc;
                    r2[2 * j] += s2 * hc;
                }
            }
        }
        if let Some(d2) = &self.dlp_squared {
            let c = self.geometry.nodes[i].component;
            for j in self.geometry.components[c].nodes.clone() {
                r1[2 * j] += terms.dlp_squared * d2.matrix[(i, j)];
            }
        }
        let x = SurfacePoint::from(&self.geometry.nodes[i]);
        let jm = self.evaluator.jump(self.side, &x);
        r1[2 * i] += jm[0][0];
        r1[2 * i + 1] += jm[0][1];
        r2[2 * i] += jm[1][0];
        r2[2 * i + 1] += jm[1][1];
        Ok(())
    }

    /// Quadrature-weighted kernel entries from target node `i` to every node.
    pub(crate) fn kernel_row(&self, i: usize, ctx: &RowContext) -> Result<Vec<Block>> {
        let p = &self.geometry;
        let xi = &p.nodes[i];
        let x = SurfacePoint::from(xi);
        let (prev, next) = p.neighbours(xi.panel);
        let mut row = vec![[Complex64::default(); ENTRIES]; p.len()];
        for (q, panel) in p.panels.iter().enumerate() {
            let same = panel.component == xi.component;
            if q == xi.panel {
                self.self_panel(i, panel, &ctx.self_log[i - panel.nodes.start], &mut row)?;
            } else if same && (q == prev || q == next) {
                self.adjacent_panel(i, panel, &mut row)?;
            } else if is_near(xi, &p.nodes[panel.nodes.clone()], panel.arc_length) {
                self.near_panel(i, panel, &ctx.near_rule, &mut row)?;
            } else {
                for j in panel.nodes.clone() {
                    let yj = &p.nodes[j];
                    let b = self.evaluator.block(&x, &SurfacePoint::from(yj), same)?;
                    row[j] = scaled(&b, yj.weight);
                }
            }
        }
        Ok(row)
    }

    /// Product rule on the target's own panel:
    /// `∫ (S + L ln R²) = Σ w_j S̃_j + 2 Σ w^log_j L_j` with
    /// `S̃ = S + L ln(R²/(u − uᵢ)²)` smooth.
    fn self_panel(&self, i: usize, panel: &Panel, logw: &[f64], row: &mut [Block]) -> Result<()> {
        let p = &self.geometry;
        let ev = &self.evaluator;
        let x = SurfacePoint::from(&p.nodes[i]);
        let h2 = 0.5 * (panel.t1 - panel.t0);
        let ui = p.rule.nodes[i - panel.nodes.start];
        for (qj, j) in panel.nodes.clone().enumerate() {
            let yj = &p.nodes[j];
            let uj = p.rule.nodes[qj];
            let (split, ln_ratio) = if j == i {
                (ev.block_diagonal(&x), 2.0 * (yj.speed * h2).ln())
            } else {
                let z = p.chord(i, j);
                (ev.block_split_chord(&x, &SurfacePoint::from(yj), z)?, (z.norm_squared() / ((uj - ui) * (uj - ui))).ln())
            };
            let scale = h2 * yj.speed;
            let (ws, wl) = (p.rule.weights[qj] * scale, 2.0 * logw[qj] * scale);
            row[j] = std::array::from_fn(|e| (split[e].smooth + split[e].log * ln_ratio) * ws + split[e].log * wl);
        }
        Ok(())
    }

    /// Neighbouring panel: same product rule with the singularity outside `[−1, 1]`.
    fn adjacent_panel(&self, i: usize, panel: &Panel, row: &mut [Block]) -> Result<()> {
        let p = &self.geometry;
        let ev = &self.evaluator;
        let xi = &p.nodes[i];
        let x = SurfacePoint::from(xi);
        let h2 = 0.5 * (panel.t1 - panel.t0);
        let u0 = local_coord(panel, xi.t);
        let logw = log_weights(&p.rule, u0)?;
        for (qj, j) in panel.nodes.clone().enumerate() {
            let yj = &p.nodes[j];
            let uj = p.rule.nodes[qj];
            let z = p.chord(i, j);
            let split = ev.block_split_chord(&x, &SurfacePoint::from(yj), z)?;
            let ln_ratio = (z.norm_squared() / ((uj - u0) * (uj - u0))).ln();
            let scale = h2 * yj.speed;
            let (ws, wl) = (p.rule.weights[qj] * scale, 2.0 * logw[qj] * scale);
            row[j] = std::array::from_fn(|e| (split[e].smooth + split[e].log * ln_ratio) * ws + split[e].log * wl);
        }
        Ok(())
    }

    /// Close but not touching: adaptive integration of kernel × Lagrange basis.
    fn near_panel(&self, i: usize, panel: &Panel, rule: &GaussRule, row: &mut [Block]) -> Result<()> {
        let p = &self.geometry;
        let ev = &self.evaluator;
        let xi = &p.nodes[i];
        let x = SurfacePoint::from(xi);
        let same = panel.component == xi.component;
        let curve = &p.components[panel.component].curve;
        let order = p.order;
        let h2 = 0.5 * (panel.t1 - panel.t0);
        let mut basis = vec![0.0; order];
        let mut failure = None;
        // no log singularity on this panel, and the log/smooth split loses
        // digits to the growing modified-Bessel coefficient at large kr
        let integrand = |u: f64, out: &mut [Complex64]| {
            let t = panel.t0 + h2 * (u + 1.0);
            let f = curve.frenet_at(t);
            let k = match ev.block(&x, &SurfacePoint::from(&f), same) {
                Ok(k) => k,
                Err(e) => {
                    failure.get_or_insert(e);
                    [Complex64::default(); ENTRIES]
                }
            };
            p.rule.lagrange(u, &mut basis);
            for e in 0..ENTRIES {
                for q in 0..order {
                    out[e * order + q] = k[e] * (basis[q] * f.speed * h2);
                }
            }
        };
        let (vals, _) =
            adaptive_integrate(rule, integrand, -1.0, 1.0, ENTRIES * order, NEAR_REL_TOL, NEAR_ABS_TOL, |_, _| false)?;
        if let Some(e) = failure {
            return Err(e);
        }
        for (q, j) in panel.nodes.clone().enumerate() {
            row[j] = std::array::from_fn(|e| vals[e * order + q]);
        }
        Ok(())
    }
}

fn is_near(x: &Node, nodes: &[Node], arc_length: f64) -> bool {
    nodes.iter().any(|y| (x.position - y.position).norm() < arc_length)
}
