//! Numerical self-checks with measured values: kernel limits on circles,
//! jump relations, the Hilbert identity and PDE residuals of computed fields.

use crate::error::{FlexError, Result};
use crate::geometry::{Panelization, Vec2};
use crate::greens::Frame;
use crate::kernels::{lookup, KernelEvaluator, LogSplit, MaterialParams, Side, SurfacePoint, ENTRIES};
use crate::potential::{default_offsets, eval_field_points, jump_probe};
use crate::surfaceops::{hilbert_matrix, laplace_dlp_matrix};
use crate::system::{BvProblem, DensitySolution, SolveReport};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

pub const ENTRY_NAMES: [&str; ENTRIES] = ["K11", "K12", "K21", "K22", "K11H", "K21H"];
pub const BC_NAMES: [&str; 3] = ["clamped", "supported", "free"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    /// `true` when `measured` must exceed `bound` (negative controls).
    pub lower_bound: bool,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, bound, lower_bound: false, passed: measured <= bound }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), measured, bound, lower_bound: true, passed: measured >= bound }
    }
}

/// Point at angle `th` on the circle of radius `r` through the origin,
/// centred at `(−r, 0)`, so that short chords are exact to rounding.
fn circle_point(r: f64, th: f64) -> SurfacePoint {
    let (s, c) = th.sin_cos();
    let h = (0.5 * th).sin();
    SurfacePoint {
        position: Vec2::new(-2.0 * r * h * h, r * s),
        frame: Frame::new(Vec2::new(c, s), Vec2::new(-s, c)),
        kappa: 1.0 / r,
        dkappa: 0.0,
        ddkappa: 0.0,
    }
}

/// Limit at 0 from samples at `s, s/10, s/100`, assuming `L + c₁s + c₂s²`.
fn extrapolate(f0: f64, f1: f64, f2: f64) -> f64 {
    let g1 = (10.0 * f1 - f0) / 9.0;
    let g2 = (10.0 * f2 - f1) / 9.0;
    (100.0 * g2 - g1) / 99.0
}

fn evaluator(bc: &str, k: f64, nu: f64) -> Result<KernelEvaluator> {
    KernelEvaluator::new(lookup(bc)?, MaterialParams::new(k, nu)?)
}

/// On-surface limits of every entry against extrapolated evaluation at
/// arc distances `1e-2, 1e-3, 1e-4` on both sides, on a circle.
pub fn kernel_limits(radius: f64, nu: f64, tol: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for bc in BC_NAMES {
        let e = evaluator(bc, 1.0, nu)?;
        let x = circle_point(radius, 0.0);
        let lim = e.on_surface_limits(&x);
        let mut worst = [0.0f64; ENTRIES];
        for sign in [1.0, -1.0] {
            let samples: Vec<[LogSplit<f64>; ENTRIES]> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|s| {
                    let y = circle_point(radius, sign * s / radius);
                    e.biharmonic_split(&x, &y, x.position - y.position)
                })
                .collect();
            for i in 0..ENTRIES {
                let sm = extrapolate(samples[0][i].smooth, samples[1][i].smooth, samples[2][i].smooth);
                let lg = extrapolate(samples[0][i].log, samples[1][i].log, samples[2][i].log);
                worst[i] = worst[i].max((sm - lim[i].smooth).abs().max((lg - lim[i].log).abs()));
            }
        }
        for i in 0..ENTRIES {
            out.push(Check::at_most(format!("{bc} {} limit, radius {radius}, nu {nu:.4}", ENTRY_NAMES[i]), worst[i], tol));
        }
    }
    Ok(out)
}

/// Term-by-term evaluation at arc distance `1e-8` must miss the limits by
/// more than `1e-6` while the cancelled forms stay within it.
pub fn cancellation_control(radius: f64, nu: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for bc in BC_NAMES {
        let e = evaluator(bc, 1.0, nu)?;
        let x = circle_point(radius, 0.0);
        let y = circle_point(radius, 1e-8 / radius);
        let z = x.position - y.position;
        let ln = z.norm_squared().ln();
        let lim = e.on_surface_limits(&x);
        let good = e.biharmonic_split(&x, &y, z);
        let naive = e.biharmonic_naive(&x, &y)?;
        let (mut good_worst, mut naive_worst) = (0.0f64, 0.0f64);
        for i in 0..ENTRIES {
            let want = lim[i].value(ln);
            naive_worst = naive_worst.max((naive[i] - want).abs());
            // the supported K21 loses digits like eps/s² through the geometry
            if !(bc == "supported" && i == crate::kernels::K21) {
                good_worst = good_worst.max((good[i].value(ln) - want).abs());
            }
        }
        out.push(Check::at_most(format!("{bc} cancelled forms at s=1e-8"), good_worst, 1e-6));
        out.push(Check::at_least(format!("{bc} naive sums at s=1e-8 (negative control)"), naive_worst, 1e-6));
    }
    Ok(out)
}

/// Smooth test densities on the nodes.
pub fn smooth_density(p: &Panelization) -> DensitySolution {
    let rho1 = p.nodes.iter().map(|n| Complex64::new(n.t.cos(), 0.5 * (2.0 * n.t).sin())).collect();
    let rho2 = p.nodes.iter().map(|n| Complex64::new(0.3 * n.t.sin(), 0.2 + 0.1 * (3.0 * n.t).cos())).collect();
    DensitySolution { rho1, rho2, report: SolveReport::default() }
}

/// Boundary limits of both traces of the layer potential, extrapolated
/// from the problem's side, against the Nyström rows applied to a smooth
/// density (jump terms plus principal values). Error relative to `max(1, |row|)`.
pub fn jump_relations(problem: &BvProblem, nodes: &[usize], tol: f64) -> Result<Vec<Check>> {
    let sol = smooth_density(&problem.geometry);
    let a = problem.assemble()?;
    let ax = &a * DVector::from_vec(sol.interleaved());
    let bc = problem.evaluator.boundary_condition().name();
    let mut out = Vec::new();
    for &node in nodes {
        if node >= problem.nodes() {
            return Err(FlexError::Domain(format!("node {node} out of range")));
        }
        let h = default_offsets(problem, node, problem.side);
        let probe = jump_probe(problem, &sol, node, &h)?;
        for row in 0..2 {
            let want = ax[2 * node + row];
            let err = (probe.limit[row] - want).norm() / want.norm().max(1.0);
            out.push(Check::at_most(format!("{bc} {:?} trace {} at node {node}", problem.side, row + 1), err, tol));
        }
    }
    Ok(out)
}

/// `‖(¼H² + ¼I − D²)f‖₂ / ‖f‖₂` over random smooth densities.
pub fn hilbert_identity(p: &Panelization, samples: usize, seed: u64, tol: f64) -> Result<Check> {
    let h = hilbert_matrix(p)?;
    let d = laplace_dlp_matrix(p)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let coef: Vec<(f64, f64)> = (0..6).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let f: Vec<f64> = p
            .nodes
            .iter()
            .map(|n| coef.iter().enumerate().map(|(m, (a, b))| a * (m as f64 * n.t).cos() + b * (m as f64 * n.t).sin()).sum())
            .collect();
        let hh = h.apply(&h.apply(&f));
        let dd = d.apply(&d.apply(&f));
        let r: f64 = (0..f.len()).map(|i| (0.25 * hh[i] + 0.25 * f[i] - dd[i]).powi(2)).sum::<f64>().sqrt();
        let n: f64 = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(r / n);
    }
    Ok(Check::at_most(format!("Hilbert identity, {samples} random densities"), worst, tol))
}

/// `h⁴|Δ²u − k⁴u| / |u|` with the 13-point stencil of spacing `h`, worst
/// over the given points.
pub fn pde_residual(problem: &BvProblem, sol: &DensitySolution, points: &[Vec2], h: f64, tol: f64) -> Result<Check> {
    const STENCIL: [(i32, i32, f64); 13] = [
        (0, 0, 20.0),
        (1, 0, -8.0),
        (-1, 0, -8.0),
        (0, 1, -8.0),
        (0, -1, -8.0),
        (1, 1, 2.0),
        (1, -1, 2.0),
        (-1, 1, 2.0),
        (-1, -1, 2.0),
        (2, 0, 1.0),
        (-2, 0, 1.0),
        (0, 2, 1.0),
        (0, -2, 1.0),
    ];
    let k4 = problem.evaluator.params().k.powi(4);
    let all: Vec<Vec2> =
        points.iter().flat_map(|x| STENCIL.iter().map(move |(i, j, _)| x + Vec2::new(*i as f64 * h, *j as f64 * h))).collect();
    let u = eval_field_points(problem, sol, &all)?;
    let mut worst: f64 = 0.0;
    for chunk in u.chunks(STENCIL.len()) {
        let bilap: Complex64 = chunk.iter().zip(&STENCIL).map(|(v, s)| v * s.2).sum();
        let r = (bilap - chunk[0] * (k4 * h.powi(4))).norm() / chunk[0].norm();
        worst = worst.max(r);
    }
    Ok(Check::at_most(format!("PDE residual at {} points, h = {h}", points.len()), worst, tol))
}

/// Exterior or interior problem on one curve, for the check suites.
pub fn single_problem(p: Panelization, bc: &str, k: f64, nu: f64, side: Side) -> Result<BvProblem> {
    BvProblem::new(p, lookup(bc)?, MaterialParams::new(k, nu)?, side)
}
