//! Boundary data for point sources and plane waves, layer-potential
//! evaluation off the boundary, far-field patterns and jump probes.

use crate::error::{FlexError, Result};
use crate::geometry::{Panel, Vec2};
use crate::kernels::{Side, SurfacePoint, ENTRIES, K11, K11H, K12, K21, K21H, K22};
use crate::quadrature::{adaptive_integrate, GaussRule};
use crate::system::{BvProblem, DensitySolution};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

const NEAR_RULE: usize = 16;
const NEAR_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    PointSource,
    PlaneWave,
    Custom,
}

/// Right-hand side samples `(f₁, f₂)` on the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    pub provenance: Provenance,
}

impl BoundaryData {
    pub fn custom(f1: Vec<Complex64>, f2: Vec<Complex64>) -> Result<Self> {
        if f1.len() != f2.len() {
            return Err(FlexError::Domain(format!("f1 has {} samples, f2 has {}", f1.len(), f2.len())));
        }
        Ok(BoundaryData { f1, f2, provenance: Provenance::Custom })
    }

    /// `(f₁, f₂)` interleaved per node, matching the unknown ordering.
    pub fn interleaved(&self) -> Vec<Complex64> {
        self.f1.iter().zip(&self.f2).flat_map(|(a, b)| [*a, *b]).collect()
    }
}

/// `e^{ik d·x}` with unit direction `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: f64,
    pub direction: Vec2,
}

impl PlaneWave {
    pub fn new(k: f64, direction: Vec2) -> Result<Self> {
        if ((direction.norm() - 1.0).abs()) > 1e-12 {
            return Err(FlexError::Domain(format!("plane wave direction must be a unit vector, got {direction:?}")));
        }
        Ok(PlaneWave { k, direction })
    }

    /// Incidence angle `θ`: direction `(cos θ, sin θ)`.
    pub fn from_angle(k: f64, theta: f64) -> Self {
        PlaneWave { k, direction: Vec2::new(theta.cos(), theta.sin()) }
    }

    pub fn value(&self, x: Vec2) -> Complex64 {
        Complex64::new(0.0, self.k * self.direction.dot(&x)).exp()
    }

    pub fn derivative(&self, x: Vec2, dirs: &[Vec2]) -> Complex64 {
        dirs.iter().fold(self.value(x), |acc, d| acc * Complex64::new(0.0, self.k * self.direction.dot(d)))
    }
}

fn traces<F>(problem: &BvProblem, field: F) -> Result<(Vec<Complex64>, Vec<Complex64>)>
where
    F: Fn(Vec2, &[Vec2]) -> Result<Complex64> + Sync,
{
    let ev = &problem.evaluator;
    let pairs: Vec<[Complex64; 2]> = problem
        .geometry
        .nodes
        .par_iter()
        .map(|n| {
            let x = SurfacePoint::from(n);
            let err = std::cell::RefCell::new(None);
            let t = ev.trace(&x, |dirs| match field(x.position, dirs) {
                Ok(v) => v,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    Complex64::default()
                }
            });
            match err.into_inner() {
                Some(e) => Err(e),
                None => Ok(t),
            }
        })
        .collect::<Result<_>>()?;
    Ok((pairs.iter().map(|p| p[0]).collect(), pairs.iter().map(|p| p[1]).collect()))
}

/// Boundary traces of `G(·, source)`. The source must lie on the side
/// opposite to the solution domain.
pub fn point_source_data(problem: &BvProblem, source: Vec2) -> Result<BoundaryData> {
    let outside = problem.geometry.is_exterior(source);
    match problem.side {
        Side::Exterior if outside => {
            return Err(FlexError::Domain(format!("point source {source:?} must lie inside a scatterer for the exterior problem")))
        }
        Side::Interior if !outside => {
            return Err(FlexError::Domain(format!("point source {source:?} must lie outside the domain for the interior problem")))
        }
        _ => {}
    }
    if problem.geometry.closest(source).2 < 1e-12 {
        return Err(FlexError::Domain(format!("point source {source:?} lies on the boundary")));
    }
    let ev = &problem.evaluator;
    let (f1, f2) = traces(problem, |x, dirs| ev.green_derivative(x, source, dirs))?;
    Ok(BoundaryData { f1, f2, provenance: Provenance::PointSource })
}

/// Negative boundary traces of an incident plane wave.
pub fn plane_wave_data(problem: &BvProblem, wave: &PlaneWave) -> Result<BoundaryData> {
    let (f1, f2) = traces(problem, |x, dirs| Ok(-wave.derivative(x, dirs)))?;
    Ok(BoundaryData { f1, f2, provenance: Provenance::PlaneWave })
}

/// Where to evaluate a layer potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Point(Vec2),
    /// `γ(t) + h n(t)` on a component; the offset keeps full relative
    /// precision when `h` is tiny.
    Normal { component: usize, t: f64, h: f64 },
}

impl Target {
    pub fn position(&self, problem: &BvProblem) -> Vec2 {
        match *self {
            Target::Point(x) => x,
            Target::Normal { component, t, h } => {
                let f = problem.geometry.components[component].curve.frenet_at(t);
                f.position + f.normal * h
            }
        }
    }

    /// `x − γ(s)` for the source at local coordinate `u` of `panel`.
    fn chord(&self, problem: &BvProblem, panel: &Panel, u: f64, y: Vec2) -> Vec2 {
        match *self {
            Target::Normal { component, t, h } if component == panel.component => {
                let curve = &problem.geometry.components[component].curve;
                let n = curve.frenet_at(t).normal;
                // the parameter offset comes from panel coordinates: forming
                // s first would round it to ulp(s), which is a visible step
                // in the kernel when h is tiny
                let h2 = 0.5 * (panel.t1 - panel.t0);
                let mid = 0.5 * (panel.t0 + panel.t1);
                let t = t - TAU * ((t - mid) / TAU).round();
                let ut = (t - panel.t0) / h2 - 1.0;
                curve.chord_back(t, h2 * (ut - u)) + n * h
            }
            _ => self.position(problem) - y,
        }
    }
}

/// Densities prepared for evaluation: `ρ₁`, `ρ₂` and `β^± Hρ₁`.
struct Densities {
    rho1: Vec<Complex64>,
    rho2: Vec<Complex64>,
    hrho: Vec<Complex64>,
    scale: f64,
}

impl Densities {
    fn new(problem: &BvProblem, sol: &DensitySolution) -> Result<Self> {
        let n = problem.nodes();
        if sol.rho1.len() != n || sol.rho2.len() != n {
            return Err(FlexError::Domain(format!("solution has {} nodes, geometry has {n}", sol.rho1.len())));
        }
        let hrho = match problem.hilbert() {
            Some(h) => {
                let hc = problem.evaluator.surface_terms(problem.side).hilbert_coupling;
                let re: Vec<f64> = sol.rho1.iter().map(|c| c.re).collect();
                let im: Vec<f64> = sol.rho1.iter().map(|c| c.im).collect();
                let (hr, hi) = (h.apply(&re), h.apply(&im));
                hr.iter().zip(&hi).map(|(a, b)| Complex64::new(*a, *b) * hc).collect()
            }
            None => vec![Complex64::default(); n],
        };
        let scale = sol.rho1.iter().chain(&sol.rho2).chain(&hrho).map(|c| c.norm()).fold(0.0, f64::max);
        Ok(Densities { rho1: sol.rho1.clone(), rho2: sol.rho2.clone(), hrho, scale })
    }
}

fn is_near(problem: &BvProblem, panel: &Panel, x: Vec2) -> bool {
    problem.geometry.nodes[panel.nodes.clone()].iter().any(|y| (x - y.position).norm() < panel.arc_length)
}

/// Adaptive integral over one panel of `f(y, z, ℓ)`, where `ℓ` holds the
/// Lagrange basis at the source point; `f` writes `m` values.
fn near_panel<F>(problem: &BvProblem, target: &Target, panel: &Panel, m: usize, scale: f64, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(&SurfacePoint, Vec2, &[f64], &mut [Complex64]) -> Result<()>,
{
    let p = &problem.geometry;
    let curve = &p.components[panel.component].curve;
    let h2 = 0.5 * (panel.t1 - panel.t0);
    let mut basis = vec![0.0; p.order];
    let mut failure = None;
    let rule = GaussRule::new(NEAR_RULE);
    let (vals, _) = adaptive_integrate(
        &rule,
        |u, out: &mut [Complex64]| {
            let t = panel.t0 + h2 * (u + 1.0);
            let fr = curve.frenet_at(t);
            let y = SurfacePoint::from(&fr);
            let z = target.chord(problem, panel, u, fr.position);
            p.rule.lagrange(u, &mut basis);
            if let Err(e) = f(&y, z, &basis, out) {
                failure.get_or_insert(e);
                out.iter_mut().for_each(|v| *v = Complex64::default());
            }
            let w = fr.speed * h2;
            out.iter_mut().for_each(|v| *v *= w);
        },
        -1.0,
        1.0,
        m,
        NEAR_REL_TOL,
        1e-15 * scale.max(1e-300),
        |_, _| false,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(vals),
    }
}

fn check_target(problem: &BvProblem, target: &Target) -> Result<()> {
    let x = target.position(problem);
    let bad = match *target {
        Target::Normal { h, .. } => h == 0.0,
        Target::Point(_) => problem.geometry.closest(x).2 == 0.0,
    };
    if bad || !x.iter().all(|v| v.is_finite()) {
        return Err(FlexError::Domain(format!("target {x:?} lies on the boundary")));
    }
    Ok(())
}

fn field_at(problem: &BvProblem, d: &Densities, target: &Target) -> Result<Complex64> {
    check_target(problem, target)?;
    let p = &problem.geometry;
    let ev = &problem.evaluator;
    let x = target.position(problem);
    let mut acc = Complex64::default();
    for panel in &p.panels {
        if is_near(problem, panel, x) {
            let r = panel.nodes.clone();
            let v = near_panel(problem, target, panel, 1, d.scale, |y, z, l, out| {
                let k = ev.representation_chord(z, y)?;
                let mut s = Complex64::default();
                for (q, j) in r.clone().enumerate() {
                    s += (k[0] * d.rho1[j] + k[1] * d.rho2[j] + k[2] * d.hrho[j]) * l[q];
                }
                out[0] = s;
                Ok(())
            })?;
            acc += v[0];
        } else {
            for j in panel.nodes.clone() {
                let y = &p.nodes[j];
                let k = ev.representation(x, &SurfacePoint::from(y))?;
                acc += (k[0] * d.rho1[j] + k[1] * d.rho2[j] + k[2] * d.hrho[j]) * y.weight;
            }
        }
    }
    Ok(acc)
}

/// `u = K₁[ρ₁] + K₂[ρ₂]` at each target, in parallel.
pub fn eval_field(problem: &BvProblem, sol: &DensitySolution, targets: &[Target]) -> Result<Vec<Complex64>> {
    let d = Densities::new(problem, sol)?;
    targets.par_iter().map(|t| field_at(problem, &d, t)).collect()
}

/// [`eval_field`] at plain points.
pub fn eval_field_points(problem: &BvProblem, sol: &DensitySolution, points: &[Vec2]) -> Result<Vec<Complex64>> {
    let targets: Vec<Target> = points.iter().map(|&x| Target::Point(x)).collect();
    eval_field(problem, sol, &targets)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarField {
    pub radius: f64,
    pub theta: Vec<f64>,
    #[serde(skip)]
    pub values: Vec<Complex64>,
    pub magnitude: Vec<f64>,
    /// `atan2(Im f, Re f)` in `(−π, π]`.
    pub phase: Vec<f64>,
}

impl FarField {
    /// Sample at the grid angle nearest to `theta`.
    pub fn at(&self, theta: f64) -> Complex64 {
        let n = self.theta.len();
        let j = ((theta.rem_euclid(TAU)) / TAU * n as f64).round() as usize % n;
        self.values[j]
    }
}

/// `f(θ) = √R e^{−ikR} u⁽ˢ⁾(R cos θ, R sin θ)` at `θ_j = 2πj/n`.
pub fn far_field(problem: &BvProblem, sol: &DensitySolution, n_theta: usize, radius: f64) -> Result<FarField> {
    if problem.side != Side::Exterior {
        return Err(FlexError::Domain("far field needs an exterior problem".into()));
    }
    if n_theta == 0 {
        return Err(FlexError::Domain("far field needs at least one angle".into()));
    }
    let extent = problem.geometry.nodes.iter().map(|n| n.position.norm()).fold(0.0, f64::max);
    if !(radius > 10.0 * extent) {
        return Err(FlexError::Domain(format!("far-field radius {radius} is not large against the scatterers ({extent})")));
    }
    let k = problem.evaluator.params().k;
    let theta: Vec<f64> = (0..n_theta).map(|j| TAU * j as f64 / n_theta as f64).collect();
    let points: Vec<Vec2> = theta.iter().map(|t| Vec2::new(radius * t.cos(), radius * t.sin())).collect();
    let u = eval_field_points(problem, sol, &points)?;
    let factor = Complex64::new(0.0, -k * radius).exp() * radius.sqrt();
    let values: Vec<Complex64> = u.iter().map(|v| v * factor).collect();
    Ok(FarField {
        radius,
        magnitude: values.iter().map(|v| v.norm()).collect(),
        phase: values.iter().map(|v| v.im.atan2(v.re)).collect(),
        theta,
        values,
    })
}

/// Both boundary-condition traces of the layer potential at
/// `γ(t) + h n(t)`, using the frame and curvature of `γ(t)`.
pub fn eval_traces(problem: &BvProblem, sol: &DensitySolution, component: usize, t: f64, h: f64) -> Result<[Complex64; 2]> {
    let d = Densities::new(problem, sol)?;
    traces_at(problem, &d, component, t, h)
}

fn traces_at(problem: &BvProblem, d: &Densities, component: usize, t: f64, h: f64) -> Result<[Complex64; 2]> {
    let target = Target::Normal { component, t, h };
    check_target(problem, &target)?;
    let p = &problem.geometry;
    let ev = &problem.evaluator;
    let f = p.components[component].curve.frenet_at(t);
    let mut x = SurfacePoint::from(&f);
    x.position = target.position(problem);
    let combine = |k: &[Complex64; ENTRIES], j: usize| -> [Complex64; 2] {
        [
            k[K11] * d.rho1[j] + k[K12] * d.rho2[j] + k[K11H] * d.hrho[j],
            k[K21] * d.rho1[j] + k[K22] * d.rho2[j] + k[K21H] * d.hrho[j],
        ]
    };
    let mut acc = [Complex64::default(); 2];
    for panel in &p.panels {
        if is_near(problem, panel, x.position) {
            let r = panel.nodes.clone();
            let v = near_panel(problem, &target, panel, 2, d.scale, |y, z, l, out| {
                let k = ev.trace_block_chord(&x, y, z)?;
                out[0] = Complex64::default();
                out[1] = Complex64::default();
                for (q, j) in r.clone().enumerate() {
                    let c = combine(&k, j);
                    out[0] += c[0] * l[q];
                    out[1] += c[1] * l[q];
                }
                Ok(())
            })?;
            acc[0] += v[0];
            acc[1] += v[1];
        } else {
            for j in panel.nodes.clone() {
                let y = &p.nodes[j];
                let k = ev.trace_block_chord(&x, &SurfacePoint::from(y), x.position - y.position)?;
                let c = combine(&k, j);
                acc[0] += c[0] * y.weight;
                acc[1] += c[1] * y.weight;
            }
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpProbe {
    pub node: usize,
    /// Signed offsets along the normal.
    pub h: Vec<f64>,
    #[serde(skip)]
    pub values: Vec<[Complex64; 2]>,
    #[serde(skip)]
    pub limit: [Complex64; 2],
    /// Difference between the last two extrapolants.
    pub error_estimate: f64,
}

/// Default offsets `2^{−j}·(panel length)`, `j = 3..=10`, signed by side.
pub fn default_offsets(problem: &BvProblem, node: usize, side: Side) -> Vec<f64> {
    let len = problem.geometry.panels[problem.geometry.nodes[node].panel].arc_length;
    (3..=10).map(|j| side.sign() * len * 0.5f64.powi(j)).collect()
}

/// Boundary limits of the traces at node `node` from the side given by
/// the sign of `h`, by three-point Richardson extrapolation in `h`.
pub fn jump_probe(problem: &BvProblem, sol: &DensitySolution, node: usize, h: &[f64]) -> Result<JumpProbe> {
    if h.len() < 4 {
        return Err(FlexError::Domain("jump probe needs at least four offsets".into()));
    }
    let sign = h[0].signum();
    if h.iter().any(|v| v.signum() != sign || *v == 0.0) || h.windows(2).any(|w| w[1].abs() >= w[0].abs()) {
        return Err(FlexError::Domain("offsets must share a sign and decrease in magnitude".into()));
    }
    let d = Densities::new(problem, sol)?;
    let n = &problem.geometry.nodes[node];
    let values: Vec<[Complex64; 2]> =
        h.par_iter().map(|&hh| traces_at(problem, &d, n.component, n.t, hh)).collect::<Result<_>>()?;
    let m = h.len();
    let extrapolate = |s: usize, c: usize| neville_at_zero(&h[s..s + 3], &[values[s][c], values[s + 1][c], values[s + 2][c]]);
    let limit = [extrapolate(m - 3, 0), extrapolate(m - 3, 1)];
    let prev = [extrapolate(m - 4, 0), extrapolate(m - 4, 1)];
    let error_estimate = (limit[0] - prev[0]).norm().max((limit[1] - prev[1]).norm());
    let scale = values.iter().flat_map(|v| v.iter()).map(|c| c.norm()).fold(0.0, f64::max);
    if !(error_estimate <= 1e-2 * scale.max(1.0)) {
        return Err(FlexError::Quadrature(format!(
            "jump probe at node {node} did not converge: extrapolants differ by {error_estimate:e}"
        )));
    }
    Ok(JumpProbe { node, h: h.to_vec(), values, limit, error_estimate })
}

/// Value at 0 of the polynomial through `(x_i, y_i)`.
fn neville_at_zero(x: &[f64], y: &[Complex64]) -> Complex64 {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..n - level {
            p[i] = (p[i + 1] * x[i] - p[i] * x[i + level]) / (x[i] - x[i + level]);
        }
    }
    p[0]
}
