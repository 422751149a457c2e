//! Run configuration: one JSON document per run.

use crate::error::CliError;
use flexbie::geometry::{Circle, Droplet, ParametricCurve, Starfish, Transform, Vec2};
use flexbie::kernels::Side;
use flexbie::system::GmresOptions;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    AnalyticTest,
    Scatter,
    FarField,
    KernelCheck,
    JumpCheck,
    MultiScatter,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::AnalyticTest => "analytic-test",
            Scenario::Scatter => "scatter",
            Scenario::FarField => "far-field",
            Scenario::KernelCheck => "kernel-check",
            Scenario::JumpCheck => "jump-check",
            Scenario::MultiScatter => "multi-scatter",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; must match the scenario named on the command line.
    #[serde(default)]
    pub scenario: Option<Scenario>,
    pub geometry: Vec<CurveSpec>,
    /// `clamped`, `supported` or `free`. The analytic test and jump check
    /// run all three when absent.
    #[serde(default)]
    pub bc: Option<String>,
    pub k: f64,
    pub nu: f64,
    #[serde(default = "exterior")]
    pub side: Side,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default)]
    pub incident: Option<Incident>,
    #[serde(default)]
    pub analytic: AnalyticSpec,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub far_field: FarFieldSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub checks: CheckSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

fn exterior() -> Side {
    Side::Exterior
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSpec {
    #[serde(default)]
    pub rotate: f64,
    #[serde(default)]
    pub translate: [f64; 2],
    #[serde(default = "one")]
    pub scale: f64,
}

impl Default for TransformSpec {
    fn default() -> Self {
        TransformSpec { rotate: 0.0, translate: [0.0, 0.0], scale: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleParams {
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarfishParams {
    pub amplitude: f64,
    pub arms: u32,
}

/// A rectangular array of identical starfish, filled row by row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayParams {
    pub count: usize,
    pub columns: usize,
    pub spacing: [f64; 2],
    pub amplitude: f64,
    pub arms: u32,
    #[serde(default = "one")]
    pub scale: f64,
    /// Rotation of the m-th star is `m * rotation_step`.
    #[serde(default)]
    pub rotation_step: f64,
    #[serde(default)]
    pub origin: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        params: CircleParams,
        #[serde(default)]
        transform: TransformSpec,
    },
    Droplet {
        #[serde(default)]
        params: NoParams,
        #[serde(default)]
        transform: TransformSpec,
    },
    Starfish {
        params: StarfishParams,
        #[serde(default)]
        transform: TransformSpec,
    },
    StarfishArray {
        params: ArrayParams,
    },
}

impl CurveSpec {
    /// Expands into curves; arrays give one curve per star.
    pub fn curves(&self) -> Result<Vec<ParametricCurve>, CliError> {
        let tr = |t: &TransformSpec| Transform { rotate: t.rotate, scale: t.scale, translate: Vec2::new(t.translate[0], t.translate[1]) };
        let c = match self {
            CurveSpec::Circle { params, transform } => {
                vec![ParametricCurve::new(Arc::new(Circle { radius: params.radius }), tr(transform))?]
            }
            CurveSpec::Droplet { transform, .. } => vec![ParametricCurve::new(Arc::new(Droplet), tr(transform))?],
            CurveSpec::Starfish { params, transform } => {
                vec![ParametricCurve::new(Arc::new(Starfish { amplitude: params.amplitude, arms: params.arms }), tr(transform))?]
            }
            CurveSpec::StarfishArray { params: a } => {
                if a.count == 0 || a.columns == 0 {
                    return Err(CliError::Config("starfish_array needs count and columns >= 1".into()));
                }
                (0..a.count)
                    .map(|m| {
                        let centre = Vec2::new(
                            a.origin[0] + a.spacing[0] * (m % a.columns) as f64,
                            a.origin[1] + a.spacing[1] * (m / a.columns) as f64,
                        );
                        ParametricCurve::starfish(a.amplitude, a.arms, a.rotation_step * m as f64, centre, a.scale)
                    })
                    .collect::<flexbie::Result<Vec<_>>>()?
            }
        };
        Ok(c)
    }

    /// Centre used to place the default measurement points.
    fn centre(&self) -> [f64; 2] {
        match self {
            CurveSpec::Circle { transform, .. } | CurveSpec::Droplet { transform, .. } | CurveSpec::Starfish { transform, .. } => {
                transform.translate
            }
            CurveSpec::StarfishArray { params } => params.origin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    #[serde(default = "default_panels")]
    pub n_panels: usize,
    #[serde(default = "default_order")]
    pub order: usize,
}

fn default_panels() -> usize {
    16
}

fn default_order() -> usize {
    16
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization { n_panels: default_panels(), order: default_order() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Incident {
    /// `e^{ik(cos θ, sin θ)·x}`.
    PlaneWave { angle: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticSpec {
    /// Point source, inside a component for exterior problems.
    #[serde(default)]
    pub source: Option<[f64; 2]>,
    #[serde(default = "default_sweep")]
    pub sweep: Vec<usize>,
    /// Measurement points; default is the first curve rescaled about its
    /// centre (by 3/2 outside, 1/2 inside) at `t = nπ/6`.
    #[serde(default)]
    pub points: Option<Vec<[f64; 2]>>,
}

fn default_sweep() -> Vec<usize> {
    vec![2, 4, 8, 16]
}

impl Default for AnalyticSpec {
    fn default() -> Self {
        AnalyticSpec { source: None, sweep: default_sweep(), points: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FarFieldSpec {
    #[serde(default = "default_n_theta")]
    pub n_theta: usize,
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Second radius for the stability report.
    #[serde(default)]
    pub compare_radius: Option<f64>,
}

fn default_n_theta() -> usize {
    360
}

fn default_radius() -> f64 {
    1000.0
}

impl Default for FarFieldSpec {
    fn default() -> Self {
        FarFieldSpec { n_theta: default_n_theta(), radius: default_radius(), compare_radius: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Gmres,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    /// Dense LU by default; GMRES for multi-scatter.
    #[serde(default)]
    pub method: Option<Method>,
    #[serde(default = "default_gmres_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_restart")]
    pub restart: usize,
    /// Also report the 2-norm condition number (SVD, cubic cost).
    #[serde(default)]
    pub condition_2norm: bool,
}

fn default_gmres_tol() -> f64 {
    GmresOptions::default().tol
}

fn default_max_iter() -> usize {
    GmresOptions::default().max_iter
}

fn default_restart() -> usize {
    GmresOptions::default().restart
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            method: None,
            tol: default_gmres_tol(),
            max_iter: default_max_iter(),
            restart: default_restart(),
            condition_2norm: false,
        }
    }
}

impl SolverSpec {
    pub fn gmres(&self) -> GmresOptions {
        GmresOptions { tol: self.tol, max_iter: self.max_iter, restart: self.restart }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_nus")]
    pub nus: Vec<f64>,
    #[serde(default = "default_limit_tol")]
    pub limit_tol: f64,
    #[serde(default = "default_hilbert_samples")]
    pub hilbert_samples: usize,
    #[serde(default = "default_hilbert_tol")]
    pub hilbert_tol: f64,
    #[serde(default)]
    pub seed: u64,
    /// Nodes probed by the jump check; default is eight evenly spaced.
    #[serde(default)]
    pub nodes: Option<Vec<usize>>,
    #[serde(default = "default_jump_tol")]
    pub jump_tol: f64,
    /// Distance from the boundary of the PDE-residual points.
    #[serde(default = "default_pde_offset")]
    pub pde_offset: f64,
    #[serde(default = "default_pde_tol")]
    pub pde_tol: f64,
}

fn default_radii() -> Vec<f64> {
    vec![1.0, 2.0]
}

fn default_nus() -> Vec<f64> {
    vec![1.0 / 3.0, 0.0]
}

fn default_limit_tol() -> f64 {
    1e-6
}

fn default_hilbert_samples() -> usize {
    5
}

fn default_hilbert_tol() -> f64 {
    1e-8
}

fn default_jump_tol() -> f64 {
    1e-4
}

fn default_pde_offset() -> f64 {
    0.3
}

fn default_pde_tol() -> f64 {
    1e-5
}

impl Default for CheckSpec {
    fn default() -> Self {
        CheckSpec {
            radii: default_radii(),
            nus: default_nus(),
            limit_tol: default_limit_tol(),
            hilbert_samples: default_hilbert_samples(),
            hilbert_tol: default_hilbert_tol(),
            seed: 0,
            nodes: None,
            jump_tol: default_jump_tol(),
            pde_offset: default_pde_offset(),
            pde_tol: default_pde_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Used when `--out` is not given; default is the current directory.
    #[serde(default)]
    pub dir: Option<String>,
    /// Prepended to every file name.
    #[serde(default)]
    pub prefix: String,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn curves(&self) -> Result<Vec<ParametricCurve>, CliError> {
        let mut out = Vec::new();
        for spec in &self.geometry {
            out.extend(spec.curves()?);
        }
        Ok(out.into_iter().enumerate().map(|(i, c)| c.with_component(i)).collect())
    }

    /// Boundary conditions to run: the configured one or all three.
    pub fn bcs(&self) -> Vec<String> {
        match &self.bc {
            Some(b) => vec![b.clone()],
            None => flexbie::checks::BC_NAMES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn measurement_points(&self) -> Result<Vec<Vec2>, CliError> {
        if let Some(p) = &self.analytic.points {
            return Ok(p.iter().map(|q| Vec2::new(q[0], q[1])).collect());
        }
        let first = self.geometry.first().ok_or_else(|| CliError::Config("geometry is empty".into()))?;
        let curve = first.curves()?.remove(0);
        let c = first.centre();
        let c = Vec2::new(c[0], c[1]);
        let s = match self.side {
            Side::Exterior => 1.5,
            Side::Interior => 0.5,
        };
        Ok((0..12).map(|n| c + (curve.position(n as f64 * std::f64::consts::PI / 6.0) - c) * s).collect())
    }

    fn validate(&self) -> Result<(), CliError> {
        let mut nums = vec![("k", self.k), ("nu", self.nu), ("far_field.radius", self.far_field.radius)];
        nums.extend([("solver.tol", self.solver.tol), ("checks.limit_tol", self.checks.limit_tol)]);
        nums.extend([("checks.hilbert_tol", self.checks.hilbert_tol), ("checks.jump_tol", self.checks.jump_tol)]);
        nums.extend([("checks.pde_offset", self.checks.pde_offset), ("checks.pde_tol", self.checks.pde_tol)]);
        if let Some(r) = self.far_field.compare_radius {
            nums.push(("far_field.compare_radius", r));
        }
        if let Some(Incident::PlaneWave { angle }) = self.incident {
            nums.push(("incident.angle", angle));
        }
        if let Some(s) = self.analytic.source {
            nums.extend([("analytic.source", s[0]), ("analytic.source", s[1])]);
        }
        for p in self.analytic.points.iter().flatten() {
            nums.extend([("analytic.points", p[0]), ("analytic.points", p[1])]);
        }
        if let Some(g) = &self.grid {
            nums.extend([("grid.x", g.x[0]), ("grid.x", g.x[1]), ("grid.y", g.y[0]), ("grid.y", g.y[1])]);
        }
        nums.extend(self.checks.radii.iter().map(|&r| ("checks.radii", r)));
        nums.extend(self.checks.nus.iter().map(|&r| ("checks.nus", r)));
        for g in &self.geometry {
            match g {
                CurveSpec::Circle { params, transform } => {
                    nums.push(("circle radius", params.radius));
                    push_transform(&mut nums, transform);
                }
                CurveSpec::Droplet { transform, .. } => push_transform(&mut nums, transform),
                CurveSpec::Starfish { params, transform } => {
                    nums.push(("starfish amplitude", params.amplitude));
                    push_transform(&mut nums, transform);
                }
                CurveSpec::StarfishArray { params: a } => {
                    nums.extend([("array spacing", a.spacing[0]), ("array spacing", a.spacing[1])]);
                    nums.extend([("array amplitude", a.amplitude), ("array scale", a.scale), ("array rotation_step", a.rotation_step)]);
                    nums.extend([("array origin", a.origin[0]), ("array origin", a.origin[1])]);
                }
            }
        }
        if let Some((name, _)) = nums.iter().find(|(_, v)| !v.is_finite()) {
            return Err(CliError::Config(format!("{name} must be finite")));
        }
        if self.geometry.is_empty() {
            return Err(CliError::Config("geometry must list at least one curve".into()));
        }
        if self.k <= 0.0 {
            return Err(CliError::Config(format!("k must be positive, got {}", self.k)));
        }
        if let Some(b) = &self.bc {
            flexbie::kernels::lookup(b)?;
        }
        if self.discretization.n_panels == 0 || self.analytic.sweep.contains(&0) {
            return Err(CliError::Config("panel counts must be at least 1".into()));
        }
        if let Some(g) = &self.grid {
            if g.nx == 0 || g.ny == 0 {
                return Err(CliError::Config("grid needs nx, ny >= 1".into()));
            }
        }
        if self.far_field.n_theta == 0 {
            return Err(CliError::Config("far_field.n_theta must be at least 1".into()));
        }
        Ok(())
    }
}

fn push_transform(nums: &mut Vec<(&'static str, f64)>, t: &TransformSpec) {
    nums.extend([("transform.rotate", t.rotate), ("transform.scale", t.scale)]);
    nums.extend([("transform.translate", t.translate[0]), ("transform.translate", t.translate[1])]);
}
