//! One function per scenario. Each writes its artifacts into `out` and
//! returns what it wrote.

use crate::config::{Incident, Method, RunConfig, Scenario};
use crate::error::CliError;
use flexbie::checks::{self, Check};
use flexbie::geometry::{Panelization, Vec2};
use flexbie::kernels::{lookup, MaterialParams, Side};
use flexbie::potential::{eval_field_points, far_field, plane_wave_data, point_source_data, FarField, PlaneWave};
use flexbie::system::{condition_2norm, solve_dense, solve_iterative, BvProblem, DensitySolution};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Files written and checks failed by one run.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub failed_checks: usize,
}

struct Writer<'a> {
    dir: &'a Path,
    prefix: String,
    outcome: Outcome,
}

impl Writer<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{}{name}", self.prefix))
    }

    fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> Result<(), CliError> {
        let p = self.path(name);
        let mut w = csv::Writer::from_path(&p)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        self.outcome.files.push(p);
        Ok(())
    }

    fn json(&mut self, name: &str, v: &Value) -> Result<(), CliError> {
        let p = self.path(name);
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        std::fs::write(&p, text)?;
        self.outcome.files.push(p);
        Ok(())
    }
}

#[derive(Default)]
struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let r = f();
        *self.0.entry(stage.to_string()).or_default() += t.elapsed().as_secs_f64();
        r
    }
}

/// Runs `scenario` with `config`, writing into `out`.
pub fn run(scenario: Scenario, config: &RunConfig, out: &Path) -> Result<Outcome, CliError> {
    if let Some(s) = config.scenario {
        if s != scenario {
            return Err(CliError::Config(format!("config is for scenario {}, not {}", s.name(), scenario.name())));
        }
    }
    std::fs::create_dir_all(out).map_err(|e| CliError::Output(format!("{}: {e}", out.display())))?;
    let mut w = Writer { dir: out, prefix: config.output.prefix.clone(), outcome: Outcome::default() };
    match scenario {
        Scenario::AnalyticTest => analytic_test(config, &mut w)?,
        Scenario::Scatter => scatter(config, &mut w)?,
        Scenario::FarField => far_field_run(config, &mut w, "far-field")?,
        Scenario::KernelCheck => kernel_check(config, &mut w)?,
        Scenario::JumpCheck => jump_check(config, &mut w)?,
        Scenario::MultiScatter => far_field_run(config, &mut w, "multi-scatter")?,
    }
    Ok(w.outcome)
}

fn problem(config: &RunConfig, bc: &str, n_panels: usize) -> Result<BvProblem, CliError> {
    let curves = config.curves()?;
    let p = Panelization::new(&curves, n_panels, config.discretization.order).map_err(|e| CliError::at("geometry", e))?;
    let mp = MaterialParams::new(config.k, config.nu)?;
    BvProblem::new(p, lookup(bc)?, mp, config.side).map_err(|e| CliError::at("setup", e))
}

fn single_bc(config: &RunConfig) -> Result<String, CliError> {
    config.bc.clone().ok_or_else(|| CliError::Config("bc is required for this scenario".into()))
}

fn plane_wave(config: &RunConfig) -> Result<PlaneWave, CliError> {
    match config.incident {
        Some(Incident::PlaneWave { angle }) => Ok(PlaneWave::from_angle(config.k, angle)),
        None => Err(CliError::Config("incident is required for this scenario".into())),
    }
}

fn method(config: &RunConfig, fallback: Method) -> Method {
    config.solver.method.unwrap_or(fallback)
}

/// Assembles and solves, timing both stages.
fn solve(
    config: &RunConfig,
    prob: &BvProblem,
    rhs: &[Complex64],
    m: Method,
    timer: &mut Timer,
) -> Result<(DensitySolution, Option<f64>), CliError> {
    let a = timer.time("assemble", || prob.assemble()).map_err(|e| CliError::at("assemble", e))?;
    let sol = timer
        .time("solve", || match m {
            Method::Dense => solve_dense(&a, rhs),
            Method::Gmres => solve_iterative(&a, rhs, config.solver.gmres()),
        })
        .map_err(|e| CliError::at("solve", e))?;
    let cond2 = config.solver.condition_2norm.then(|| timer.time("condition_2norm", || condition_2norm(&a)));
    Ok((sol, cond2))
}

#[derive(Serialize)]
struct AnalyticRow {
    bc: String,
    n_panels: usize,
    nodes: usize,
    error: Option<f64>,
    l1_norm: Option<f64>,
    condition_1norm: Option<f64>,
    residual: Option<f64>,
    status: String,
}

fn analytic_level(
    config: &RunConfig,
    bc: &str,
    np: usize,
    source: Vec2,
    points: &[Vec2],
    timer: &mut Timer,
) -> Result<AnalyticRow, CliError> {
    let prob = problem(config, bc, np)?;
    let data = point_source_data(&prob, source).map_err(|e| CliError::at("boundary data", e))?;
    let mut row = AnalyticRow {
        bc: bc.to_string(),
        n_panels: np,
        nodes: prob.nodes(),
        error: None,
        l1_norm: None,
        condition_1norm: None,
        residual: None,
        status: "ok".into(),
    };
    let sol = match solve(config, &prob, &data.interleaved(), method(config, Method::Dense), timer) {
        Ok((sol, _)) => sol,
        Err(CliError::Solver(m)) => {
            row.status = m;
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    let u = timer.time("evaluate", || eval_field_points(&prob, &sol, points)).map_err(|e| CliError::at("evaluate", e))?;
    let mut worst: f64 = 0.0;
    for (x, v) in points.iter().zip(&u) {
        let exact = prob.evaluator.green_derivative(*x, source, &[]).map_err(|e| CliError::at("evaluate", e))?;
        worst = worst.max((v - exact).norm());
    }
    let l1 = sol.l1_norm(&prob.geometry);
    row.error = Some(worst / l1);
    row.l1_norm = Some(l1);
    row.condition_1norm = sol.report.condition_1norm;
    row.residual = Some(sol.report.residual);
    Ok(row)
}

/// Convergence table. A solver failure on a coarse level is recorded in
/// its row; on the finest level it fails the run after the table is written.
fn analytic_test(config: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let source = config.analytic.source.ok_or_else(|| CliError::Config("analytic.source is required".into()))?;
    let source = Vec2::new(source[0], source[1]);
    let points = config.measurement_points()?;
    let finest = config.analytic.sweep.iter().copied().max().unwrap_or(0);
    let mut timer = Timer::default();
    let mut rows = Vec::new();
    for bc in config.bcs() {
        for &np in &config.analytic.sweep {
            let row = analytic_level(config, &bc, np, source, &points, &mut timer)?;
            if row.error.is_none() {
                w.outcome.warnings.push(format!("{bc}, {np} panels: {}", row.status));
            }
            rows.push(row);
        }
    }
    w.csv("analytic_test.csv", &rows)?;
    w.json(
        "analytic_test.json",
        &json!({
            "scenario": "analytic-test",
            "config": config,
            "metric": "max absolute error over the measurement points divided by the L1 norms of both densities (panel-weight quadrature)",
            "points": points.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
            "rows": rows,
            "warnings": w.outcome.warnings,
            "timings": timer.0,
        }),
    )?;
    match rows.iter().find(|r| r.n_panels == finest && r.error.is_none()) {
        Some(r) => Err(CliError::Solver(format!("{}, {} panels: {}", r.bc, r.n_panels, r.status))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct GridRow {
    x: f64,
    y: f64,
    #[serde(rename = "Re u")]
    re: f64,
    #[serde(rename = "Im u")]
    im: f64,
    #[serde(rename = "|u|")]
    abs: f64,
    /// 1 inside a scatterer or on its boundary (not evaluated).
    mask: u8,
}

fn linspace(r: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (r[0] + r[1])];
    }
    (0..n).map(|i| r[0] + (r[1] - r[0]) * i as f64 / (n - 1) as f64).collect()
}

fn scatter(config: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    if config.side != Side::Exterior {
        return Err(CliError::Config("scatter needs an exterior problem".into()));
    }
    let grid = config.grid.ok_or_else(|| CliError::Config("grid is required for scatter".into()))?;
    let bc = single_bc(config)?;
    let wave = plane_wave(config)?;
    let mut timer = Timer::default();
    let prob = problem(config, &bc, config.discretization.n_panels)?;
    let data = plane_wave_data(&prob, &wave).map_err(|e| CliError::at("boundary data", e))?;
    let (sol, cond2) = solve(config, &prob, &data.interleaved(), method(config, Method::Dense), &mut timer)?;
    let (xs, ys) = (linspace(grid.x, grid.nx), linspace(grid.y, grid.ny));
    let all: Vec<Vec2> = ys.iter().flat_map(|&y| xs.iter().map(move |&x| Vec2::new(x, y))).collect();
    let outside: Vec<bool> = all.iter().map(|&x| prob.geometry.is_exterior(x) && prob.geometry.closest(x).2 > 0.0).collect();
    let pts: Vec<Vec2> = all.iter().zip(&outside).filter(|(_, o)| **o).map(|(x, _)| *x).collect();
    if pts.is_empty() {
        w.outcome.warnings.push("every grid point lies inside a scatterer; the field grid is empty".into());
    }
    let us = timer.time("evaluate", || eval_field_points(&prob, &sol, &pts)).map_err(|e| CliError::at("evaluate", e))?;
    let mut us = us.into_iter();
    let rows: Vec<GridRow> = all
        .iter()
        .zip(&outside)
        .map(|(x, &o)| {
            if o {
                let u = wave.value(*x) + us.next().unwrap_or_default();
                GridRow { x: x.x, y: x.y, re: u.re, im: u.im, abs: u.norm(), mask: 0 }
            } else {
                GridRow { x: x.x, y: x.y, re: 0.0, im: 0.0, abs: 0.0, mask: 1 }
            }
        })
        .collect();
    w.csv("field.csv", &rows)?;
    w.json(
        "field.json",
        &json!({
            "scenario": "scatter",
            "config": config,
            "nodes": prob.nodes(),
            "unknowns": prob.unknowns(),
            "solve": sol.report,
            "condition_2norm": cond2,
            "evaluated_points": pts.len(),
            "masked_points": all.len() - pts.len(),
            "warnings": w.outcome.warnings,
            "timings": timer.0,
        }),
    )
}

#[derive(Serialize)]
struct FarRow {
    theta: f64,
    #[serde(rename = "Re f")]
    re: f64,
    #[serde(rename = "Im f")]
    im: f64,
    #[serde(rename = "|f|")]
    abs: f64,
    phase: f64,
}

fn far_rows(ff: &FarField) -> Vec<FarRow> {
    ff.theta
        .iter()
        .zip(&ff.values)
        .zip(&ff.phase)
        .map(|((&theta, v), &phase)| FarRow { theta, re: v.re, im: v.im, abs: v.norm(), phase })
        .collect()
}

/// Plane-wave scattering reported through the far field; the multi-scatter
/// variant defaults to GMRES and records the block structure of H.
fn far_field_run(config: &RunConfig, w: &mut Writer, name: &str) -> Result<(), CliError> {
    if config.side != Side::Exterior {
        return Err(CliError::Config(format!("{name} needs an exterior problem")));
    }
    let multi = name == "multi-scatter";
    let bc = single_bc(config)?;
    let wave = plane_wave(config)?;
    let mut timer = Timer::default();
    let prob = problem(config, &bc, config.discretization.n_panels)?;
    let data = plane_wave_data(&prob, &wave).map_err(|e| CliError::at("boundary data", e))?;
    let m = method(config, if multi { Method::Gmres } else { Method::Dense });
    let (sol, cond2) = solve(config, &prob, &data.interleaved(), m, &mut timer)?;
    let ff = config.far_field;
    let f = timer.time("far_field", || far_field(&prob, &sol, ff.n_theta, ff.radius)).map_err(|e| CliError::at("far field", e))?;
    let stability = match ff.compare_radius {
        Some(r) => {
            let g = timer.time("far_field", || far_field(&prob, &sol, ff.n_theta, r)).map_err(|e| CliError::at("far field", e))?;
            let peak = f.magnitude.iter().cloned().fold(0.0, f64::max);
            let d = f.magnitude.iter().zip(&g.magnitude).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Some(json!({"radius": r, "max_magnitude_difference_relative": d / peak.max(f64::MIN_POSITIVE)}))
        }
        None => None,
    };
    let mut meta = json!({
        "scenario": name,
        "config": config,
        "components": prob.geometry.components.len(),
        "nodes": prob.nodes(),
        "unknowns": prob.unknowns(),
        "solve": sol.report,
        "condition_2norm": cond2,
        "radius": ff.radius,
        "radius_stability": stability,
        "phase_convention": "atan2(Im f, Re f) in (-pi, pi]",
    });
    if multi {
        meta["hilbert_off_block_max"] = json!(prob.hilbert().map(hilbert_off_block_max));
    }
    meta["timings"] = json!(timer.0);
    w.csv("far_field.csv", &far_rows(&f))?;
    w.json(&format!("{}.json", name.replace('-', "_")), &meta)
}

/// Largest entry of H coupling different components; zero when H is
/// block diagonal.
pub fn hilbert_off_block_max(h: &flexbie::surfaceops::SurfaceOperator) -> f64 {
    let block_of = |i: usize| h.blocks.iter().position(|b| b.contains(&i));
    let mut worst: f64 = 0.0;
    for i in 0..h.len() {
        for j in 0..h.len() {
            if block_of(i) != block_of(j) {
                worst = worst.max(h.matrix[(i, j)].abs());
            }
        }
    }
    worst
}

fn write_checks(w: &mut Writer, name: &str, config: &RunConfig, list: Vec<Check>, timer: Timer) -> Result<(), CliError> {
    let failed = list.iter().filter(|c| !c.passed).count();
    w.outcome.failed_checks = failed;
    w.json(
        "checks.json",
        &json!({
            "scenario": name,
            "config": config,
            "passed": failed == 0,
            "failed": failed,
            "checks": list,
            "timings": timer.0,
        }),
    )
}

fn kernel_check(config: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let mut timer = Timer::default();
    let mut list = Vec::new();
    let c = &config.checks;
    for &r in &c.radii {
        for &nu in &c.nus {
            list.extend(timer.time("kernel_limits", || checks::kernel_limits(r, nu, c.limit_tol))?);
            list.extend(timer.time("cancellation", || checks::cancellation_control(r, nu))?);
        }
    }
    let p = Panelization::new(&config.curves()?, config.discretization.n_panels, config.discretization.order)
        .map_err(|e| CliError::at("geometry", e))?;
    list.push(timer.time("hilbert", || checks::hilbert_identity(&p, c.hilbert_samples, c.seed, c.hilbert_tol))?);
    write_checks(w, "kernel-check", config, list, timer)
}

fn jump_check(config: &RunConfig, w: &mut Writer) -> Result<(), CliError> {
    let mut timer = Timer::default();
    let mut list = Vec::new();
    let c = &config.checks;
    for bc in config.bcs() {
        let prob = problem(config, &bc, config.discretization.n_panels)?;
        let n = prob.nodes();
        let nodes = c.nodes.clone().unwrap_or_else(|| (0..8).map(|m| (2 * m + 1) * n / 16).collect());
        list.extend(timer.time("jumps", || checks::jump_relations(&prob, &nodes, c.jump_tol)).map_err(|e| CliError::at("jumps", e))?);
        // any density gives a solution of the plate equation off the boundary
        let side = config.side;
        let points: Vec<Vec2> = nodes
            .iter()
            .map(|&i| {
                let x = &prob.geometry.nodes[i];
                x.position + x.normal * (side.sign() * c.pde_offset)
            })
            .filter(|&x| prob.geometry.is_exterior(x) == (side == Side::Exterior) && prob.geometry.node_distance(x) > 0.5 * c.pde_offset)
            .collect();
        if points.is_empty() {
            w.outcome.warnings.push(format!("{bc}: no PDE-residual points at offset {}", c.pde_offset));
            continue;
        }
        let sol = checks::smooth_density(&prob.geometry);
        let h = 0.1 / config.k;
        let mut chk = timer.time("pde", || checks::pde_residual(&prob, &sol, &points, h, c.pde_tol)).map_err(|e| CliError::at("pde", e))?;
        chk.name = format!("{bc} {:?} {}", prob.side, chk.name);
        list.push(chk);
    }
    write_checks(w, "jump-check", config, list, timer)
}
