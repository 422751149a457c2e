use super::gauss::GaussRule;
use crate::error::{FlexError, Result};
use num_complex::Complex64;

pub const MAX_DEPTH: usize = 40;
const ROUNDOFF: f64 = 64.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AdaptiveReport {
    pub subdivisions: usize,
    pub max_depth: usize,
    pub error_estimate: f64,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Adaptive bisection of `∫_a^b f(u) du` for a vector-valued `f` of length `m`.
///
/// `f(u, out)` writes the integrand at `u`. An interval is accepted when
/// `force_split(a, b)` is false and its children agree with it to
/// `(rel_tol·scale + abs_tol)·len/(b − a)`, where `scale` is the largest
/// entry of the whole-interval estimate, or when the difference is at
/// rounding level of the local `∫|f|`.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_integrate<F, S>(
    rule: &GaussRule,
    mut f: F,
    a: f64,
    b: f64,
    m: usize,
    rel_tol: f64,
    abs_tol: f64,
    force_split: S,
) -> Result<(Vec<Complex64>, AdaptiveReport)>
where
    F: FnMut(f64, &mut [Complex64]),
    S: Fn(f64, f64) -> bool,
{
    let mut buf = vec![Complex64::default(); m];
    let mut mag = vec![0.0; m];
    // the rule applied on [lo, hi], and the largest entry of ∫|f|
    let mut estimate = |lo: f64, hi: f64, f: &mut F| {
        let mut acc = vec![Complex64::default(); m];
        mag.iter_mut().for_each(|v| *v = 0.0);
        for (u, w) in rule.mapped(lo, hi) {
            f(u, &mut buf);
            for ((a, g), v) in acc.iter_mut().zip(mag.iter_mut()).zip(&buf) {
                *a += v * w;
                *g += v.norm() * w;
            }
        }
        (acc, mag.iter().copied().fold(0.0, f64::max))
    };
    let mut total = vec![Complex64::default(); m];
    let mut report = AdaptiveReport::default();
    let (whole, _) = estimate(a, b, &mut f);
    let mut scale = max_norm(&whole);
    let mut stack = vec![(a, b, 0usize, whole)];
    while let Some((lo, hi, depth, est)) = stack.pop() {
        report.max_depth = report.max_depth.max(depth);
        let mid = 0.5 * (lo + hi);
        let split = force_split(lo, hi);
        let (left, mag_l) = estimate(lo, mid, &mut f);
        let (right, mag_r) = estimate(mid, hi, &mut f);
        let sum: Vec<Complex64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
        let diff: Vec<Complex64> = sum.iter().zip(&est).map(|(s, e)| s - e).collect();
        let err = max_norm(&diff);
        if !err.is_finite() {
            return Err(FlexError::Quadrature(format!("non-finite integrand on [{lo:e}, {hi:e}]")));
        }
        if depth == 0 {
            scale = scale.max(max_norm(&sum));
        }
        // interval share of the tolerance, floored so endpoint
        // singularities terminate
        let frac = ((hi - lo) / (b - a)).max(1.0 / 1024.0);
        // or nothing left to gain above rounding of the local contributions
        let roundoff = ROUNDOFF * f64::EPSILON * (mag_l + mag_r);
        if !split && (err <= (rel_tol * scale + abs_tol) * frac || err <= roundoff) {
            for (t, s) in total.iter_mut().zip(&sum) {
                *t += s;
            }
            report.error_estimate += err;
            continue;
        }
        if depth + 1 >= MAX_DEPTH {
            return Err(FlexError::Quadrature(format!(
                "adaptive quadrature exceeded depth {MAX_DEPTH} on [{lo:e}, {hi:e}] with error {err:e} (local magnitude {:e})", mag_l + mag_r
            )));
        }
        report.subdivisions += 1;
        stack.push((lo, mid, depth + 1, left));
        stack.push((mid, hi, depth + 1, right));
    }
    Ok((total, report))
}
