use super::gauss::{legendre_values, GaussRule};
use crate::error::{FlexError, Result};

/// Product weights for `∫_{-1}^{1} q(u) ln|u - u0| du` from samples of `q`
/// at the rule's nodes, exact for polynomials of degree below the order.
pub fn log_weights(rule: &GaussRule, u0: f64) -> Result<Vec<f64>> {
    let n = rule.order();
    if n > 24 {
        return Err(FlexError::Quadrature(format!(
            "log product rule limited to order 24, got {n}"
        )));
    }
    let m = legendre_log_moments(n, u0);
    let mut p = vec![0.0; n];
    let mut w = vec![0.0; n];
    for j in 0..n {
        legendre_values(n, rule.nodes[j], &mut p);
        let s: f64 = (0..n).map(|k| 0.5 * (2 * k + 1) as f64 * p[k] * m[k]).sum();
        w[j] = rule.weights[j] * s;
    }
    Ok(w)
}

/// `∫_{-1}^{1} P_k(u) ln|u - u0| du` for `k < n`.
pub fn legendre_log_moments(n: usize, u0: f64) -> Vec<f64> {
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.abs().ln() };
    let mut m = vec![0.0; n];
    m[0] = xlogx(1.0 - u0) + xlogx(1.0 + u0) - 2.0;
    if n == 1 {
        return m;
    }
    let q = legendre_q(n, u0);
    for k in 1..n {
        m[k] = 2.0 * (q[k + 1] - q[k - 1]) / (2 * k + 1) as f64;
    }
    m
}

/// Legendre functions of the second kind `Q_0 .. Q_n` (Ferrers on the cut).
fn legendre_q(n: usize, x: f64) -> Vec<f64> {
    let mut q = vec![0.0; n + 1];
    if x.abs() < 1.0 {
        q[0] = 0.5 * ((1.0 + x) / (1.0 - x)).ln();
        if n >= 1 {
            q[1] = x * q[0] - 1.0;
        }
        for k in 1..n {
            q[k + 1] = ((2 * k + 1) as f64 * x * q[k] - k as f64 * q[k - 1]) / (k + 1) as f64;
        }
        return q;
    }
    let ax = x.abs();
    let rho = ax + (ax * ax - 1.0).sqrt();
    let extra = (40.0 / rho.ln()).ceil() as usize;
    let start = n + 10 + extra.min(200_000);
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut vals = vec![0.0; n + 1];
    for k in (1..=start).rev() {
        let prev = ((2 * k + 1) as f64 * ax * cur - (k + 1) as f64 * next) / k as f64;
        next = cur;
        cur = prev;
        if k - 1 <= n {
            vals[k - 1] = cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            vals.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    let q0 = 0.5 * ((ax + 1.0) / (ax - 1.0)).ln();
    let scale = q0 / vals[0];
    for k in 0..=n {
        q[k] = vals[k] * scale;
        if x < 0.0 && k % 2 == 0 {
            q[k] = -q[k];
        }
    }
    q
}
