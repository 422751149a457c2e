//! Cylinder functions of real positive argument.
//!
//! Bessel `J_n` uses Miller's backward recurrence normalised by the
//! sum rule, `Y_0`/`Y_1` use Neumann series over the same `J_n` values,
//! and large arguments switch to the Hankel asymptotic expansion.
//! Modified `K_n` uses the power series near the origin and a
//! trapezoidal rule on `∫ exp(-z cosh t) cosh(nt) dt` elsewhere.

use crate::error::{FlexError, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ASYMPTOTIC_FROM: f64 = 25.0;

/// Values of the four functions the flexural Green's function is built from.
#[derive(Debug, Clone, Copy)]
pub struct CylinderValues {
    pub h0: Complex64,
    pub h1: Complex64,
    pub k0: f64,
    pub k1: f64,
}

/// `H₀⁽¹⁾(z)`, `H₁⁽¹⁾(z)`, `K₀(z)` and `K₁(z)`.
pub fn special_functions(z: f64) -> Result<CylinderValues> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(FlexError::Domain(format!("cylinder functions need z > 0, got {z}")));
    }
    let h = hankel1_seq(z, 1);
    let k = bessel_k_seq(z, 1);
    Ok(CylinderValues { h0: h[0], h1: h[1], k0: k[0], k1: k[1] })
}

/// `J_0 .. J_nmax` at `z > 0`.
pub fn bessel_j_seq(z: f64, nmax: usize) -> Vec<f64> {
    if z >= ASYMPTOTIC_FROM {
        let h = hankel1_seq(z, nmax);
        return h.iter().map(|c| c.re).collect();
    }
    miller_j(z, nmax)
}

fn miller_start(z: f64, nmax: usize) -> usize {
    let base = (nmax as f64).max(z);
    let n = base + 20.0 + 6.0 * base.sqrt();
    2 * ((n as usize) / 2 + 1)
}

/// Backward recurrence, normalised with `J_0 + 2 Σ J_{2k} = 1`.
fn miller_j(z: f64, nmax: usize) -> Vec<f64> {
    let start = miller_start(z, nmax);
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    let mut next = 0.0;
    let mut cur = 1e-300;
    for n in (1..=start).rev() {
        let prev = 2.0 * n as f64 / z * cur - next;
        next = cur;
        cur = prev;
        vals[n - 1] = cur;
        if cur.abs() > 1e250 {
            for v in vals.iter_mut().skip(n - 1) {
                *v *= 1e-250;
            }
            next *= 1e-250;
            cur *= 1e-250;
        }
    }
    let mut norm = vals[0];
    let mut k = 2;
    while k <= start {
        norm += 2.0 * vals[k];
        k += 2;
    }
    vals.truncate(start + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

/// `Y_0` and `Y_1` from the Neumann series (valid for moderate `z`).
fn neumann_y01(z: f64, j: &[f64]) -> (f64, f64) {
    let lg = (0.5 * z).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = 2.0 / PI * (lg * j[0] - 2.0 * s0);
    let y1 = 2.0 / PI * (lg * j[1] - j[0] / z + s1);
    (y0, y1)
}

fn hankel_asymptotic(z: f64, nu: f64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        term *= Complex64::new(0.0, 1.0) * (mu - odd * odd) / (k as f64 * 8.0 * z);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    let phase = z - nu * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * z)).sqrt() * Complex64::from_polar(1.0, phase) * sum
}

/// `H_0⁽¹⁾ .. H_nmax⁽¹⁾` at `z > 0`.
pub fn hankel1_seq(z: f64, nmax: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(nmax + 1);
    if z >= ASYMPTOTIC_FROM {
        out.push(hankel_asymptotic(z, 0.0));
        out.push(hankel_asymptotic(z, 1.0));
        for n in 1..nmax {
            let next = 2.0 * n as f64 / z * out[n] - out[n - 1];
            out.push(next);
        }
        out.truncate(nmax + 1);
        return out;
    }
    let j = miller_j(z, nmax.max(2));
    let (y0, y1) = neumann_y01(z, &j);
    let mut y = vec![y0, y1];
    for n in 1..nmax {
        let next = 2.0 * n as f64 / z * y[n] - y[n - 1];
        y.push(next);
    }
    for n in 0..=nmax {
        out.push(Complex64::new(j[n], y[n]));
    }
    out
}

fn k_series01(z: f64) -> (f64, f64) {
    let t = 0.25 * z * z;
    let lg = (0.5 * z).ln() + EULER_GAMMA;
    // K0 = -(ln(z/2)+γ) I0 + Σ H_k t^k/(k!)^2
    // K1 = 1/z + ln(z/2) I1 - (z/4) Σ (ψ(k+1)+ψ(k+2)) t^k/(k!(k+1)!)
    let mut i0 = 0.0;
    let mut s0 = 0.0;
    let mut i1 = 0.0;
    let mut s1 = 0.0;
    let mut harm = 0.0;
    let mut c0 = 1.0; // t^k/(k!)^2
    let mut c1 = 1.0; // t^k/(k!(k+1)!)
    for k in 0..60 {
        if k > 0 {
            harm += 1.0 / k as f64;
            c0 *= t / (k as f64 * k as f64);
            c1 *= t / (k as f64 * (k + 1) as f64);
        }
        i0 += c0;
        s0 += harm * c0;
        i1 += c1;
        let psi_sum = 2.0 * harm + 1.0 / (k + 1) as f64 - 2.0 * EULER_GAMMA;
        s1 += psi_sum * c1;
        if c0 < 1e-18 * i0 && k > 2 {
            break;
        }
    }
    let k0 = -lg * i0 + s0;
    let i1 = 0.5 * z * i1;
    let k1 = 1.0 / z + (0.5 * z).ln() * i1 - 0.25 * z * s1;
    (k0, k1)
}

/// `exp(z)·K_n(z)` for `n = 0, 1` by the trapezoidal rule.
fn k_scaled_trapezoid(z: f64) -> (f64, f64) {
    let h = 0.125 / z.sqrt().max(1.0);
    let tmax = (1.0 + 45.0 / z).acosh();
    let n = (tmax / h).ceil() as usize;
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    for j in 1..=n {
        let t = j as f64 * h;
        let w = (-z * (t.cosh() - 1.0)).exp();
        s0 += w;
        s1 += w * t.cosh();
    }
    (h * s0, h * s1)
}

/// `K_0 .. K_nmax` at `z > 0` (underflows to zero for very large `z`).
pub fn bessel_k_seq(z: f64, nmax: usize) -> Vec<f64> {
    let (k0, k1) = if z <= 1.0 {
        k_series01(z)
    } else {
        let (a, b) = k_scaled_trapezoid(z);
        let e = (-z).exp();
        (a * e, b * e)
    };
    let mut out = vec![k0, k1];
    for n in 1..nmax {
        let next = out[n - 1] + 2.0 * n as f64 / z * out[n];
        out.push(next);
    }
    out.truncate(nmax + 1);
    out
}

/// `exp(z)·K_0(z)` and `exp(z)·K_1(z)`, finite for all large `z`.
pub fn bessel_k01_scaled(z: f64) -> (f64, f64) {
    if z <= 1.0 {
        let (a, b) = k_series01(z);
        let e = z.exp();
        (a * e, b * e)
    } else {
        k_scaled_trapezoid(z)
    }
}
