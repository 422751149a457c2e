//! Derivatives `F⁽ʲ⁾ = dʲF/dρʲ`, `j ≤ 5`, of radial functions written in
//! `ρ = |x − y|²/2`.

use crate::error::{FlexError, Result};
use crate::special::{bessel_k_seq, hankel1_seq, EULER_GAMMA};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

pub const ORDERS: usize = 6;

/// `k·r` below which `G` is evaluated as `(G − G^B) + G^B`.
pub const SERIES_THRESHOLD: f64 = 1.0;

/// Radial derivatives split as `smooth + log·ln|r|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split<T> {
    pub smooth: [T; ORDERS],
    pub log: [T; ORDERS],
}

impl<T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>> Split<T> {
    pub fn collapse(&self, ln_r2: f64) -> [T; ORDERS] {
        let mut out = [T::default(); ORDERS];
        for j in 0..ORDERS {
            out[j] = self.smooth[j] + self.log[j] * ln_r2;
        }
        out
    }
}

/// Biharmonic `G^B = |r|² ln|r|² / (16π)`.
pub fn biharmonic(r2: f64) -> Split<f64> {
    let q = 1.0 / r2;
    Split {
        smooth: [
            0.0,
            1.0 / (8.0 * PI),
            q / (4.0 * PI),
            -q * q / (2.0 * PI),
            2.0 * q * q * q / PI,
            -12.0 * q * q * q * q / PI,
        ],
        log: [r2 / (16.0 * PI), 1.0 / (8.0 * PI), 0.0, 0.0, 0.0, 0.0],
    }
}

/// Flexural `G` from Hankel and Macdonald functions.
pub fn direct(r: f64, k: f64) -> Result<[Complex64; ORDERS]> {
    let z = k * r;
    if !(z > 0.0) || !z.is_finite() {
        return Err(FlexError::Domain(format!("direct Green's function needs k·r > 0, got {z}")));
    }
    let h = hankel1_seq(z, ORDERS - 1);
    let kk = bessel_k_seq(z, ORDERS - 1);
    let pre = 0.5 / (k * k);
    let step = -k / r;
    let mut scale = pre;
    let mut out = [Complex64::default(); ORDERS];
    for m in 0..ORDERS {
        let v = Complex64::new(0.0, 0.25) * h[m] - kk[m] / (2.0 * PI);
        out[m] = v * scale;
        scale *= step;
    }
    Ok(out)
}

/// Coefficients of `G − G^B = Σ_m (A_m ρ^m + B_m ρ^m ln ρ)`.
#[derive(Debug, Clone)]
pub struct RemainderSeries {
    a: Vec<Complex64>,
    b: Vec<f64>,
}

const SERIES_TERMS: usize = 22;

impl RemainderSeries {
    pub fn new(k: f64) -> Self {
        let k2 = k * k;
        let c_l = k.ln() - 0.5 * LN_2 + EULER_GAMMA;
        let mut a = vec![Complex64::default(); SERIES_TERMS];
        let mut b = vec![0.0; SERIES_TERMS];
        // (i/8k²) J0(kr) = (i/8k²) Σ (−k²ρ/2)^m/(m!)²
        let mut c = 1.0;
        let mut harm = 0.0;
        for m in 0..SERIES_TERMS {
            if m > 0 {
                c *= 0.5 * k2 / (m as f64 * m as f64);
                harm += 1.0 / m as f64;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            a[m] += Complex64::new(0.0, sign * c / (8.0 * k2));
            if m >= 3 && m % 2 == 1 {
                a[m] += c * (c_l - harm) / (2.0 * PI * k2);
                b[m] = 0.5 * c / (2.0 * PI * k2);
            }
        }
        a[1] += ((0.5 * k).ln() + EULER_GAMMA - 1.0) / (4.0 * PI);
        RemainderSeries { a, b }
    }

    /// Derivatives at `ρ`, split as `smooth + log·ln|r|²` (`ln ρ = ln|r|² − ln 2`).
    pub fn eval(&self, rho: f64) -> Split<Complex64> {
        let mut smooth = [Complex64::default(); ORDERS];
        let mut log = [Complex64::default(); ORDERS];
        let tiny = rho == 0.0;
        for m in 0..SERIES_TERMS {
            let (am, bm) = (self.a[m], self.b[m]);
            let mut done = true;
            for j in 0..ORDERS {
                let (fall, dfall) = falling(m, j);
                // rho^(m-j), possibly negative power
                let p = m as i32 - j as i32;
                if tiny && p < 0 {
                    continue;
                }
                let pw = if tiny { if p == 0 { 1.0 } else { 0.0 } } else { rho.powi(p) };
                let lc = bm * fall * pw;
                let sc = am * fall * pw + Complex64::from(bm * dfall * pw - LN_2 * lc);
                smooth[j] += sc;
                log[j] += Complex64::from(lc);
                if m > j + 2 && (sc.norm() > 1e-17 * smooth[j].norm() || lc.abs() > 1e-17 * log[j].norm()) {
                    done = false;
                }
            }
            if m > 8 && done {
                break;
            }
        }
        Split { smooth, log }
    }
}

/// `e(e−1)…(e−j+1)` and its derivative in `e`, at integer `e = m`.
fn falling(m: usize, j: usize) -> (f64, f64) {
    let mut prod = 1.0;
    for i in 0..j {
        prod *= m as f64 - i as f64;
    }
    let mut d = 0.0;
    for i in 0..j {
        let mut p = 1.0;
        for l in 0..j {
            if l != i {
                p *= m as f64 - l as f64;
            }
        }
        d += p;
    }
    (prod, d)
}

/// Coefficient of `ln|r|²` in `G − G^B`,
/// `(1/4πk²) Σ_{m odd ≥ 3} (k²ρ/2)^m/(m!)²`, and its `ρ`-derivatives.
/// Every term is positive, so the sum is stable for any `kr`.
pub fn remainder_log(k: f64, rho: f64) -> [f64; ORDERS] {
    let h = 0.5 * k * k;
    let pre = 1.0 / (4.0 * PI * k * k);
    let mut out = [0.0; ORDERS];
    // c_m = h^m/(m!)²
    let mut c = 1.0;
    for m in 1..200usize {
        c *= h / (m as f64 * m as f64);
        if m < 3 || m % 2 == 0 {
            continue;
        }
        let mut small = true;
        for (j, o) in out.iter_mut().enumerate() {
            if j > m {
                break;
            }
            let (fall, _) = falling(m, j);
            let t = pre * c * fall * rho.powi((m - j) as i32);
            *o += t;
            if t > 1e-17 * o.abs() {
                small = false;
            }
        }
        if small && m > 8 {
            break;
        }
    }
    out
}

/// Radial derivatives of `G − G^B` as `smooth + log·ln|r|²` at any
/// separation: the series below the threshold, otherwise the direct
/// values with the log part removed.
pub fn remainder_split(series: &RemainderSeries, k: f64, r2: f64) -> Result<Split<Complex64>> {
    let r = r2.sqrt();
    if k * r < SERIES_THRESHOLD {
        return Ok(series.eval(0.5 * r2));
    }
    let full = direct(r, k)?;
    let ln_r2 = r2.ln();
    let b = biharmonic(r2).collapse(ln_r2);
    let log = remainder_log(k, 0.5 * r2);
    let mut smooth = [Complex64::default(); ORDERS];
    for j in 0..ORDERS {
        smooth[j] = full[j] - b[j] - log[j] * ln_r2;
    }
    Ok(Split { smooth, log: log.map(Complex64::from) })
}

/// `F⁽ʲ⁾` of the full `G` at distance `r`, choosing the stable path.
pub fn flexural(series: &RemainderSeries, r: f64, k: f64) -> Result<[Complex64; ORDERS]> {
    if !(r > 0.0) {
        return Err(FlexError::Domain("Green's function is singular at x = y".into()));
    }
    if k * r >= SERIES_THRESHOLD {
        return direct(r, k);
    }
    let r2 = r * r;
    let rem = series.eval(0.5 * r2).collapse(r2.ln());
    let b = biharmonic(r2).collapse(r2.ln());
    let mut out = rem;
    for j in 0..ORDERS {
        out[j] += b[j];
    }
    Ok(out)
}
