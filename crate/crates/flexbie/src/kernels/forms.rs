//! Closed forms of the biharmonic parts of the boundary kernels, reduced
//! so that the leading singular terms cancel algebraically.
//!
//! Everything is written in the frame of `y`: `a = r·τ_y`, `b = r·n_y`,
//! `c = n_x·n_y = 1 − e`, `d = n_x·τ_y`, `r = x − y`. A `_log` function
//! gives the coefficient of `ln|r|²`; the plain one the rest.
#![allow(clippy::neg_multiply, clippy::double_parens)]

use crate::geometry::Vec2;
use crate::greens::Frame;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameVars {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub r2: f64,
    pub ln_r2: f64,
}

impl FrameVars {
    pub fn new(r: Vec2, fx: &Frame, fy: &Frame) -> FrameVars {
        let c = fx.n.dot(&fy.n);
        let d = fx.n.dot(&fy.t);
        // 1 − c without cancellation when the normals are nearly parallel
        let e = if c > 0.0 { d * d / (1.0 + c) } else { 1.0 - c };
        let r2 = r.norm_squared();
        FrameVars { a: r.dot(&fy.t), b: r.dot(&fy.n), c, d, e, r2, ln_r2: r2.ln() }
    }
}

/// Hilbert kernel `(x−y)·τ_y / π|x−y|²`.
pub fn hilbert(v: &FrameVars) -> f64 {
    v.a / (PI * v.r2)
}

/// `∂_{τ_x}` of the Hilbert kernel.
pub fn hilbert_dtx(v: &FrameVars) -> f64 {
    let p = v.a * v.c - v.b * v.d;
    v.c / (PI * v.r2) - 2.0 * p * v.a / (PI * v.r2 * v.r2)
}

pub fn clamped_k11(v: &FrameVars) -> f64 {
    let b = v.b;
    let r2 = v.r2;
    ((-2.0 * b*b*b))
        / (2.0 * PI * r2*r2)
}

pub fn clamped_k12(v: &FrameVars) -> f64 {
    let b = v.b;
    let r2 = v.r2;
    ((-2.0 * b*b + r2))
        / (4.0 * PI * r2)
}

pub fn clamped_k21(v: &FrameVars) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((8.0 * a*b*b*b*d - 8.0 * b*b*b*b*e + 8.0 * b*b*b*b + 6.0 * b*b*e*r2 - 6.0 * b*b*r2))
        / (2.0 * PI * r2*r2*r2)
}

pub fn clamped_k22(v: &FrameVars) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((2.0 * a*b*b*d - 2.0 * b*b*b*e + 2.0 * b*b*b + 2.0 * b*e*r2 - 2.0 * b*r2))
        / (2.0 * PI * r2*r2)
}

pub fn free_k11a(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((-4.0 * a*b*b*d*e + 4.0 * a*b*b*d + 2.0 * a*d*e*r2 - 2.0 * a*d*r2 + 4.0 * b*b*b*e*e - 8.0 * b*b*b*e + 2.0 * b*b*b - 4.0 * b*e*e*r2 + 8.0 * b*e*r2 - 3.0 * b*r2)
        + nu * (4.0 * a*b*b*d*e - 4.0 * a*b*b*d - 2.0 * a*d*e*r2 + 2.0 * a*d*r2 - 4.0 * b*b*b*e*e + 8.0 * b*b*b*e - 2.0 * b*b*b + 4.0 * b*e*e*r2 - 8.0 * b*e*r2 + b*r2))
        / (4.0 * PI * r2*r2)
}

pub fn free_k11b_h(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((4.0 * a*b*b*e*e - 8.0 * a*b*b*e + 2.0 * a*b*b + 4.0 * b*b*b*d*e - 4.0 * b*b*b*d - 2.0 * b*d*e*r2 + 2.0 * b*d*r2)
        + nu * (-4.0 * a*b*b*e*e + 8.0 * a*b*b*e - 2.0 * a*b*b - 4.0 * b*b*b*d*e + 4.0 * b*b*b*d + 2.0 * b*d*e*r2 - 2.0 * b*d*r2))
        / (4.0 * PI * r2*r2)
}

pub fn free_k12(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((-4.0 * a*b*d*e + 4.0 * a*b*d + 4.0 * b*b*e*e - 8.0 * b*b*e + 2.0 * b*b - 2.0 * e*e*r2 + 4.0 * e*r2 + r2)
        + nu * (4.0 * a*b*d*e - 4.0 * a*b*d - 4.0 * b*b*e*e + 8.0 * b*b*e - 2.0 * b*b + 2.0 * e*e*r2 - 4.0 * e*r2 + 3.0 * r2))
        / (8.0 * PI * r2)
}

pub fn free_k12_log(v: &FrameVars, nu: f64) -> f64 {
    let r2 = v.r2;
    ((r2)
        + nu * (r2))
        / (8.0 * PI * r2)
}

pub fn free_k21a_h_geo(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((32.0 * a*b*b*b*d*e*e - 64.0 * a*b*b*b*d*e + 24.0 * a*b*b*b*d - 20.0 * a*b*d*e*e*r2 + 40.0 * a*b*d*e*r2 - 12.0 * a*b*d*r2 - 32.0 * b*b*b*b*e*e*e + 96.0 * b*b*b*b*e*e - 72.0 * b*b*b*b*e + 8.0 * b*b*b*b + 36.0 * b*b*e*e*e*r2 - 108.0 * b*b*e*e*r2 + 78.0 * b*b*e*r2 - 6.0 * b*b*r2 - 6.0 * e*e*e*r2*r2 + 18.0 * e*e*r2*r2 - 12.0 * e*r2*r2)
        + nu * (-32.0 * a*b*b*b*d*e*e + 64.0 * a*b*b*b*d*e - 24.0 * a*b*b*b*d + 20.0 * a*b*d*e*e*r2 - 40.0 * a*b*d*e*r2 + 12.0 * a*b*d*r2 + 32.0 * b*b*b*b*e*e*e - 96.0 * b*b*b*b*e*e + 72.0 * b*b*b*b*e - 8.0 * b*b*b*b - 36.0 * b*b*e*e*e*r2 + 108.0 * b*b*e*e*r2 - 78.0 * b*b*e*r2 + 6.0 * b*b*r2 + 6.0 * e*e*e*r2*r2 - 18.0 * e*e*r2*r2 + 12.0 * e*r2*r2))
        / (4.0 * PI * r2*r2*r2)
}

pub fn free_k21a_kap(v: &FrameVars) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((4.0 * a*b*b*d*e - 4.0 * a*b*b*d - 2.0 * a*d*e*r2 + 2.0 * a*d*r2 - 4.0 * b*b*b*e*e + 8.0 * b*b*b*e - 2.0 * b*b*b + 4.0 * b*e*e*r2 - 8.0 * b*e*r2 + 2.0 * b*r2))
        / (2.0 * PI * r2*r2)
}

pub fn free_k21b_geo(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((-32.0 * a*b*b*b*e*e*e + 96.0 * a*b*b*b*e*e - 72.0 * a*b*b*b*e + 8.0 * a*b*b*b + 12.0 * a*b*e*e*e*r2 - 36.0 * a*b*e*e*r2 + 22.0 * a*b*e*r2 + 2.0 * a*b*r2 - 32.0 * b*b*b*b*d*e*e + 64.0 * b*b*b*b*d*e - 24.0 * b*b*b*b*d + 28.0 * b*b*d*e*e*r2 - 56.0 * b*b*d*e*r2 + 16.0 * b*b*d*r2 - 2.0 * d*e*e*r2*r2 + 4.0 * d*e*r2*r2 + d*r2*r2)
        + nu * (32.0 * a*b*b*b*e*e*e - 96.0 * a*b*b*b*e*e + 72.0 * a*b*b*b*e - 8.0 * a*b*b*b - 12.0 * a*b*e*e*e*r2 + 36.0 * a*b*e*e*r2 - 26.0 * a*b*e*r2 + 2.0 * a*b*r2 + 32.0 * b*b*b*b*d*e*e - 64.0 * b*b*b*b*d*e + 24.0 * b*b*b*b*d - 28.0 * b*b*d*e*e*r2 + 56.0 * b*b*d*e*r2 - 20.0 * b*b*d*r2 + 2.0 * d*e*e*r2*r2 - 4.0 * d*e*r2*r2 + d*r2*r2))
        / (4.0 * PI * r2*r2*r2)
}

pub fn free_k21b_kap(v: &FrameVars) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((-4.0 * a*b*b*e*e + 8.0 * a*b*b*e - 2.0 * a*b*b - 4.0 * b*b*b*d*e + 4.0 * b*b*b*d + 2.0 * b*d*e*r2 - 2.0 * b*d*r2))
        / (2.0 * PI * r2*r2)
}

pub fn free_k22_geo(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((8.0 * a*b*b*d*e*e - 16.0 * a*b*b*d*e + 6.0 * a*b*b*d - 2.0 * a*d*e*e*r2 + 4.0 * a*d*e*r2 + a*d*r2 - 8.0 * b*b*b*e*e*e + 24.0 * b*b*b*e*e - 18.0 * b*b*b*e + 2.0 * b*b*b + 6.0 * b*e*e*e*r2 - 18.0 * b*e*e*r2 + 11.0 * b*e*r2 + b*r2)
        + nu * (-8.0 * a*b*b*d*e*e + 16.0 * a*b*b*d*e - 6.0 * a*b*b*d + 2.0 * a*d*e*e*r2 - 4.0 * a*d*e*r2 + a*d*r2 + 8.0 * b*b*b*e*e*e - 24.0 * b*b*b*e*e + 18.0 * b*b*b*e - 2.0 * b*b*b - 6.0 * b*e*e*e*r2 + 18.0 * b*e*e*r2 - 13.0 * b*e*r2 + b*r2))
        / (4.0 * PI * r2*r2)
}

pub fn free_k22_kap(v: &FrameVars) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((4.0 * a*b*d*e - 4.0 * a*b*d - 4.0 * b*b*e*e + 8.0 * b*b*e - 2.0 * b*b + 2.0 * e*e*r2 - 4.0 * e*r2 + r2))
        / (4.0 * PI * r2)
}

pub fn supported_k11_geo(v: &FrameVars, nu: f64) -> f64 {
    let b = v.b;
    let r2 = v.r2;
    ((-2.0 * b*b*b - b*r2)
        + nu * (2.0 * b*b*b - b*r2))
        / (4.0 * PI * r2*r2)
}

pub fn supported_nyny(v: &FrameVars) -> f64 {
    let b = v.b;
    let r2 = v.r2;
    ((2.0 * b*b + r2))
        / (8.0 * PI * r2)
}

pub fn supported_nyny_log(v: &FrameVars) -> f64 {
    let r2 = v.r2;
    ((r2))
        / (8.0 * PI * r2)
}

pub fn supported_ty(v: &FrameVars) -> f64 {
    let a = v.a;
    ((-a))
        / (8.0 * PI)
}

pub fn supported_ty_log(v: &FrameVars) -> f64 {
    let a = v.a;
    ((-a))
        / (8.0 * PI)
}

pub fn supported_k12(v: &FrameVars) -> f64 {
    let b = v.b;
    ((-b))
        / (8.0 * PI)
}

pub fn supported_k12_log(v: &FrameVars) -> f64 {
    let b = v.b;
    ((-b))
        / (8.0 * PI)
}

pub fn supported_k21_geo(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((48.0 * a*b*b*b*b*d*e - 48.0 * a*b*b*b*b*d - 16.0 * a*b*b*d*e*r2 + 16.0 * a*b*b*d*r2 - 2.0 * a*d*e*r2*r2 + 2.0 * a*d*r2*r2 - 48.0 * b*b*b*b*b*e*e + 96.0 * b*b*b*b*b*e - 24.0 * b*b*b*b*b + 40.0 * b*b*b*e*e*r2 - 80.0 * b*b*b*e*r2 + 24.0 * b*b*b*r2 - 3.0 * b*r2*r2)
        + nu * (-96.0 * a*b*b*b*b*d*e + 96.0 * a*b*b*b*b*d + 48.0 * a*b*b*d*e*r2 - 48.0 * a*b*b*d*r2 + 96.0 * b*b*b*b*b*e*e - 192.0 * b*b*b*b*b*e + 48.0 * b*b*b*b*b - 96.0 * b*b*b*e*e*r2 + 192.0 * b*b*b*e*r2 - 48.0 * b*b*b*r2 + 12.0 * b*e*e*r2*r2 - 24.0 * b*e*r2*r2 + 6.0 * b*r2*r2)
        + nu * nu * (48.0 * a*b*b*b*b*d*e - 48.0 * a*b*b*b*b*d - 32.0 * a*b*b*d*e*r2 + 32.0 * a*b*b*d*r2 + 2.0 * a*d*e*r2*r2 - 2.0 * a*d*r2*r2 - 48.0 * b*b*b*b*b*e*e + 96.0 * b*b*b*b*b*e - 24.0 * b*b*b*b*b + 56.0 * b*b*b*e*e*r2 - 112.0 * b*b*b*e*r2 + 24.0 * b*b*b*r2 - 12.0 * b*e*e*r2*r2 + 24.0 * b*e*r2*r2 - 3.0 * b*r2*r2))
        / (2.0 * PI * r2*r2*r2*r2)
}

pub fn supported_k21_kap(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((-16.0 * a*b*b*b*d*e + 16.0 * a*b*b*b*d + 12.0 * a*b*d*e*r2 - 12.0 * a*b*d*r2 + 16.0 * b*b*b*b*e*e - 32.0 * b*b*b*b*e + 8.0 * b*b*b*b - 20.0 * b*b*e*e*r2 + 40.0 * b*b*e*r2 - 12.0 * b*b*r2 + 4.0 * e*e*r2*r2 - 8.0 * e*r2*r2 + 3.0 * r2*r2)
        + nu * (16.0 * a*b*b*b*d*e - 16.0 * a*b*b*b*d - 12.0 * a*b*d*e*r2 + 12.0 * a*b*d*r2 - 16.0 * b*b*b*b*e*e + 32.0 * b*b*b*b*e - 8.0 * b*b*b*b + 20.0 * b*b*e*e*r2 - 40.0 * b*b*e*r2 + 8.0 * b*b*r2 - 4.0 * e*e*r2*r2 + 8.0 * e*r2*r2 - r2*r2))
        / (4.0 * PI * r2*r2*r2)
}

pub fn supported_k21_dkap(v: &FrameVars, nu: f64) -> f64 {
    let a = v.a;
    let b = v.b;
    let d = v.d;
    let e = v.e;
    let r2 = v.r2;
    ((4.0 * a*b*b*e*e - 8.0 * a*b*b*e + 2.0 * a*b*b - a*r2 + 4.0 * b*b*b*d*e - 4.0 * b*b*b*d - 2.0 * b*d*e*r2 + 2.0 * b*d*r2)
        + nu * (-4.0 * a*b*b*e*e + 8.0 * a*b*b*e - 2.0 * a*b*b - a*r2 - 4.0 * b*b*b*d*e + 4.0 * b*b*b*d + 2.0 * b*d*e*r2 - 2.0 * b*d*r2))
        / (4.0 * PI * r2*r2)
}
