//! Closed-form derivatives of `G^B = |r|² ln|r|² / 16π`, `r = x − y`,
//! written term by term as in the standard tables for plate kernels.
//! These are the reference for the generic contraction path.

use super::{Frame, D};
use crate::geometry::Vec2;
use std::f64::consts::PI;

struct V {
    rn_x: f64,
    rt_x: f64,
    rn_y: f64,
    rt_y: f64,
    nn: f64,
    nt: f64,
    tn: f64,
    tt: f64,
    r2: f64,
}

impl V {
    fn new(r: Vec2, fx: &Frame, fy: &Frame) -> V {
        V {
            rn_x: r.dot(&fx.n),
            rt_x: r.dot(&fx.t),
            rn_y: r.dot(&fy.n),
            rt_y: r.dot(&fy.t),
            nn: fx.n.dot(&fy.n),
            nt: fx.n.dot(&fy.t),
            tn: fx.t.dot(&fy.n),
            tt: fx.t.dot(&fy.t),
            r2: r.norm_squared(),
        }
    }
}

pub fn gb_nyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rn_y * v.rn_y / (4.0 * PI * v.r2) + v.r2.ln() / (8.0 * PI) + 1.0 / (8.0 * PI)
}

pub fn gb_tyty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rt_y * v.rt_y / (4.0 * PI * v.r2) + v.r2.ln() / (8.0 * PI) + 1.0 / (8.0 * PI)
}

pub fn gb_nxnyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rn_y * v.nn / (2.0 * PI * v.r2) - v.rn_x * v.rn_y * v.rn_y / (2.0 * PI * v.r2 * v.r2)
        + v.rn_x / (4.0 * PI * v.r2)
}

pub fn gb_nxtyty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rt_y * v.nt / (2.0 * PI * v.r2) - v.rn_x * v.rt_y * v.rt_y / (2.0 * PI * v.r2 * v.r2)
        + v.rn_x / (4.0 * PI * v.r2)
}

pub fn gb_nynyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -3.0 * v.rn_y / (4.0 * PI * v.r2) + v.rn_y.powi(3) / (2.0 * PI * v.r2 * v.r2)
}

pub fn gb_nytyty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rn_y * v.rt_y * v.rt_y / (2.0 * PI * v.r2 * v.r2) - v.rn_y / (4.0 * PI * v.r2)
}

pub fn gb_nxnynyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    -3.0 * v.nn / (4.0 * PI * v.r2) + 3.0 * v.rn_y * v.rn_x / (2.0 * PI * r4)
        + 3.0 * v.rn_y * v.rn_y * v.nn / (2.0 * PI * r4)
        - 2.0 * v.rn_y.powi(3) * v.rn_x / (PI * r4 * v.r2)
}

pub fn gb_nxnytyty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    v.nn * v.rt_y * v.rt_y / (2.0 * PI * r4) + v.rn_y * v.rt_y * v.nt / (PI * r4)
        - 2.0 * v.rn_y * v.rt_y * v.rt_y * v.rn_x / (PI * r4 * v.r2)
        - v.nn / (4.0 * PI * v.r2)
        + v.rn_y * v.rn_x / (2.0 * PI * r4)
}

pub fn gb_ny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rn_y * v.r2.ln() / (8.0 * PI) - v.rn_y / (8.0 * PI)
}

pub fn gb_ty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rt_y * v.r2.ln() / (8.0 * PI) - v.rt_y / (8.0 * PI)
}

pub fn gb_nxnxny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rn_x * v.nn / (2.0 * PI * v.r2) + v.rn_y * v.rn_x * v.rn_x / (2.0 * PI * v.r2 * v.r2)
        - v.rn_y / (4.0 * PI * v.r2)
}

pub fn gb_txtxny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rt_x * v.tn / (2.0 * PI * v.r2) + v.rn_y * v.rt_x * v.rt_x / (2.0 * PI * v.r2 * v.r2)
        - v.rn_y / (4.0 * PI * v.r2)
}

pub fn gb_nxnxty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rn_x * v.nt / (2.0 * PI * v.r2) + v.rt_y * v.rn_x * v.rn_x / (2.0 * PI * v.r2 * v.r2)
        - v.rt_y / (4.0 * PI * v.r2)
}

pub fn gb_txtxty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rt_x * v.tt / (2.0 * PI * v.r2) + v.rt_y * v.rt_x * v.rt_x / (2.0 * PI * v.r2 * v.r2)
        - v.rt_y / (4.0 * PI * v.r2)
}

pub fn gb_nxnxnyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    v.nn * v.nn / (2.0 * PI * v.r2) - 2.0 * v.rn_x * v.rn_y * v.nn / (PI * r4) + 1.0 / (4.0 * PI * v.r2)
        - v.rn_y * v.rn_y / (2.0 * PI * r4)
        + 2.0 * v.rn_x * v.rn_x * v.rn_y * v.rn_y / (PI * r4 * v.r2)
        - v.rn_x * v.rn_x / (2.0 * PI * r4)
}

pub fn gb_txtxnyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    v.tn * v.tn / (2.0 * PI * v.r2) - 2.0 * v.rt_x * v.rn_y * v.tn / (PI * r4) + 1.0 / (4.0 * PI * v.r2)
        - v.rn_y * v.rn_y / (2.0 * PI * r4)
        + 2.0 * v.rt_x * v.rt_x * v.rn_y * v.rn_y / (PI * r4 * v.r2)
        - v.rt_x * v.rt_x / (2.0 * PI * r4)
}

pub fn gb_nxnxnynyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    let r6 = r4 * v.r2;
    let r8 = r4 * r4;
    3.0 * v.rn_y / (2.0 * PI * r4) - 6.0 * v.rn_y * v.rn_x * v.rn_x / (PI * r6)
        + 3.0 * v.rn_y * v.nn * v.nn / (PI * r4)
        - 12.0 * v.rn_y * v.rn_y * v.rn_x * v.nn / (PI * r6)
        - 2.0 * v.rn_y.powi(3) / (PI * r6)
        + 12.0 * v.rn_y.powi(3) * v.rn_x * v.rn_x / (PI * r8)
        + 3.0 * v.rn_x * v.nn / (PI * r4)
}

pub fn gb_txtxnynyny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    let r6 = r4 * v.r2;
    let r8 = r4 * r4;
    3.0 * v.rn_y / (2.0 * PI * r4) - 6.0 * v.rn_y * v.rt_x * v.rt_x / (PI * r6)
        + 3.0 * v.rn_y * v.tn * v.tn / (PI * r4)
        - 12.0 * v.rn_y * v.rn_y * v.rt_x * v.tn / (PI * r6)
        - 2.0 * v.rn_y.powi(3) / (PI * r6)
        + 12.0 * v.rn_y.powi(3) * v.rt_x * v.rt_x / (PI * r8)
        + 3.0 * v.rt_x * v.tn / (PI * r4)
}

pub fn gb_nxnxnytyty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    let r6 = r4 * v.r2;
    let r8 = r4 * r4;
    2.0 * v.nn * v.nt * v.rt_y / (PI * r4) - 4.0 * v.nn * v.rt_y * v.rt_y * v.rn_x / (PI * r6)
        + v.rn_y * v.nt * v.nt / (PI * r4)
        - 8.0 * v.rn_y * v.rt_y * v.rn_x * v.nt / (PI * r6)
        - 2.0 * v.rn_y * v.rt_y * v.rt_y / (PI * r6)
        + 12.0 * v.rn_y * v.rt_y * v.rt_y * v.rn_x * v.rn_x / (PI * r8)
        + v.nn * v.rn_x / (PI * r4)
        + v.rn_y / (2.0 * PI * r4)
        - 2.0 * v.rn_y * v.rn_x * v.rn_x / (PI * r6)
}

pub fn gb_txtxnytyty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    let r6 = r4 * v.r2;
    let r8 = r4 * r4;
    2.0 * v.tn * v.tt * v.rt_y / (PI * r4) - 4.0 * v.tn * v.rt_y * v.rt_y * v.rt_x / (PI * r6)
        + v.rn_y * v.tt * v.tt / (PI * r4)
        - 8.0 * v.rn_y * v.rt_y * v.rt_x * v.tt / (PI * r6)
        - 2.0 * v.rn_y * v.rt_y * v.rt_y / (PI * r6)
        + 12.0 * v.rn_y * v.rt_y * v.rt_y * v.rt_x * v.rt_x / (PI * r8)
        + v.tn * v.rt_x / (PI * r4)
        + v.rn_y / (2.0 * PI * r4)
        - 2.0 * v.rn_y * v.rt_x * v.rt_x / (PI * r6)
}

pub fn gb_nxnx(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rn_x * v.rn_x / (4.0 * PI * v.r2) + v.r2.ln() / (8.0 * PI) + 1.0 / (8.0 * PI)
}

pub fn gb_txtx(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    v.rt_x * v.rt_x / (4.0 * PI * v.r2) + v.r2.ln() / (8.0 * PI) + 1.0 / (8.0 * PI)
}

pub fn gb_nxnxnx(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    3.0 * v.rn_x / (4.0 * PI * v.r2) - v.rn_x.powi(3) / (2.0 * PI * v.r2 * v.r2)
}

pub fn gb_nxtxtx(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    -v.rn_x * v.rt_x * v.rt_x / (2.0 * PI * v.r2 * v.r2) + v.rn_x / (4.0 * PI * v.r2)
}

pub fn gb_nxnxnxny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    -3.0 * v.nn / (4.0 * PI * v.r2) + 3.0 * v.rn_y * v.rn_x / (2.0 * PI * r4)
        + 3.0 * v.rn_x * v.rn_x * v.nn / (2.0 * PI * r4)
        - 2.0 * v.rn_x.powi(3) * v.rn_y / (PI * r4 * v.r2)
}

pub fn gb_nxtxtxny(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    v.rt_x * v.rt_x * v.nn / (2.0 * PI * r4) + v.rt_x * v.tn * v.rn_x / (PI * r4)
        - 2.0 * v.rn_y * v.rn_x * v.rt_x * v.rt_x / (PI * r4 * v.r2)
        - v.nn / (4.0 * PI * v.r2)
        + v.rn_y * v.rn_x / (2.0 * PI * r4)
}

pub fn gb_nxnxnxty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    -3.0 * v.nt / (4.0 * PI * v.r2) + 3.0 * v.rn_x * v.rt_y / (2.0 * PI * r4)
        + 3.0 * v.rn_x * v.rn_x * v.nt / (2.0 * PI * r4)
        - 2.0 * v.rt_y * v.rn_x.powi(3) / (PI * r4 * v.r2)
}

pub fn gb_nxtxtxty(r: Vec2, fx: &Frame, fy: &Frame) -> f64 {
    let v = V::new(r, fx, fy);
    let r4 = v.r2 * v.r2;
    v.rn_x * v.rt_x * v.tt / (PI * r4) + v.nt * v.rt_x * v.rt_x / (2.0 * PI * r4)
        - 2.0 * v.rn_x * v.rt_y * v.rt_x * v.rt_x / (PI * r4 * v.r2)
        - v.nt / (4.0 * PI * v.r2)
        + v.rn_x * v.rt_y / (2.0 * PI * r4)
}

pub type ClosedForm = fn(Vec2, &Frame, &Frame) -> f64;

use D::{Nx, Ny, Tx, Ty};

/// Every tabulated closed form with its derivative word.
pub const TABLE: &[(&[D], ClosedForm)] = &[
    (&[Ny, Ny], gb_nyny),
    (&[Ty, Ty], gb_tyty),
    (&[Nx, Ny, Ny], gb_nxnyny),
    (&[Nx, Ty, Ty], gb_nxtyty),
    (&[Ny, Ny, Ny], gb_nynyny),
    (&[Ny, Ty, Ty], gb_nytyty),
    (&[Nx, Ny, Ny, Ny], gb_nxnynyny),
    (&[Nx, Ny, Ty, Ty], gb_nxnytyty),
    (&[Ny], gb_ny),
    (&[Ty], gb_ty),
    (&[Nx, Nx, Ny], gb_nxnxny),
    (&[Tx, Tx, Ny], gb_txtxny),
    (&[Nx, Nx, Ty], gb_nxnxty),
    (&[Tx, Tx, Ty], gb_txtxty),
    (&[Nx, Nx, Ny, Ny], gb_nxnxnyny),
    (&[Tx, Tx, Ny, Ny], gb_txtxnyny),
    (&[Nx, Nx, Ny, Ny, Ny], gb_nxnxnynyny),
    (&[Tx, Tx, Ny, Ny, Ny], gb_txtxnynyny),
    (&[Nx, Nx, Ny, Ty, Ty], gb_nxnxnytyty),
    (&[Tx, Tx, Ny, Ty, Ty], gb_txtxnytyty),
    (&[Nx, Nx], gb_nxnx),
    (&[Tx, Tx], gb_txtx),
    (&[Nx, Nx, Nx], gb_nxnxnx),
    (&[Nx, Tx, Tx], gb_nxtxtx),
    (&[Nx, Nx, Nx, Ny], gb_nxnxnxny),
    (&[Nx, Tx, Tx, Ny], gb_nxtxtxny),
    (&[Nx, Nx, Nx, Ty], gb_nxnxnxty),
    (&[Nx, Tx, Tx, Ty], gb_nxtxtxty),
];
