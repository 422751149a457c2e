//! Closed parametric curves and their Gauss–Legendre panel discretizations.
//!
//! Curves are counterclockwise, so the normal `n = (τ_y, −τ_x)` points
//! out of the enclosed region and a circle of radius `r` has `κ = 1/r`.

mod curves;
mod panels;

pub use curves::{frenet_from, Circle, CurveShape, Droplet, Frenet, ParametricCurve, Starfish, Transform, Vec2};
pub use panels::{build_panelization, Component, Node, Panel, Panelization};
