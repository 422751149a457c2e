use super::curves::{frenet_from, ParametricCurve, Vec2};
use crate::error::{FlexError, Result};
use crate::quadrature::GaussRule;
use std::f64::consts::TAU;
use std::ops::Range;

/// Geometry at one quadrature node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub position: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub kappa: f64,
    pub dkappa: f64,
    pub ddkappa: f64,
    /// `|γ'(t)|`
    pub speed: f64,
    /// arc-length quadrature weight
    pub weight: f64,
    /// arc length from `t = 0` on this component
    pub arc: f64,
    pub panel: usize,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub component: usize,
    pub t0: f64,
    pub t1: f64,
    pub nodes: Range<usize>,
    pub arc_length: f64,
    /// arc length at `t0`
    pub arc_start: f64,
}

#[derive(Debug, Clone)]
pub struct Component {
    pub curve: ParametricCurve,
    pub panels: Range<usize>,
    pub nodes: Range<usize>,
    pub length: f64,
    polygon: Vec<Vec2>,
}

/// Gauss–Legendre panels on one or more closed curves.
#[derive(Debug, Clone)]
pub struct Panelization {
    pub order: usize,
    pub rule: GaussRule,
    pub nodes: Vec<Node>,
    pub panels: Vec<Panel>,
    pub components: Vec<Component>,
}

pub fn build_panelization(curve: &ParametricCurve, n_panels: usize, order: usize) -> Result<Panelization> {
    Panelization::new(std::slice::from_ref(curve), n_panels, order)
}

impl Panelization {
    /// Equal parameter-length panels on every curve. Curves must be disjoint.
    pub fn new(curves: &[ParametricCurve], n_panels: usize, order: usize) -> Result<Self> {
        if n_panels < 2 {
            return Err(FlexError::Geometry(format!("need at least 2 panels, got {n_panels}")));
        }
        if !(4..=64).contains(&order) {
            return Err(FlexError::Geometry(format!("panel order must be in 4..=64, got {order}")));
        }
        if curves.is_empty() {
            return Err(FlexError::Geometry("no boundary components".into()));
        }
        let rule = GaussRule::new(order);
        let fine = GaussRule::new(32);
        let mut nodes = Vec::with_capacity(curves.len() * n_panels * order);
        let mut panels = Vec::with_capacity(curves.len() * n_panels);
        let mut components = Vec::with_capacity(curves.len());
        for (ci, curve) in curves.iter().enumerate() {
            curve.validate()?;
            let curve = curve.clone().with_component(ci);
            let p_start = panels.len();
            let n_start = nodes.len();
            let h = TAU / n_panels as f64;
            let mut arc0 = 0.0;
            for p in 0..n_panels {
                let t0 = p as f64 * h;
                let t1 = t0 + h;
                let first = nodes.len();
                for (j, &u) in rule.nodes.iter().enumerate() {
                    let t = t0 + 0.5 * h * (u + 1.0);
                    let d = curve.derivatives(t);
                    let f = frenet_from(&d);
                    // arc length from the panel start to this node
                    let partial: f64 = fine.mapped(t0, t).map(|(tt, w)| w * curve.derivatives(tt)[1].norm()).sum();
                    nodes.push(Node {
                        t,
                        position: f.position,
                        tangent: f.tangent,
                        normal: f.normal,
                        kappa: f.kappa,
                        dkappa: f.dkappa,
                        ddkappa: f.ddkappa,
                        speed: f.speed,
                        weight: 0.5 * h * rule.weights[j] * f.speed,
                        arc: arc0 + partial,
                        panel: panels.len(),
                        component: ci,
                    });
                }
                let len = curve.arc_length(t0, t1);
                panels.push(Panel {
                    component: ci,
                    t0,
                    t1,
                    nodes: first..nodes.len(),
                    arc_length: len,
                    arc_start: arc0,
                });
                arc0 += len;
            }
            let polygon = (0..POLYGON_SIDES)
                .map(|j| curve.position(TAU * j as f64 / POLYGON_SIDES as f64))
                .collect();
            components.push(Component {
                curve,
                panels: p_start..panels.len(),
                nodes: n_start..nodes.len(),
                length: arc0,
                polygon,
            });
        }
        let p = Panelization { order, rule, nodes, panels, components };
        p.check_disjoint()?;
        Ok(p)
    }

    fn check_disjoint(&self) -> Result<()> {
        if self.components.len() < 2 {
            return Ok(());
        }
        for a in 0..self.components.len() {
            for b in a + 1..self.components.len() {
                let ca = &self.components[a];
                let cb = &self.components[b];
                let pa = ca.curve.position(0.0);
                if point_inside(cb, pa) || point_inside(ca, cb.curve.position(0.0)) {
                    return Err(FlexError::Geometry(format!("components {a} and {b} overlap")));
                }
                let mut dmin = f64::INFINITY;
                for i in ca.nodes.clone() {
                    for j in cb.nodes.clone() {
                        dmin = dmin.min((self.nodes[i].position - self.nodes[j].position).norm());
                    }
                }
                if !(dmin > 0.0) {
                    return Err(FlexError::Geometry(format!("components {a} and {b} touch")));
                }
                // crossing curves would put some node of one inside the other
                if ca.nodes.clone().any(|i| point_inside(cb, self.nodes[i].position)) {
                    return Err(FlexError::Geometry(format!("components {a} and {b} intersect")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.components.iter().map(|c| c.length).sum()
    }

    /// Panels of the same component adjacent to `panel` (previous, next).
    pub fn neighbours(&self, panel: usize) -> (usize, usize) {
        let c = &self.components[self.panels[panel].component];
        let n = c.panels.len();
        let local = panel - c.panels.start;
        (c.panels.start + (local + n - 1) % n, c.panels.start + (local + 1) % n)
    }

    /// Winding-number test against the discretized boundary of component `c`.
    pub fn inside_component(&self, c: usize, x: Vec2) -> bool {
        point_inside(&self.components[c], x)
    }

    /// True if `x` lies in the closure of no component.
    pub fn is_exterior(&self, x: Vec2) -> bool {
        (0..self.components.len()).all(|c| !self.inside_component(c, x))
    }

    /// Smallest distance from `x` to any node.
    pub fn node_distance(&self, x: Vec2) -> f64 {
        self.nodes.iter().map(|n| (n.position - x).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Nearest boundary point to `x`: `(component, t, distance, signed)`,
    /// `signed > 0` outside the component.
    pub fn closest(&self, x: Vec2) -> (usize, f64, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY, 0.0);
        for (ci, c) in self.components.iter().enumerate() {
            let (t, d, s) = closest_on_component(c, x);
            if d < best.2 {
                best = (ci, t, d, s);
            }
        }
        best
    }

    /// `x_i − x_j`, accurate for close nodes of the same component.
    pub fn chord(&self, i: usize, j: usize) -> Vec2 {
        let (a, b) = (&self.nodes[i], &self.nodes[j]);
        if a.component != b.component {
            return a.position - b.position;
        }
        // shortest way around the parameter circle
        let mut dt = a.t - b.t;
        if dt > std::f64::consts::PI {
            dt -= TAU;
        } else if dt < -std::f64::consts::PI {
            dt += TAU;
        }
        self.components[a.component].curve.chord(b.t + dt, b.t)
    }

    /// Node-to-node interpolation of `values` on `panel` at local coordinate `u`.
    pub fn interpolate<T>(&self, panel: usize, u: f64, values: &[T]) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        let mut l = vec![0.0; self.order];
        self.rule.lagrange(u, &mut l);
        let r = self.panels[panel].nodes.clone();
        values[r].iter().zip(&l).map(|(&v, &w)| v * w).sum()
    }
}

const POLYGON_SIDES: usize = 1024;

/// Closest boundary point on one component: `(t, distance, signed)` with
/// `signed > 0` outside.
pub(crate) fn closest_on_component(c: &Component, x: Vec2) -> (f64, f64, f64) {
    let m = c.polygon.len();
    let (mut best, mut bd) = (0, f64::INFINITY);
    for (j, p) in c.polygon.iter().enumerate() {
        let d = (p - x).norm_squared();
        if d < bd {
            bd = d;
            best = j;
        }
    }
    let mut t = TAU * best as f64 / m as f64;
    for _ in 0..50 {
        let d = c.curve.derivatives(t);
        let r = d[0] - x;
        let f = r.dot(&d[1]);
        let fp = d[1].norm_squared() + r.dot(&d[2]);
        let step = if fp > 0.0 { f / fp } else { f / d[1].norm_squared() };
        let step = step.clamp(-TAU / m as f64, TAU / m as f64);
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let f = c.curve.frenet_at(t);
    let r = x - f.position;
    (t.rem_euclid(TAU), r.norm(), r.dot(&f.normal))
}

fn point_inside(c: &Component, x: Vec2) -> bool {
    let m = c.polygon.len();
    let mut inside = false;
    let mut near = f64::INFINITY;
    for i in 0..m {
        let a = c.polygon[i];
        let b = c.polygon[(i + 1) % m];
        near = near.min((a - x).norm());
        if (a.y > x.y) != (b.y > x.y) {
            let xc = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x.x < xc {
                inside = !inside;
            }
        }
    }
    // polygon chords deviate from the curve; decide close points exactly
    let spacing = c.length / m as f64;
    if near < 4.0 * spacing {
        let (_, _, signed) = closest_on_component(c, x);
        return signed < 0.0;
    }
    inside
}
