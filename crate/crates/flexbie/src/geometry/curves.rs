use crate::error::{FlexError, Result};
use nalgebra::Vector2;
use std::f64::consts::TAU;
use std::fmt::Debug;
use std::sync::Arc;

pub type Vec2 = Vector2<f64>;

/// A closed curve on `t ∈ [0, 2π)` with analytic derivatives.
pub trait CurveShape: Send + Sync + Debug {
    /// `γ(t)` and `dⁱγ/dtⁱ` for `i = 1..4`.
    fn derivatives(&self, t: f64) -> [Vec2; 5];
}

#[derive(Debug, Clone, Copy)]
pub struct Circle {
    pub radius: f64,
}

impl CurveShape for Circle {
    fn derivatives(&self, t: f64) -> [Vec2; 5] {
        let (s, c) = t.sin_cos();
        let r = self.radius;
        [
            Vec2::new(r * c, r * s),
            Vec2::new(-r * s, r * c),
            Vec2::new(-r * c, -r * s),
            Vec2::new(r * s, -r * c),
            Vec2::new(r * c, r * s),
        ]
    }
}

/// `x = 2 cos t`, `y = sin t − 0.4 cos² t`.
#[derive(Debug, Clone, Copy)]
pub struct Droplet;

impl CurveShape for Droplet {
    fn derivatives(&self, t: f64) -> [Vec2; 5] {
        let (s, c) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        // cos² t = (1 + cos 2t)/2
        [
            Vec2::new(2.0 * c, s - 0.2 * (1.0 + c2)),
            Vec2::new(-2.0 * s, c + 0.4 * s2),
            Vec2::new(-2.0 * c, -s + 0.8 * c2),
            Vec2::new(2.0 * s, -c - 1.6 * s2),
            Vec2::new(2.0 * c, s - 3.2 * c2),
        ]
    }
}

/// `(1 + A cos nt)(cos t, sin t)`.
#[derive(Debug, Clone, Copy)]
pub struct Starfish {
    pub amplitude: f64,
    pub arms: u32,
}

impl CurveShape for Starfish {
    fn derivatives(&self, t: f64) -> [Vec2; 5] {
        let n = self.arms as f64;
        let a = self.amplitude;
        let (sn, cn) = (n * t).sin_cos();
        // radial profile and its derivatives
        let rho = [
            1.0 + a * cn,
            -a * n * sn,
            -a * n * n * cn,
            a * n * n * n * sn,
            a * n * n * n * n * cn,
        ];
        let (s, c) = t.sin_cos();
        // derivatives of (cos t, sin t)
        let e = [
            Vec2::new(c, s),
            Vec2::new(-s, c),
            Vec2::new(-c, -s),
            Vec2::new(s, -c),
            Vec2::new(c, s),
        ];
        const BINOM: [[f64; 5]; 5] = [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 3.0, 1.0, 0.0],
            [1.0, 4.0, 6.0, 4.0, 1.0],
        ];
        let mut out = [Vec2::zeros(); 5];
        for (m, o) in out.iter_mut().enumerate() {
            for j in 0..=m {
                *o += BINOM[m][j] * rho[j] * e[m - j];
            }
        }
        out
    }
}

/// Rotation about the origin, then uniform scaling, then translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform {
    pub rotate: f64,
    pub scale: f64,
    pub translate: Vec2,
}

impl Default for Transform {
    fn default() -> Self {
        Transform { rotate: 0.0, scale: 1.0, translate: Vec2::zeros() }
    }
}

impl Transform {
    fn linear(&self, v: Vec2) -> Vec2 {
        let (s, c) = self.rotate.sin_cos();
        self.scale * Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }
}

/// A boundary component: a shape placed in the plane.
#[derive(Debug, Clone)]
pub struct ParametricCurve {
    shape: Arc<dyn CurveShape>,
    pub transform: Transform,
    pub component_id: usize,
}

/// Point data at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frenet {
    pub position: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub speed: f64,
    pub kappa: f64,
    /// `dκ/ds`
    pub dkappa: f64,
    /// `d²κ/ds²`
    pub ddkappa: f64,
}

impl ParametricCurve {
    pub fn new(shape: Arc<dyn CurveShape>, transform: Transform) -> Result<Self> {
        if !(transform.scale > 0.0) || !transform.scale.is_finite() {
            return Err(FlexError::Geometry(format!(
                "scale must be positive and finite, got {}",
                transform.scale
            )));
        }
        let curve = ParametricCurve { shape, transform, component_id: 0 };
        curve.validate()?;
        Ok(curve)
    }

    pub fn with_component(mut self, id: usize) -> Self {
        self.component_id = id;
        self
    }

    pub fn circle(radius: f64, center: Vec2) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(FlexError::Geometry(format!("circle radius must be positive, got {radius}")));
        }
        Self::new(Arc::new(Circle { radius }), Transform { translate: center, ..Default::default() })
    }

    pub fn droplet() -> Self {
        Self::new(Arc::new(Droplet), Transform::default()).expect("droplet is regular")
    }

    pub fn starfish(amplitude: f64, arms: u32, rotation: f64, center: Vec2, scale: f64) -> Result<Self> {
        if !(amplitude.abs() < 1.0) {
            return Err(FlexError::Geometry(format!(
                "starfish amplitude must satisfy |A| < 1, got {amplitude}"
            )));
        }
        if arms == 0 {
            return Err(FlexError::Geometry("starfish needs at least one arm".into()));
        }
        Self::new(
            Arc::new(Starfish { amplitude, arms }),
            Transform { rotate: rotation, scale, translate: center },
        )
    }

    /// `γ` and its first four parameter derivatives in world coordinates.
    pub fn derivatives(&self, t: f64) -> [Vec2; 5] {
        let mut d = self.shape.derivatives(t);
        for v in d.iter_mut() {
            *v = self.transform.linear(*v);
        }
        d[0] += self.transform.translate;
        d
    }

    pub fn position(&self, t: f64) -> Vec2 {
        self.derivatives(t)[0]
    }

    pub fn frenet_at(&self, t: f64) -> Frenet {
        frenet_from(&self.derivatives(t))
    }

    /// Checks closure, regularity and counterclockwise orientation.
    pub fn validate(&self) -> Result<()> {
        let a = self.derivatives(0.0);
        let b = self.derivatives(TAU);
        let scale = a[1].norm().max(1.0);
        for i in 0..5 {
            if (a[i] - b[i]).norm() > 1e-9 * scale * (1.0 + a[i].norm()) {
                return Err(FlexError::Geometry(format!(
                    "curve is not closed: derivative {i} differs between t=0 and t=2π"
                )));
            }
        }
        let samples = 512;
        let mut min_speed = f64::INFINITY;
        let mut max_speed: f64 = 0.0;
        let mut area = 0.0;
        for j in 0..samples {
            let t = TAU * j as f64 / samples as f64;
            let d = self.derivatives(t);
            let sp = d[1].norm();
            min_speed = min_speed.min(sp);
            max_speed = max_speed.max(sp);
            area += 0.5 * (d[0].x * d[1].y - d[0].y * d[1].x) * TAU / samples as f64;
        }
        if !(min_speed > 1e-8 * max_speed) {
            return Err(FlexError::Geometry(format!(
                "curve is degenerate: minimum speed {min_speed:e} (max {max_speed:e})"
            )));
        }
        if !(area > 0.0) {
            return Err(FlexError::Geometry(
                "curve must be counterclockwise (enclosed area is not positive)".into(),
            ));
        }
        Ok(())
    }

    /// `γ(t0) − γ(t1)`. Close parameters integrate `γ'` so the difference
    /// keeps full relative precision.
    pub fn chord(&self, t0: f64, t1: f64) -> Vec2 {
        self.chord_back(t0, t0 - t1)
    }

    /// `γ(t) − γ(t − dt)`, with the offset given directly so that it keeps
    /// its relative precision even when `t − dt` would round.
    pub fn chord_back(&self, t: f64, dt: f64) -> Vec2 {
        if dt.abs() > 1.0 {
            return self.position(t) - self.position(t - dt);
        }
        let rule = crate::quadrature::GaussRule::new(24);
        let h = 0.5 * dt;
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .fold(Vec2::zeros(), |acc, (&x, &w)| acc + self.derivatives(t - h * (1.0 - x))[1] * (h * w))
    }

    /// Arc length over `[t0, t1]` by composite Gauss–Legendre quadrature.
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        let rule = crate::quadrature::GaussRule::new(32);
        rule.mapped(t0, t1).map(|(t, w)| w * self.derivatives(t)[1].norm()).sum()
    }
}

/// Frenet data from `[γ, γ', γ'', γ''', γ'''']`.
pub fn frenet_from(d: &[Vec2; 5]) -> Frenet {
    let cross = |a: &Vec2, b: &Vec2| a.x * b.y - a.y * b.x;
    let sp = d[1].norm();
    let tangent = d[1] / sp;
    let normal = Vec2::new(tangent.y, -tangent.x);
    let cr = cross(&d[1], &d[2]);
    let cr1 = cross(&d[1], &d[3]);
    let cr2 = cross(&d[2], &d[3]) + cross(&d[1], &d[4]);
    let sp1 = d[1].dot(&d[2]) / sp;
    let sp2 = (d[2].norm_squared() + d[1].dot(&d[3])) / sp - sp1 * sp1 / sp;
    let s3 = sp * sp * sp;
    let s4 = s3 * sp;
    let kappa = cr / s3;
    let kt = cr1 / s3 - 3.0 * cr * sp1 / s4;
    let ktt = cr2 / s3 - 6.0 * cr1 * sp1 / s4 + 12.0 * cr * sp1 * sp1 / (s4 * sp)
        - 3.0 * cr * sp2 / s4;
    Frenet {
        position: d[0],
        tangent,
        normal,
        speed: sp,
        kappa,
        dkappa: kt / sp,
        ddkappa: ktt / (sp * sp) - kt * sp1 / s3,
    }
}
