//! Layer-potential and boundary kernels for clamped, supported and free
//! plates. Each boundary condition is a [`BoundaryCondition`] strategy
//! looked up by name in a [`Registry`].
//!
//! A strategy supplies its trace operators and representation kernels as
//! tables of directional-derivative words, the biharmonic parts of its
//! boundary kernels in cancelled closed form, their diagonal limits and
//! its jump matrix. [`KernelEvaluator`] combines these with the flexural
//! Green's function.

mod clamped;
pub mod forms;
mod free;
mod supported;

pub use clamped::Clamped;
pub use forms::FrameVars;
pub use free::Free;
pub use supported::Supported;

use crate::error::{FlexError, Result};
use crate::geometry::{Frenet, Node, Vec2};
use crate::greens::{biharmonic, contract, flexural, remainder_split, Dir, Frame, RemainderSeries, D, ORDERS};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub k: f64,
    pub nu: f64,
}

impl MaterialParams {
    /// Wavenumber `k > 0` and Poisson ratio `−1 ≤ ν < 1/2`.
    pub fn new(k: f64, nu: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(FlexError::Params(format!("wavenumber must be positive and finite, got {k}")));
        }
        if !nu.is_finite() || !(-1.0..0.5).contains(&nu) {
            return Err(FlexError::Params(format!("Poisson ratio must lie in [-1, 1/2), got {nu}")));
        }
        Ok(MaterialParams { k, nu })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Exterior,
    Interior,
}

impl Side {
    /// `+1` for the exterior problem (upper signs in the jump relations).
    pub fn sign(self) -> f64 {
        match self {
            Side::Exterior => 1.0,
            Side::Interior => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcKind {
    Clamped,
    Supported,
    Free,
}

impl BcKind {
    pub fn name(self) -> &'static str {
        match self {
            BcKind::Clamped => "clamped",
            BcKind::Supported => "supported",
            BcKind::Free => "free",
        }
    }
}

/// Constants derived from `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub nu: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub c0: f64,
    pub beta: f64,
}

impl Coefficients {
    pub fn new(nu: f64) -> Self {
        Coefficients {
            nu,
            alpha1: 2.0 - nu,
            alpha2: (nu - 1.0) * (7.0 + nu) / (3.0 - nu),
            alpha3: (1.0 - nu) * (3.0 + nu) / (1.0 + nu),
            c0: (nu - 1.0) * (nu + 3.0) * (2.0 * nu - 1.0) / (2.0 * (3.0 - nu)),
            beta: 0.5 * (1.0 + nu),
        }
    }

    /// `β⁺ = β` on the exterior, `β⁻ = −β` on the interior.
    pub fn beta_pm(&self, side: Side) -> f64 {
        side.sign() * self.beta
    }
}

/// Boundary point with the curvature data the kernels need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub position: Vec2,
    pub frame: Frame,
    pub kappa: f64,
    pub dkappa: f64,
    pub ddkappa: f64,
}

impl From<&Node> for SurfacePoint {
    fn from(n: &Node) -> Self {
        SurfacePoint {
            position: n.position,
            frame: Frame::new(n.normal, n.tangent),
            kappa: n.kappa,
            dkappa: n.dkappa,
            ddkappa: n.ddkappa,
        }
    }
}

impl From<&Frenet> for SurfacePoint {
    fn from(f: &Frenet) -> Self {
        SurfacePoint {
            position: f.position,
            frame: Frame::new(f.normal, f.tangent),
            kappa: f.kappa,
            dkappa: f.dkappa,
            ddkappa: f.ddkappa,
        }
    }
}

/// Geometric factor multiplying a derivative word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    One,
    KappaX,
    KappaY,
    DKappaY,
}

impl Factor {
    fn at(self, x: &SurfacePoint, y: &SurfacePoint) -> f64 {
        match self {
            Factor::One => 1.0,
            Factor::KappaX => x.kappa,
            Factor::KappaY => y.kappa,
            Factor::DKappaY => y.dkappa,
        }
    }
}

/// `coef · factor · G_{word}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub factor: Factor,
    pub word: Vec<D>,
}

impl Term {
    pub fn new(coef: f64, word: &[D]) -> Term {
        Term { coef, factor: Factor::One, word: word.to_vec() }
    }

    pub fn with(coef: f64, factor: Factor, word: &[D]) -> Term {
        Term { coef, factor, word: word.to_vec() }
    }
}

pub type Formula = Vec<Term>;

/// Trace operators (words in `x`) and representation kernels (words in `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTables {
    pub trace: [Formula; 2],
    /// Kernels acting on `ρ₁` and `ρ₂`.
    pub rep: [Formula; 2],
    /// Kernel acting on `Hρ₁` (free plate only).
    pub rep_h: Formula,
}

/// Entry order in a kernel block.
pub const K11: usize = 0;
pub const K12: usize = 1;
pub const K21: usize = 2;
pub const K22: usize = 3;
/// Entries multiplying `Hρ₁` in rows 1 and 2.
pub const K11H: usize = 4;
pub const K21H: usize = 5;
pub const ENTRIES: usize = 6;

/// `(trace row, representation kernel)` for each entry; kernel 2 is `rep_h`.
const ENTRY_PARTS: [(usize, usize); ENTRIES] = [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2)];

impl KernelTables {
    fn kernel(&self, j: usize) -> &Formula {
        if j == 2 {
            &self.rep_h
        } else {
            &self.rep[j]
        }
    }

    /// Boundary kernel of entry `e` as a sum of words in `x` and `y`.
    pub fn entry(&self, e: usize) -> Vec<ProductTerm> {
        let (i, j) = ENTRY_PARTS[e];
        let mut out = Vec::new();
        for t in &self.trace[i] {
            for r in self.kernel(j) {
                let mut word = t.word.clone();
                word.extend_from_slice(&r.word);
                out.push(ProductTerm { coef: t.coef * r.coef, fx: t.factor, fy: r.factor, word });
            }
        }
        out
    }
}

/// One term of a trace applied to a representation kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub coef: f64,
    pub fx: Factor,
    pub fy: Factor,
    pub word: Vec<D>,
}

/// A kernel value split as `smooth + log·ln|x − y|²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogSplit<T> {
    pub smooth: T,
    pub log: T,
}

impl LogSplit<f64> {
    pub fn plain(smooth: f64) -> Self {
        LogSplit { smooth, log: 0.0 }
    }

    pub fn value(&self, ln_r2: f64) -> f64 {
        self.smooth + self.log * ln_r2
    }
}

/// Operators beyond the kernel blocks: the coefficient of `K∘H` entries
/// and of the Laplace double layer squared (free plate).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SurfaceTerms {
    pub hilbert_coupling: f64,
    pub dlp_squared: f64,
}

pub trait BoundaryCondition: Send + Sync + fmt::Debug {
    fn kind(&self) -> BcKind;

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Rejects parameters for which the integral equation is not of the second kind.
    fn check(&self, mp: &MaterialParams) -> Result<()>;

    fn tables(&self, c: &Coefficients) -> KernelTables;

    /// Biharmonic parts of all entries in cancelled form, including
    /// [`BoundaryCondition::augmentation`].
    fn biharmonic(&self, c: &Coefficients, v: &FrameVars, x: &SurfacePoint, y: &SurfacePoint) -> [LogSplit<f64>; ENTRIES];

    /// Limits of [`BoundaryCondition::biharmonic`] as `y → x` along the boundary.
    fn biharmonic_limit(&self, c: &Coefficients, x: &SurfacePoint) -> [LogSplit<f64>; ENTRIES];

    /// Kernels added on pairs from the same component to make the entries
    /// continuous (the free plate's Hilbert terms).
    fn augmentation(&self, _c: &Coefficients, _v: &FrameVars) -> [f64; ENTRIES] {
        [0.0; ENTRIES]
    }

    /// Multiples of the identity `[[D₁₁, D₁₂], [D₂₁, D₂₂]]` at `x`.
    fn jump(&self, c: &Coefficients, side: Side, x: &SurfacePoint) -> [[f64; 2]; 2];

    fn surface_terms(&self, _c: &Coefficients, _side: Side) -> SurfaceTerms {
        SurfaceTerms::default()
    }
}

/// Boundary conditions by name.
#[derive(Clone)]
pub struct Registry {
    map: BTreeMap<String, Arc<dyn BoundaryCondition>>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.map.keys()).finish()
    }
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry::empty();
        r.register(Arc::new(Clamped));
        r.register(Arc::new(Supported));
        r.register(Arc::new(Free));
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry { map: BTreeMap::new() }
    }

    pub fn register(&mut self, bc: Arc<dyn BoundaryCondition>) {
        self.map.insert(bc.name().to_string(), bc);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn BoundaryCondition>> {
        self.map.get(name).cloned().ok_or_else(|| FlexError::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.map.keys().map(String::as_str).collect()
    }
}

/// Strategy from the default registry.
pub fn lookup(name: &str) -> Result<Arc<dyn BoundaryCondition>> {
    Registry::default().get(name)
}

#[derive(Debug, Clone)]
struct Compiled {
    coef: f64,
    fx: Factor,
    fy: Factor,
    word: Vec<D>,
}

/// Kernel values for one boundary condition and parameter set.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    bc: Arc<dyn BoundaryCondition>,
    mp: MaterialParams,
    coeffs: Coefficients,
    tables: KernelTables,
    entries: [Vec<Compiled>; ENTRIES],
    series: RemainderSeries,
    at_zero: [Complex64; ORDERS],
}

fn dirs_of(word: &[D], fx: &Frame, fy: &Frame) -> ([Dir; 5], usize) {
    let mut dirs = [Dir::x(Vec2::zeros()); 5];
    for (slot, w) in dirs.iter_mut().zip(word) {
        *slot = w.dir(fx, fy);
    }
    (dirs, word.len())
}

impl KernelEvaluator {
    pub fn new(bc: Arc<dyn BoundaryCondition>, mp: MaterialParams) -> Result<Self> {
        bc.check(&mp)?;
        let coeffs = Coefficients::new(mp.nu);
        let tables = bc.tables(&coeffs);
        let entries = std::array::from_fn(|e| {
            tables
                .entry(e)
                .into_iter()
                .map(|p| Compiled { coef: p.coef, fx: p.fx, fy: p.fy, word: p.word })
                .collect()
        });
        let series = RemainderSeries::new(mp.k);
        let at_zero = series.eval(0.0).smooth;
        Ok(KernelEvaluator { bc, mp, coeffs, tables, entries, series, at_zero })
    }

    pub fn boundary_condition(&self) -> &Arc<dyn BoundaryCondition> {
        &self.bc
    }

    pub fn params(&self) -> MaterialParams {
        self.mp
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    pub fn tables(&self) -> &KernelTables {
        &self.tables
    }

    pub fn jump(&self, side: Side, x: &SurfacePoint) -> [[f64; 2]; 2] {
        self.bc.jump(&self.coeffs, side, x)
    }

    pub fn surface_terms(&self, side: Side) -> SurfaceTerms {
        self.bc.surface_terms(&self.coeffs, side)
    }

    /// Whether any entry acts on `Hρ₁`.
    pub fn uses_hilbert(&self) -> bool {
        !self.tables.rep_h.is_empty()
    }

    fn contract_entries<T>(&self, z: Vec2, x: &SurfacePoint, y: &SurfacePoint, f: &[T; ORDERS]) -> [T; ENTRIES]
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        std::array::from_fn(|e| {
            let mut acc = T::default();
            for t in &self.entries[e] {
                let (dirs, n) = dirs_of(&t.word, &x.frame, &y.frame);
                let c = t.coef * t.fx.at(x, y) * t.fy.at(x, y);
                acc = acc + contract(z, &dirs[..n], f) * c;
            }
            acc
        })
    }

    fn distinct(x: &SurfacePoint, y: &SurfacePoint) -> Result<Vec2> {
        let z = x.position - y.position;
        if !(z.norm_squared() > 0.0) {
            return Err(FlexError::Domain(format!("boundary kernel evaluated at x = y = {:?}", x.position)));
        }
        Ok(z)
    }

    /// All entries at distinct points by direct differentiation of `G`.
    /// `same_component` adds the augmentation terms.
    pub fn block(&self, x: &SurfacePoint, y: &SurfacePoint, same_component: bool) -> Result<[Complex64; ENTRIES]> {
        let z = Self::distinct(x, y)?;
        let radial = flexural(&self.series, z.norm(), self.mp.k)?;
        let mut out = self.contract_entries(z, x, y, &radial);
        if same_component {
            let v = FrameVars::new(z, &x.frame, &y.frame);
            for (o, a) in out.iter_mut().zip(self.bc.augmentation(&self.coeffs, &v)) {
                *o += a;
            }
        }
        Ok(out)
    }

    /// All entries for two points of the same component as
    /// `smooth + log·ln|x−y|²`, with cancelled biharmonic parts.
    pub fn block_split(&self, x: &SurfacePoint, y: &SurfacePoint) -> Result<[LogSplit<Complex64>; ENTRIES]> {
        self.block_split_chord(x, y, x.position - y.position)
    }

    /// [`KernelEvaluator::block_split`] with the chord `z = x − y` supplied,
    /// e.g. from [`crate::geometry::Panelization::chord`].
    pub fn block_split_chord(&self, x: &SurfacePoint, y: &SurfacePoint, z: Vec2) -> Result<[LogSplit<Complex64>; ENTRIES]> {
        if !(z.norm_squared() > 0.0) {
            return Err(FlexError::Domain(format!("boundary kernel evaluated at x = y = {:?}", x.position)));
        }
        let v = FrameVars::new(z, &x.frame, &y.frame);
        let bh = self.bc.biharmonic(&self.coeffs, &v, x, y);
        let rem = remainder_split(&self.series, self.mp.k, v.r2)?;
        let s = self.contract_entries(z, x, y, &rem.smooth);
        let l = self.contract_entries(z, x, y, &rem.log);
        Ok(std::array::from_fn(|e| LogSplit { smooth: s[e] + bh[e].smooth, log: l[e] + bh[e].log }))
    }

    /// Limits of [`KernelEvaluator::block_split`] as `y → x`.
    pub fn block_diagonal(&self, x: &SurfacePoint) -> [LogSplit<Complex64>; ENTRIES] {
        let bh = self.bc.biharmonic_limit(&self.coeffs, x);
        // only perfect matchings survive; the remainder's log part has no
        // diagonal value at these orders
        let s = self.contract_entries(Vec2::zeros(), x, x, &self.at_zero);
        std::array::from_fn(|e| LogSplit { smooth: s[e] + bh[e].smooth, log: Complex64::from(bh[e].log) })
    }

    /// Biharmonic parts by cancelled closed forms for the chord `z = x − y`.
    pub fn biharmonic_split(&self, x: &SurfacePoint, y: &SurfacePoint, z: Vec2) -> [LogSplit<f64>; ENTRIES] {
        let v = FrameVars::new(z, &x.frame, &y.frame);
        self.bc.biharmonic(&self.coeffs, &v, x, y)
    }

    /// Biharmonic parts by cancelled closed forms, collapsed.
    pub fn biharmonic_cancelled(&self, x: &SurfacePoint, y: &SurfacePoint) -> Result<[f64; ENTRIES]> {
        let z = Self::distinct(x, y)?;
        let v = FrameVars::new(z, &x.frame, &y.frame);
        Ok(self.bc.biharmonic(&self.coeffs, &v, x, y).map(|p| p.value(v.ln_r2)))
    }

    /// Biharmonic parts by term-by-term differentiation, no cancellation.
    /// Kept as a reference and as the failing path in precision tests.
    pub fn biharmonic_naive(&self, x: &SurfacePoint, y: &SurfacePoint) -> Result<[f64; ENTRIES]> {
        let z = Self::distinct(x, y)?;
        let r2 = z.norm_squared();
        let radial = biharmonic(r2).collapse(r2.ln());
        let mut out = self.contract_entries(z, x, y, &radial);
        let v = FrameVars::new(z, &x.frame, &y.frame);
        for (o, a) in out.iter_mut().zip(self.bc.augmentation(&self.coeffs, &v)) {
            *o += a;
        }
        Ok(out)
    }

    /// Limits of the biharmonic parts as `y → x` along the boundary.
    pub fn on_surface_limits(&self, x: &SurfacePoint) -> [LogSplit<f64>; ENTRIES] {
        self.bc.biharmonic_limit(&self.coeffs, x)
    }

    /// Representation kernels at an arbitrary target `x`:
    /// `[K(ρ₁), K(ρ₂), K(Hρ₁)]`.
    pub fn representation(&self, x: Vec2, y: &SurfacePoint) -> Result<[Complex64; 3]> {
        self.representation_chord(x - y.position, y)
    }

    /// [`KernelEvaluator::representation`] with `z = x − y` supplied.
    pub fn representation_chord(&self, z: Vec2, y: &SurfacePoint) -> Result<[Complex64; 3]> {
        let r = z.norm();
        if !(r > 0.0) {
            return Err(FlexError::Domain(format!("layer potential evaluated on its source point {:?}", y.position)));
        }
        let radial = flexural(&self.series, r, self.mp.k)?;
        let fx = Frame::new(Vec2::zeros(), Vec2::zeros());
        let one = |f: &Formula| {
            let mut acc = Complex64::default();
            for t in f {
                let (dirs, n) = dirs_of(&t.word, &fx, &y.frame);
                acc += contract(z, &dirs[..n], &radial) * (t.coef * t.factor.at(y, y));
            }
            acc
        };
        Ok([one(&self.tables.rep[0]), one(&self.tables.rep[1]), one(&self.tables.rep_h)])
    }

    /// Traces at `x` (frame and curvature of a boundary point, position
    /// anywhere) of the representation kernels at `y`, with `z = x − y`.
    /// No augmentation: these are the raw entries.
    pub fn trace_block_chord(&self, x: &SurfacePoint, y: &SurfacePoint, z: Vec2) -> Result<[Complex64; ENTRIES]> {
        let r = z.norm();
        if !(r > 0.0) {
            return Err(FlexError::Domain(format!("trace evaluated on its source point {:?}", y.position)));
        }
        let radial = flexural(&self.series, r, self.mp.k)?;
        Ok(self.contract_entries(z, x, y, &radial))
    }

    /// Derivatives of `G(·, source)` at `x` along `dirs`.
    pub fn green_derivative(&self, x: Vec2, source: Vec2, dirs: &[Vec2]) -> Result<Complex64> {
        let z = x - source;
        let radial = flexural(&self.series, z.norm(), self.mp.k)?;
        let d: Vec<Dir> = dirs.iter().map(|&v| Dir::x(v)).collect();
        Ok(contract(z, &d, &radial))
    }

    /// Both boundary traces of a field at `x`, given its derivatives along
    /// arbitrary directions.
    pub fn trace<F>(&self, x: &SurfacePoint, field: F) -> [Complex64; 2]
    where
        F: Fn(&[Vec2]) -> Complex64,
    {
        std::array::from_fn(|i| {
            let mut acc = Complex64::default();
            for t in &self.tables.trace[i] {
                let dirs: Vec<Vec2> = t
                    .word
                    .iter()
                    .map(|w| match w {
                        D::Nx => x.frame.n,
                        D::Tx => x.frame.t,
                        _ => unreachable!("trace words act on x"),
                    })
                    .collect();
                acc += field(&dirs) * (t.coef * t.factor.at(x, x));
            }
            acc
        })
    }
}
