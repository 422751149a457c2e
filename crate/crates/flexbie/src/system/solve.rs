use crate::error::{FlexError, Result};
use crate::geometry::Panelization;
use nalgebra::{DMatrix, DVector, LU, Dyn};
use num_complex::Complex64;
use serde::Serialize;

/// Condition estimates above this are treated as singular.
const SINGULAR_CONDITION: f64 = 1e14;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: String,
    /// `‖Ax − b‖₂ / ‖b‖₂`
    pub residual: f64,
    pub condition_1norm: Option<f64>,
    pub iterations: Option<usize>,
}

/// Densities on the nodes, component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySolution {
    pub rho1: Vec<Complex64>,
    pub rho2: Vec<Complex64>,
    pub report: SolveReport,
}

impl DensitySolution {
    pub fn from_interleaved(x: &[Complex64], report: SolveReport) -> Self {
        let rho1 = x.iter().step_by(2).copied().collect();
        let rho2 = x.iter().skip(1).step_by(2).copied().collect();
        DensitySolution { rho1, rho2, report }
    }

    pub fn zeros(n: usize) -> Self {
        DensitySolution { rho1: vec![Complex64::default(); n], rho2: vec![Complex64::default(); n], report: SolveReport::default() }
    }

    pub fn interleaved(&self) -> Vec<Complex64> {
        self.rho1.iter().zip(&self.rho2).flat_map(|(a, b)| [*a, *b]).collect()
    }

    /// `‖ρ₁‖_{L¹} + ‖ρ₂‖_{L¹}` with the panel weights.
    pub fn l1_norm(&self, p: &Panelization) -> f64 {
        p.nodes.iter().zip(self.rho1.iter().zip(&self.rho2)).map(|(n, (a, b))| n.weight * (a.norm() + b.norm())).sum()
    }
}

fn check_shapes(a: &DMatrix<Complex64>, rhs: &[Complex64]) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(FlexError::Solver(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    if a.nrows() != rhs.len() {
        return Err(FlexError::Solver(format!("right-hand side has length {}, expected {}", rhs.len(), a.nrows())));
    }
    if !a.nrows().is_multiple_of(2) {
        return Err(FlexError::Solver("system size must be even (two densities per node)".into()));
    }
    Ok(())
}

fn relative_residual(a: &DMatrix<Complex64>, x: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    let bn = b.norm();
    let r = (a * x - b).norm();
    if bn == 0.0 {
        r
    } else {
        r / bn
    }
}

/// LU solve with a 1-norm condition estimate.
pub fn solve_dense(a: &DMatrix<Complex64>, rhs: &[Complex64]) -> Result<DensitySolution> {
    check_shapes(a, rhs)?;
    let lu = a.clone().lu();
    let cond = a.column_iter().map(|c| c.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max) * inverse_1norm(&lu);
    if !(cond < SINGULAR_CONDITION) {
        return Err(FlexError::Solver(format!(
            "matrix is numerically singular (1-norm condition estimate {cond:e}); either the discretization is too \
             coarse for the wavenumber or the parameters are inadmissible (supported plate: nu in {{-1, 3}}; free \
             plate: beta^2 = 1)"
        )));
    }
    let b = DVector::from_column_slice(rhs);
    let x = lu.solve(&b).ok_or_else(|| FlexError::Solver("LU factorization is singular".into()))?;
    let report = SolveReport {
        method: "lu".into(),
        residual: relative_residual(a, &x, &b),
        condition_1norm: Some(cond),
        iterations: None,
    };
    Ok(DensitySolution::from_interleaved(x.as_slice(), report))
}

/// `‖A‖₁ ‖A⁻¹‖₁` with `‖A⁻¹‖₁` estimated from an LU factorization.
pub fn condition_1norm(a: &DMatrix<Complex64>) -> f64 {
    let norm = a.column_iter().map(|c| c.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
    norm * inverse_1norm(&a.clone().lu())
}

/// `σ_max / σ_min` from a singular value decomposition.
pub fn condition_2norm(a: &DMatrix<Complex64>) -> f64 {
    let s = a.clone().singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

/// Hager–Higham estimate of `‖A⁻¹‖₁`, solving with `A` and `Aᴴ`.
fn inverse_1norm(lu: &LU<Complex64, Dyn, Dyn>) -> f64 {
    let n = lu.l().nrows();
    if n == 0 {
        return 0.0;
    }
    let l_h = lu.l().adjoint();
    let u_h = lu.u().adjoint();
    let solve = |b: &DVector<Complex64>| lu.solve(b).unwrap_or_else(|| DVector::from_element(n, Complex64::new(f64::INFINITY, 0.0)));
    // Aᴴ = Uᴴ Lᴴ P
    let solve_adjoint = |b: &DVector<Complex64>| -> DVector<Complex64> {
        let w = u_h.solve_lower_triangular(b).unwrap_or_else(|| DVector::from_element(n, Complex64::new(f64::INFINITY, 0.0)));
        let mut v = l_h.solve_upper_triangular(&w).unwrap_or_else(|| DVector::from_element(n, Complex64::new(f64::INFINITY, 0.0)));
        lu.p().inv_permute_rows(&mut v);
        v
    };
    let l1 = |v: &DVector<Complex64>| v.iter().map(|c| c.norm()).sum::<f64>();
    let mut x = DVector::from_element(n, Complex64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0;
    let mut last = usize::MAX;
    for iter in 0..5 {
        let y = solve(&x);
        let ny = l1(&y);
        if iter > 0 && ny <= est {
            break;
        }
        est = ny;
        let xi = y.map(|c| if c.norm() > 0.0 { c / c.norm() } else { Complex64::new(1.0, 0.0) });
        let z = solve_adjoint(&xi);
        let (j, _) = z.iter().enumerate().fold((0, 0.0), |acc, (i, c)| if c.norm() > acc.1 { (i, c.norm()) } else { acc });
        if j == last {
            break;
        }
        last = j;
        x = DVector::zeros(n);
        x[j] = Complex64::new(1.0, 0.0);
    }
    // alternating test vector guards against unlucky starts
    let alt = DVector::from_fn(n, |i, _| {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(s * (1.0 + i as f64 / (n.max(2) - 1) as f64), 0.0)
    });
    let alt_est = 2.0 * l1(&solve(&alt)) / (3.0 * n as f64);
    est.max(alt_est)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Relative residual target, at least `1e-13`.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 1e-12, max_iter: 1000, restart: 200 }
    }
}

/// Restarted GMRES with dense matrix–vector products.
pub fn solve_iterative(a: &DMatrix<Complex64>, rhs: &[Complex64], opts: GmresOptions) -> Result<DensitySolution> {
    check_shapes(a, rhs)?;
    if !(opts.tol >= 1e-13) {
        return Err(FlexError::Solver(format!("GMRES tolerance must be at least 1e-13, got {:e}", opts.tol)));
    }
    if opts.restart == 0 || opts.max_iter == 0 {
        return Err(FlexError::Solver("GMRES needs positive restart length and iteration limit".into()));
    }
    let n = a.nrows();
    let b = DVector::from_column_slice(rhs);
    let bnorm = b.norm();
    if bnorm == 0.0 {
        let report = SolveReport { method: "gmres".into(), residual: 0.0, condition_1norm: None, iterations: Some(0) };
        return Ok(DensitySolution::from_interleaved(&vec![Complex64::default(); n], report));
    }
    let m = opts.restart.min(n);
    let mut x = DVector::<Complex64>::zeros(n);
    let mut total = 0;
    let mut best = f64::INFINITY;
    loop {
        let r = &b - a * &x;
        let beta = r.norm();
        best = best.min(beta / bnorm);
        if beta <= opts.tol * bnorm {
            break;
        }
        if total >= opts.max_iter {
            return Err(FlexError::Solver(format!(
                "GMRES did not converge in {} iterations; best relative residual {best:e}",
                opts.max_iter
            )));
        }
        let mut v: Vec<DVector<Complex64>> = vec![r / Complex64::new(beta, 0.0)];
        let mut h = DMatrix::<Complex64>::zeros(m + 1, m);
        let mut cs = vec![0.0; m];
        let mut sn = vec![Complex64::default(); m];
        let mut g = DVector::<Complex64>::zeros(m + 1);
        g[0] = Complex64::new(beta, 0.0);
        let mut k = 0;
        while k < m && total < opts.max_iter {
            let mut w = a * &v[k];
            total += 1;
            // modified Gram–Schmidt, twice
            for _ in 0..2 {
                for (i, vi) in v.iter().enumerate() {
                    let hij = vi.dotc(&w);
                    h[(i, k)] += hij;
                    w -= vi * hij;
                }
            }
            let hn = w.norm();
            h[(k + 1, k)] = Complex64::new(hn, 0.0);
            for i in 0..k {
                let t = h[(i, k)] * cs[i] + sn[i] * h[(i + 1, k)];
                h[(i + 1, k)] = -sn[i].conj() * h[(i, k)] + h[(i + 1, k)] * cs[i];
                h[(i, k)] = t;
            }
            let (c, s, rr) = givens(h[(k, k)], h[(k + 1, k)]);
            cs[k] = c;
            sn[k] = s;
            h[(k, k)] = rr;
            h[(k + 1, k)] = Complex64::default();
            g[k + 1] = -s.conj() * g[k];
            g[k] *= c;
            k += 1;
            best = best.min(g[k].norm() / bnorm);
            if g[k].norm() <= opts.tol * bnorm || hn == 0.0 {
                break;
            }
            v.push(w / Complex64::new(hn, 0.0));
        }
        // back substitution on the k×k triangle
        let mut y = vec![Complex64::default(); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[(i, j)] * y[j];
            }
            y[i] = s / h[(i, i)];
        }
        for (i, yi) in y.iter().enumerate() {
            x += &v[i] * *yi;
        }
    }
    let report = SolveReport {
        method: "gmres".into(),
        residual: relative_residual(a, &x, &b),
        condition_1norm: None,
        iterations: Some(total),
    };
    Ok(DensitySolution::from_interleaved(x.as_slice(), report))
}

/// Rotation `[c s; −s̄ c]` taking `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, Complex64::default(), a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let rho = na.hypot(nb);
    let phase = a / na;
    (na / rho, phase * b.conj() / rho, phase * rho)
}
