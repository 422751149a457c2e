//! Directional derivatives of radial functions by summing over matchings.
//!
//! For `g(ρ)` with `ρ = |z|²/2`, `z = x − y`,
//! `∂_{d₁…dₙ} g = Σ_matchings g⁽ⁿ⁻ᵖ⁾ Π_singles (z·dᵢ) Π_pairs (dᵢ·dⱼ)`,
//! and each derivative taken in `y` contributes a factor `−1`.

use crate::geometry::Vec2;

pub const MAX_ORDER: usize = 5;

/// A derivative direction acting on the first (`x`) or second (`y`) argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dir {
    pub v: Vec2,
    pub on_y: bool,
}

impl Dir {
    pub fn x(v: Vec2) -> Self {
        Dir { v, on_y: false }
    }
    pub fn y(v: Vec2) -> Self {
        Dir { v, on_y: true }
    }
}

/// One term: radial order, singles mask and pairs.
#[derive(Debug, Clone)]
struct Term {
    order: usize,
    singles: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

fn matchings(idx: &[usize], out: &mut Vec<Term>, singles: &mut Vec<usize>, pairs: &mut Vec<(usize, usize)>, n: usize) {
    match idx.split_first() {
        None => out.push(Term { order: n - pairs.len(), singles: singles.clone(), pairs: pairs.clone() }),
        Some((&first, rest)) => {
            singles.push(first);
            matchings(rest, out, singles, pairs, n);
            singles.pop();
            for i in 0..rest.len() {
                let mut remaining: Vec<usize> = rest.to_vec();
                let other = remaining.remove(i);
                pairs.push((first, other));
                matchings(&remaining, out, singles, pairs, n);
                pairs.pop();
            }
        }
    }
}

thread_local! {
    static TABLES: Vec<Vec<Term>> = (0..=MAX_ORDER)
        .map(|n| {
            let idx: Vec<usize> = (0..n).collect();
            let mut out = Vec::new();
            matchings(&idx, &mut out, &mut Vec::new(), &mut Vec::new(), n);
            out
        })
        .collect();
}

/// Number of matchings for `n` directions (1, 1, 2, 4, 10, 26).
pub fn term_count(n: usize) -> usize {
    TABLES.with(|t| t[n].len())
}

/// `∂_{dirs} g` given radial derivatives `f[j] = g⁽ʲ⁾(ρ)`.
pub fn contract<T>(z: Vec2, dirs: &[Dir], f: &[T]) -> T
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let n = dirs.len();
    assert!(n <= MAX_ORDER, "derivative order above {MAX_ORDER}");
    let mut zd = [0.0; MAX_ORDER];
    for (i, d) in dirs.iter().enumerate() {
        zd[i] = z.dot(&d.v);
    }
    let sign = if dirs.iter().filter(|d| d.on_y).count() % 2 == 0 { 1.0 } else { -1.0 };
    TABLES.with(|t| {
        let mut acc = T::default();
        for term in &t[n] {
            let mut c = sign;
            for &i in &term.singles {
                c *= zd[i];
            }
            for &(i, j) in &term.pairs {
                c *= dirs[i].v.dot(&dirs[j].v);
            }
            if c != 0.0 {
                acc = acc + f[term.order] * c;
            }
        }
        acc
    })
}

/// Value at `x = y` of `∂_{dirs} g` for a radial function smooth in `ρ`:
/// only perfect matchings survive.
pub fn contract_diagonal<T>(dirs: &[Dir], f: &[T]) -> T
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    contract(Vec2::zeros(), dirs, f)
}
