//! Perron–Frobenius eigen-data by certified power iteration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Default residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 1_000_000;

/// A nonnegative linear operator on `R^n`.
pub trait NonnegOperator {
    fn dim(&self) -> usize;
    /// `out = M x`.
    fn apply(&self, x: &[f64], out: &mut [f64]);
    /// `out = M^T x`.
    fn apply_transpose(&self, x: &[f64], out: &mut [f64]);
    fn is_primitive(&self) -> bool;
}

impl NonnegOperator for Matrix {
    fn dim(&self) -> usize {
        self.size()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.size();
        for i in 0..n {
            out[i] = (0..n).map(|j| self.get(i, j) as f64 * x[j]).sum();
        }
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        let n = self.size();
        for j in 0..n {
            out[j] = (0..n).map(|i| self.get(i, j) as f64 * x[i]).sum();
        }
    }

    fn is_primitive(&self) -> bool {
        Matrix::is_primitive(self)
    }
}

/// Sparse nonnegative integer matrix given by `(row, col, value)` triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n: usize,
    entries: Vec<(usize, usize, u64)>,
}

impl SparseMatrix {
    pub fn new(n: usize, mut entries: Vec<(usize, usize, u64)>) -> SparseMatrix {
        entries.sort_unstable();
        let mut merged: Vec<(usize, usize, u64)> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ if v > 0 => merged.push((i, j, v)),
                _ => {}
            }
        }
        SparseMatrix { n, entries: merged }
    }

    pub fn entries(&self) -> &[(usize, usize, u64)] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&(i, j)))
            .map(|k| self.entries[k].2)
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n);
        for &(i, j, v) in &self.entries {
            m.set(i, j, v);
        }
        m
    }
}

impl NonnegOperator for SparseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(i, j, v) in &self.entries {
            out[i] += v as f64 * x[j];
        }
    }

    fn apply_transpose(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for &(i, j, v) in &self.entries {
            out[j] += v as f64 * x[i];
        }
    }

    fn is_primitive(&self) -> bool {
        let adj: Vec<(usize, usize)> = self.entries.iter().map(|&(i, j, _)| (i, j)).collect();
        digraph_period(self.n, &adj) == Some(1)
    }
}

/// Period of a strongly connected digraph, `None` when not strongly
/// connected. Period 1 means primitive.
pub fn digraph_period(n: usize, arcs: &[(usize, usize)]) -> Option<usize> {
    if n == 0 {
        return None;
    }
    let mut out_adj = vec![Vec::new(); n];
    let mut in_adj = vec![Vec::new(); n];
    for &(i, j) in arcs {
        out_adj[i].push(j);
        in_adj[j].push(i);
    }
    let bfs = |adj: &[Vec<usize>]| {
        let mut level = vec![usize::MAX; n];
        level[0] = 0;
        let mut queue = alloc::collections::VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if level[j] == usize::MAX {
                    level[j] = level[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        level
    };
    let level = bfs(&out_adj);
    if level.contains(&usize::MAX) || bfs(&in_adj).contains(&usize::MAX) {
        return None;
    }
    let mut g = 0usize;
    for &(i, j) in arcs {
        let d = (level[i] + 1).abs_diff(level[j]);
        g = gcd(g, d);
    }
    if g == 0 {
        None
    } else {
        Some(g)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Perron–Frobenius data of a primitive matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PfData {
    pub lambda: f64,
    /// Left eigenvector, sums to 1 (train-track edge lengths).
    pub left: Vec<f64>,
    /// Right eigenvector, sums to 1 (frequencies).
    pub right: Vec<f64>,
    /// Max-norm of `vM - λv` and `Mu - λu`.
    pub residual: f64,
}

/// Solves for PF data of transition matrices; implementations may cache.
pub trait PfSolver {
    fn solve(&self, m: &Matrix, tol: f64) -> Result<PfData>;
}

/// Power iteration without caching.
#[derive(Clone, Copy, Debug, Default)]
pub struct PowerIteration;

impl PfSolver for PowerIteration {
    fn solve(&self, m: &Matrix, tol: f64) -> Result<PfData> {
        pf_eigendata(m, tol)
    }
}

/// Power iteration until the residual drops below `tol`.
pub fn pf_eigendata<M: NonnegOperator>(m: &M, tol: f64) -> Result<PfData> {
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let (lr, right, rr) = power_vector(m, false, tol, None)?;
    let (ll, left, rl) = power_vector(m, true, tol, None)?;
    Ok(PfData {
        lambda: 0.5 * (lr + ll),
        left,
        right,
        residual: rr.max(rl),
    })
}

/// Right PF vector by power iteration from a chosen nonnegative start.
pub fn pf_right_from(
    m: &impl NonnegOperator,
    start: &[f64],
    tol: f64,
) -> Result<(f64, Vec<f64>, f64)> {
    power_vector(m, false, tol, Some(start))
}

fn power_vector(
    m: &impl NonnegOperator,
    transpose: bool,
    tol: f64,
    start: Option<&[f64]>,
) -> Result<(f64, Vec<f64>, f64)> {
    let n = m.dim();
    let mut x = match start {
        Some(s) => s.to_vec(),
        None => vec![1.0; n],
    };
    normalize(&mut x);
    let mut y = vec![0.0; n];
    let apply = |x: &[f64], y: &mut [f64]| {
        if transpose {
            m.apply_transpose(x, y)
        } else {
            m.apply(x, y)
        }
    };
    for _ in 0..MAX_ITER {
        apply(&x, &mut y);
        let lambda: f64 = y.iter().sum();
        let residual = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - lambda * a).abs())
            .fold(0.0, f64::max);
        core::mem::swap(&mut x, &mut y);
        normalize(&mut x);
        if residual < tol {
            // residual of the vector just returned
            apply(&x, &mut y);
            let lambda: f64 = y.iter().sum();
            let r = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (b - lambda * a).abs())
                .fold(0.0, f64::max);
            return Ok((lambda, x, r));
        }
    }
    Err(Error::NonConvergence { steps: MAX_ITER })
}

fn normalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

/// Collatz–Wielandt bounds `min (M x)_i / x_i <= λ <= max (M x)_i / x_i`
/// for the integer vector `x = M^k 1`, as exact fractions `(num, den)`.
/// `None` on overflow or when `x` has a zero entry.
pub fn collatz_wielandt_bounds(m: &Matrix, k: u32) -> Option<((u128, u128), (u128, u128))> {
    let n = m.size();
    let mut x = vec![1u128; n];
    for _ in 0..k {
        x = mul_vec_u128(m, &x)?;
    }
    if x.contains(&0) {
        return None;
    }
    let y = mul_vec_u128(m, &x)?;
    let mut lo = (y[0], x[0]);
    let mut hi = (y[0], x[0]);
    for i in 1..n {
        let r = (y[i], x[i]);
        if r.0.checked_mul(lo.1)? < lo.0.checked_mul(r.1)? {
            lo = r;
        }
        if r.0.checked_mul(hi.1)? > hi.0.checked_mul(r.1)? {
            hi = r;
        }
    }
    Some((lo, hi))
}

fn mul_vec_u128(m: &Matrix, x: &[u128]) -> Option<Vec<u128>> {
    let n = m.size();
    (0..n)
        .map(|i| {
            (0..n).try_fold(0u128, |acc, j| {
                acc.checked_add((m.get(i, j) as u128).checked_mul(x[j])?)
            })
        })
        .collect()
}
