//! Square nonnegative integer matrices.

use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major square matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    n: usize,
    data: Vec<u64>,
}

/// Result of the irreducibility test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Irreducibility {
    Reducible,
    /// Irreducible but no power is positive.
    Irreducible,
    /// `M^exponent` is positive and `exponent` is least.
    Primitive {
        exponent: usize,
    },
}

impl Matrix {
    pub fn zeros(n: usize) -> Matrix {
        Matrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.concat(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] += v;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Product, or `None` on overflow.
    pub fn checked_mul(&self, other: &Matrix) -> Option<Matrix> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = a.checked_mul(other.get(k, j))?;
                    let slot = &mut out.data[i * n + j];
                    *slot = slot.checked_add(v)?;
                }
            }
        }
        Some(out)
    }

    pub fn checked_pow(&self, k: u32) -> Option<Matrix> {
        let mut acc = Matrix::identity(self.n);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&x| x > 0)
    }

    /// Column sums.
    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Zero pattern as booleans.
    fn support(&self) -> Vec<bool> {
        self.data.iter().map(|&x| x > 0).collect()
    }

    /// Strong connectivity of the support digraph decides irreducibility;
    /// positivity of boolean powers up to the Wielandt bound decides
    /// primitivity.
    pub fn irreducibility(&self) -> Irreducibility {
        let n = self.n;
        if n == 0 || !self.strongly_connected() {
            return Irreducibility::Reducible;
        }
        let base = self.support();
        let mut acc = base.clone();
        let bound = (n - 1) * (n - 1) + 1;
        for k in 1..=bound {
            if acc.iter().all(|&x| x) {
                return Irreducibility::Primitive { exponent: k };
            }
            acc = bool_mul(&acc, &base, n);
        }
        Irreducibility::Irreducible
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.irreducibility(), Irreducibility::Primitive { .. })
    }

    fn strongly_connected(&self) -> bool {
        let n = self.n;
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let edge = if forward {
                        self.get(i, j)
                    } else {
                        self.get(j, i)
                    };
                    if edge > 0 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        // a 1x1 zero matrix has no cycle and counts as reducible
        reach(true) && reach(false) && (n > 1 || self.get(0, 0) > 0)
    }
}

fn bool_mul(a: &[bool], b: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    out[i * n + j] |= b[k * n + j];
                }
            }
        }
    }
    out
}
