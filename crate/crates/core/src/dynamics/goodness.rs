//! Goodness of circuits, generalized goodness of weight systems and
//! illegal-turn statistics.

use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::currents::{Value, WeightSystem};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::{GraphMap, LegalityTable, DEFAULT_WORD_CAP};

/// `C = ceil(C_f / (λ' - 1))`, with `λ'` the least simplicial expansion.
/// A non-expanding map has no finite constant.
pub fn goodness_constant(cf: usize, lambda_min: usize) -> Result<usize> {
    if lambda_min < 2 {
        return Err(Error::NotExpanding);
    }
    Ok(cf.div_ceil(lambda_min - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    pub circuit: Circuit,
    pub constant: usize,
    pub good_edges: u64,
    pub length: u64,
    pub ilt: u64,
}

impl GoodnessReport {
    /// `γ = good / length`.
    pub fn gamma(&self) -> f64 {
        self.good_edges as f64 / self.length as f64
    }

    /// `γ` as a reduced fraction.
    pub fn ratio(&self) -> (u64, u64) {
        let g = gcd(self.good_edges, self.length);
        (self.good_edges / g, self.length / g)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Legality of the junction before each edge of the cyclic root.
pub fn junction_legality(table: &LegalityTable, root: &[Edge]) -> Vec<bool> {
    let n = root.len();
    (0..n)
        .map(|j| table.junction_legal(root[(j + n - 1) % n], root[j]))
        .collect()
}

/// Per edge of the root: whether it is at distance `>= c` from every
/// illegal turn. Edge `i` is good iff the junctions `i-c+1 ..= i+c`
/// (cyclically) are legal, i.e. the `2c+1` window centered at `i` is legal.
pub fn good_edges(table: &LegalityTable, root: &[Edge], c: usize) -> Vec<bool> {
    let n = root.len();
    let legal = junction_legality(table, root);
    if c == 0 || legal.iter().all(|&x| x) {
        return alloc::vec![true; n];
    }
    if 2 * c >= n {
        return alloc::vec![false; n];
    }
    // illegal junctions in the cyclic range [i-c+1, i+c] via prefix sums
    let mut prefix = alloc::vec![0usize; 3 * n + 1];
    for k in 0..3 * n {
        prefix[k + 1] = prefix[k] + usize::from(!legal[k % n]);
    }
    (0..n)
        .map(|i| prefix[i + n + c + 1] == prefix[i + n + 1 - c])
        .collect()
}

/// Goodness of a circuit with respect to a train-track map and `C`.
pub fn goodness(f: &GraphMap, c: usize, w: &Circuit) -> Result<GoodnessReport> {
    goodness_with(&f.legality(), c, w)
}

pub fn goodness_with(table: &LegalityTable, c: usize, w: &Circuit) -> Result<GoodnessReport> {
    if w.is_empty() {
        return Err(Error::EmptyCircuit);
    }
    let root = w.root();
    let k = w.multiplicity();
    let good = good_edges(table, root, c).iter().filter(|&&x| x).count() as u64;
    let ilt = junction_legality(table, root)
        .iter()
        .filter(|&&x| !x)
        .count() as u64;
    Ok(GoodnessReport {
        circuit: w.clone(),
        constant: c,
        good_edges: good * k,
        length: w.len(),
        ilt: ilt * k,
    })
}

/// `γ(ν) = 1/(2 w(ν)) Σ_{ℓ(v) = 2C+1, v legal} <v, ν>`.
pub fn generalized_goodness<V: Value>(f: &GraphMap, c: usize, ws: &WeightSystem<V>) -> Result<f64> {
    let need = 2 * c + 1;
    if ws.depth() < need {
        return Err(Error::DepthTooSmall {
            have: ws.depth(),
            need,
        });
    }
    let w = ws.weight();
    if w <= 0.0 {
        return Err(Error::ZeroWeight);
    }
    let table = f.legality();
    let total: f64 = ws
        .iter()
        .filter(|(v, _)| v.len() == need && table.is_legal_path(v.edges()))
        .map(|(_, x)| x.to_f64())
        .sum();
    Ok(total / (2.0 * w))
}

/// Legal ends of the maximal bad segments of a circuit: the longest legal
/// prefix and suffix of each maximal run of bad edges.
pub fn legal_ends(table: &LegalityTable, w: &Circuit, c: usize) -> Vec<Vec<Edge>> {
    let root = w.word();
    let n = root.len();
    let good = good_edges(table, &root, c);
    let Some(start) = good.iter().position(|&x| x) else {
        return Vec::new();
    };
    let legal = junction_legality(table, &root);
    let mut ends = Vec::new();
    let mut i = 0;
    while i < n {
        let p = (start + i) % n;
        if good[p] {
            i += 1;
            continue;
        }
        let mut run = Vec::new();
        while i < n && !good[(start + i) % n] {
            run.push((start + i) % n);
            i += 1;
        }
        // legal prefix: extend while the junction before the next edge is legal
        let mut pre = 1;
        while pre < run.len() && legal[run[pre]] {
            pre += 1;
        }
        let mut suf = 1;
        while suf < run.len() && legal[run[run.len() - suf]] {
            suf += 1;
        }
        ends.push(run[..pre].iter().map(|&q| root[q]).collect());
        ends.push(run[run.len() - suf..].iter().map(|&q| root[q]).collect());
    }
    ends
}

/// `ILT([f^m(c)])` for `m <= n`, by explicit iteration.
pub fn ilt_trajectory(f: &GraphMap, w: &Circuit, n: usize) -> Result<Vec<u64>> {
    let table = f.legality();
    let mut c = w.clone();
    let mut out = alloc::vec![table.illegal_turn_count(&c)];
    for _ in 0..n {
        c = f.iterate_circuit(&c, 1, DEFAULT_WORD_CAP)?;
        out.push(table.illegal_turn_count(&c));
    }
    Ok(out)
}
