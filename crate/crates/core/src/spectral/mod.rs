//! Perron–Frobenius data, the train-track metric, orientation splitting,
//! block substitutions and limit frequencies.

mod blocks;
mod pf;

pub use blocks::{
    block_substitution, seeded_frequencies, stable_frequencies, BlockSubstitution, Frequencies,
    MAX_BLOCK_LEN,
};
pub use pf::{
    collatz_wielandt_bounds, digraph_period, pf_eigendata, pf_right_from, NonnegOperator, PfData,
    PfSolver, PowerIteration, SparseMatrix, DEFAULT_TOL,
};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::map::{GraphMap, DEFAULT_WORD_CAP};
use crate::path::EdgePath;

/// Positive edge lengths on a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeLengths(Vec<f64>);

impl EdgeLengths {
    pub fn new(lengths: Vec<f64>) -> Result<EdgeLengths> {
        if lengths
            .iter()
            .any(|&l| l.is_nan() || l <= 0.0 || l.is_infinite())
        {
            return Err(Error::Invalid("edge lengths must be positive".into()));
        }
        Ok(EdgeLengths(lengths))
    }

    pub fn unit(g: &Graph) -> EdgeLengths {
        EdgeLengths(alloc::vec![1.0; g.edge_count()])
    }

    pub fn get(&self, e: Edge) -> f64 {
        self.0[e.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Length of an edge word.
    pub fn length(&self, w: &[Edge]) -> f64 {
        w.iter().map(|&e| self.get(e)).sum()
    }

    /// `max / min` of the edge lengths, the bi-Lipschitz constant against
    /// the simplicial metric.
    pub fn bilipschitz(&self) -> f64 {
        let max = self.0.iter().copied().fold(f64::MIN, f64::max);
        let min = self.0.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }
}

/// Train-track metric: edge lengths from the left PF eigenvector.
pub fn tt_metric(pf: &PfData) -> EdgeLengths {
    EdgeLengths(pf.left.clone())
}

/// PF data of the transition matrix of `f`.
pub fn map_pf(f: &GraphMap, tol: f64) -> Result<PfData> {
    pf_eigendata(&f.transition_matrix(), tol)
}

/// Ratios `ℓ(f^{n+1}(e)) / ℓ(f^n(e))` for `n < n_max`, by explicit iteration.
pub fn stretch_estimate(f: &GraphMap, e: Edge, n_max: usize, cap: usize) -> Result<Vec<f64>> {
    let mut w = EdgePath::single(e);
    let mut ratios = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let next = f.iterate(&w, 1, cap)?;
        ratios.push(next.len() as f64 / w.len() as f64);
        w = next;
    }
    Ok(ratios)
}

/// Whether the substitution is orientation-preserving on a half of the
/// signed edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrientationType {
    /// For each edge only one of `e`, `e^-1` is reachable.
    Type1,
    /// Both orientations of every edge are reachable.
    Type2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationSplit {
    pub kind: OrientationType,
    /// Signed letters the substitution acts on: `E+` for Type1, all signed
    /// edges for Type2.
    pub alphabet: Vec<Edge>,
    /// The periodic edge the closure was computed from.
    pub periodic_edge: Edge,
}

impl OrientationSplit {
    pub fn positive_half(&self) -> Option<&[Edge]> {
        match self.kind {
            OrientationType::Type1 => Some(&self.alphabet),
            OrientationType::Type2 => None,
        }
    }
}

/// Signed letters occurring in some `f^n(e0)`.
pub fn letter_closure(f: &GraphMap, e0: Edge) -> BTreeSet<Edge> {
    let mut seen = BTreeSet::from([e0]);
    let mut stack = alloc::vec![e0];
    while let Some(x) = stack.pop() {
        for &y in f.image(x) {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

fn classify(g: &Graph, closure: &BTreeSet<Edge>) -> Result<OrientationType> {
    let mut single = 0;
    let mut double = 0;
    for e in g.positive_edges() {
        match (closure.contains(&e), closure.contains(&e.inv())) {
            (true, true) => double += 1,
            (false, false) => return Err(Error::NotPrimitive),
            _ => single += 1,
        }
    }
    match (single, double) {
        (_, 0) => Ok(OrientationType::Type1),
        (0, _) => Ok(OrientationType::Type2),
        _ => Err(Error::MixedOrientation),
    }
}

/// Type1/Type2 split from the least periodic edge `e0` with `f(e0)`
/// starting with `e0`; every other such edge must give the same type.
pub fn orientation_split(f: &GraphMap) -> Result<OrientationSplit> {
    let fixed = f.fixed_directions();
    let e0 = *fixed.first().ok_or(Error::NoPeriodicEdge)?;
    let closure = letter_closure(f, e0);
    let kind = classify(f.graph(), &closure)?;
    for &e in &fixed[1..] {
        if classify(f.graph(), &letter_closure(f, e))? != kind {
            return Err(Error::OrientationDisagreement);
        }
    }
    let alphabet = match kind {
        OrientationType::Type1 => closure.into_iter().collect(),
        OrientationType::Type2 => f.graph().edges().collect(),
    };
    Ok(OrientationSplit {
        kind,
        alphabet,
        periodic_edge: e0,
    })
}

/// Lengths `ℓ(f^n(e))` for `n <= n_max` by explicit iteration.
pub fn iterate_lengths(f: &GraphMap, e: Edge, n_max: usize) -> Result<Vec<usize>> {
    let mut w = EdgePath::single(e);
    let mut out = alloc::vec![1];
    for _ in 0..n_max {
        w = f.iterate(&w, 1, DEFAULT_WORD_CAP)?;
        out.push(w.len());
    }
    Ok(out)
}
