//! Translation lengths in metric graphs and limit lengths for the trees of
//! a train-track map.

use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::map::GraphMap;
use crate::spectral::{map_pf, tt_metric, EdgeLengths, DEFAULT_TOL};

use super::packed::{PackedConfig, PackedIterator};

/// Iteration cap for [`limit_length`].
pub const LIMIT_LENGTH_CAP: usize = 400;

/// A marked metric graph, i.e. a point of outer space up to scaling.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricGraphTree {
    pub graph: Graph,
    pub lengths: EdgeLengths,
}

impl MetricGraphTree {
    pub fn new(graph: Graph, lengths: EdgeLengths) -> Result<MetricGraphTree> {
        if lengths.as_slice().len() != graph.edge_count() {
            return Err(Error::Invalid("one length per edge is required".into()));
        }
        Ok(MetricGraphTree { graph, lengths })
    }

    pub fn unit(graph: Graph) -> MetricGraphTree {
        let lengths = EdgeLengths::unit(&graph);
        MetricGraphTree { graph, lengths }
    }

    /// Lengths from the left PF eigenvector of `f`.
    pub fn train_track(f: &GraphMap) -> Result<MetricGraphTree> {
        let pf = map_pf(f, DEFAULT_TOL)?;
        Ok(MetricGraphTree {
            graph: f.graph().clone(),
            lengths: tt_metric(&pf),
        })
    }
}

/// Occurrences of each positive edge in either orientation, times
/// multiplicity.
pub fn edge_counts(g: &Graph, w: &Circuit) -> Vec<u64> {
    let mut counts = alloc::vec![0u64; g.edge_count()];
    for e in w.root() {
        counts[e.index()] += w.multiplicity();
    }
    counts
}

/// `‖w‖_T`: edge lengths summed along `w`, accumulated per edge in index
/// order.
pub fn translation_length(t: &MetricGraphTree, w: &Circuit) -> f64 {
    let counts = edge_counts(&t.graph, w);
    t.lengths
        .as_slice()
        .iter()
        .zip(&counts)
        .map(|(&l, &k)| l * k as f64)
        .sum()
}

/// `‖w‖_{Tφ} = ‖φ(w)‖_T`.
pub fn twisted_length(t: &MetricGraphTree, phi: &GraphMap, w: &Circuit) -> Result<f64> {
    if phi.graph() != &t.graph {
        return Err(Error::GraphMismatch);
    }
    Ok(translation_length(t, &phi.apply_circuit(w)?))
}

/// Result of [`limit_length`].
#[derive(Clone, Debug, PartialEq)]
pub struct LimitLength {
    pub value: f64,
    pub steps: usize,
    pub lambda: f64,
}

/// `lim ℓ_tt([f^n(c)]) / λ^n`.
///
/// The estimates `e_n = ℓ_tt([f^n(c)]) / λ^n` never increase, and bounded
/// cancellation at the `ILT_n` illegal turns gives
/// `e_∞ >= e_n - 2 ILT_n C_f max_tt / (λ^n (λ - 1))`. Iteration stops once
/// this gap is below `tol` relative to `e_n`, or once `e_n` itself drops
/// below `tol · e_0` (a class with limit length zero).
pub fn limit_length(f: &GraphMap, w: &Circuit, tol: f64) -> Result<LimitLength> {
    let pf = map_pf(f, DEFAULT_TOL)?;
    if pf.lambda <= 1.0 {
        return Err(Error::NotExpanding);
    }
    let lengths = tt_metric(&pf);
    let max_tt = lengths.as_slice().iter().copied().fold(0.0, f64::max);
    let cf = super::cancellation::bcc_estimate(f, super::cancellation::DEFAULT_SEARCH_DEPTH)
        .configured_bound;
    let mut it = PackedIterator::new(f, PackedConfig::new(1, cf))?;
    let mut pc = it.start(w)?;
    let tt = |counts: &[f64]| -> f64 {
        lengths
            .as_slice()
            .iter()
            .zip(counts)
            .map(|(&l, &k)| l * k)
            .sum()
    };
    let e0 = tt(&it.edge_counts(&pc)?);
    let mut scale = 1.0;
    for n in 0..=LIMIT_LENGTH_CAP {
        if n > 0 {
            pc = it.step(&pc)?;
            scale *= pf.lambda;
        }
        let est = tt(&it.edge_counts(&pc)?) / scale;
        let gap = 2.0 * pc.ilt() as f64 * cf as f64 * max_tt / (scale * (pf.lambda - 1.0));
        if gap <= tol * est || est <= tol * e0 {
            return Ok(LimitLength {
                value: est,
                steps: n,
                lambda: pf.lambda,
            });
        }
    }
    Err(Error::NonConvergence {
        steps: LIMIT_LENGTH_CAP,
    })
}
