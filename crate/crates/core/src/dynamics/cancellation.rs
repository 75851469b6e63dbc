//! Bounded cancellation estimates.

use alloc::vec::Vec;

use crate::graph::Edge;
use crate::map::GraphMap;
use crate::path::{common_prefix, inverse_edges, reduce_edges};

/// Default search depth.
pub const DEFAULT_SEARCH_DEPTH: usize = 6;

/// Empirical bounded cancellation constant and the bound used downstream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CancellationEstimate {
    pub empirical_max: usize,
    pub search_depth: usize,
    pub configured_bound: usize,
}

/// Cancellation at the concatenation point of a reduced `ρ1 ρ2`:
/// `(ℓ[f(ρ1)] + ℓ[f(ρ2)] - ℓ[f(ρ1 ρ2)]) / 2`.
pub fn cancellation(f: &GraphMap, rho1: &[Edge], rho2: &[Edge]) -> usize {
    let a = f.apply_edges(rho1);
    let b = f.apply_edges(rho2);
    let mut joined = a.clone();
    joined.extend_from_slice(&b);
    (a.len() + b.len() - reduce_edges(&joined).len()) / 2
}

/// Largest cancellation over all reduced `ρ1 ρ2` with `ℓ(ρi) <= k`.
///
/// Writing `σ = ρ1^-1` and `τ = ρ2`, both start at the junction vertex with
/// different first edges and the cancellation is the common prefix of
/// `[f(σ)]` and `[f(τ)]`. After sorting all images, the best pair with
/// different first edges is adjacent somewhere in the order.
pub fn max_cancellation(f: &GraphMap, k: usize) -> usize {
    let g = f.graph();
    let mut best = 0;
    for v in 0..g.vertex_count() {
        let mut images: Vec<(Vec<Edge>, Edge)> = Vec::new();
        for p in g.reduced_paths_up_to(k) {
            let e = p.first().unwrap();
            if g.origin(e) == v {
                images.push((f.apply_edges(p.edges()), e));
            }
        }
        images.sort();
        for w in images.windows(2) {
            if w[0].1 != w[1].1 {
                best = best.max(common_prefix(&w[0].0, &w[1].0));
            }
        }
    }
    best
}

/// Empirical maximum at depth `k`; the configured bound is the empirical
/// value when depths `k - 1` and `k` agree, else `Σ_e ℓ(f(e))`.
pub fn bcc_estimate(f: &GraphMap, k: usize) -> CancellationEstimate {
    let k = k.max(2);
    let at_k = max_cancellation(f, k);
    let before = max_cancellation(f, k - 1);
    let configured_bound = if at_k == before {
        at_k
    } else {
        f.total_image_len().max(at_k)
    };
    CancellationEstimate {
        empirical_max: at_k,
        search_depth: k,
        configured_bound,
    }
}

/// Cancellation between `[f(σ)]` and `[f(τ)]` for paths from one vertex.
pub fn prefix_cancellation(f: &GraphMap, sigma: &[Edge], tau: &[Edge]) -> usize {
    common_prefix(&f.apply_edges(sigma), &f.apply_edges(tau))
}

/// `ρ1` as a path ending where `σ^-1` ends.
pub fn as_left_factor(sigma: &[Edge]) -> Vec<Edge> {
    inverse_edges(sigma)
}
