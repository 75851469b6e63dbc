//! Circuits: cyclically reduced closed paths up to rotation.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::path::{count_cyclic, inverse_edges, reduce_edges, EdgePath, Turn};

/// A conjugacy class, stored as the least rotation of its primitive root
/// together with a multiplicity, so `u^k` and `k * [u]` compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Circuit {
    root: Vec<Edge>,
    multiplicity: u64,
}

impl Circuit {
    /// Builds a circuit from a closed, cyclically reduced path.
    pub fn new(g: &Graph, p: &EdgePath) -> Result<Circuit> {
        if p.is_empty() {
            return Err(Error::EmptyCircuit);
        }
        if !g.is_closed(p) {
            return Err(Error::NotClosed);
        }
        if !p.is_reduced() || p.first() == p.last().map(Edge::inv) {
            return Err(Error::NotCyclicallyReduced);
        }
        Ok(Circuit::from_cyclic(p.edges(), 1))
    }

    /// Canonicalizes a nonempty cyclically reduced closed word without
    /// checking it.
    pub fn from_cyclic(edges: &[Edge], multiplicity: u64) -> Circuit {
        assert!(!edges.is_empty(), "circuit must be nonempty");
        let r = least_rotation(edges);
        let rotated: Vec<Edge> = edges[r..].iter().chain(&edges[..r]).copied().collect();
        let p = primitive_period(&rotated);
        let power = (rotated.len() / p) as u64;
        Circuit {
            root: rotated[..p].to_vec(),
            multiplicity: multiplicity * power,
        }
    }

    /// Canonical primitive root.
    pub fn root(&self) -> &[Edge] {
        &self.root
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn with_multiplicity(&self, k: u64) -> Circuit {
        Circuit {
            root: self.root.clone(),
            multiplicity: k,
        }
    }

    pub fn scale(&self, k: u64) -> Circuit {
        self.with_multiplicity(self.multiplicity * k)
    }

    /// Simplicial length, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.root.len() as u64 * self.multiplicity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The full cyclic word `root^multiplicity`.
    pub fn word(&self) -> Vec<Edge> {
        let mut w = Vec::with_capacity(self.len() as usize);
        for _ in 0..self.multiplicity {
            w.extend_from_slice(&self.root);
        }
        w
    }

    pub fn inverse(&self) -> Circuit {
        Circuit::from_cyclic(&inverse_edges(&self.root), self.multiplicity)
    }

    /// Same class up to orientation and multiplicity.
    pub fn same_ray(&self, other: &Circuit) -> bool {
        self.root == other.root || self.inverse().root == other.root
    }

    /// `<v, w>`: cyclic occurrences of `v` and `v^-1`, times multiplicity.
    pub fn occurrences(&self, v: &[Edge]) -> u64 {
        if v.is_empty() {
            return 0;
        }
        (count_cyclic(v, &self.root) + count_cyclic(&inverse_edges(v), &self.root))
            * self.multiplicity
    }

    /// Turns at every junction including the wrap-around one.
    pub fn turns(&self) -> Vec<Turn> {
        let w = self.word();
        let n = w.len();
        (0..n)
            .map(|i| Turn::new(w[i].inv(), w[(i + 1) % n]))
            .collect()
    }
}

/// `p = u c u^-1` after reduction. Returns the circuit and the conjugator `u`.
pub fn cyclic_reduce(g: &Graph, p: &EdgePath) -> Result<(Circuit, EdgePath)> {
    if !g.is_closed(p) {
        return Err(Error::NotClosed);
    }
    let w = reduce_edges(p.edges());
    let (mut i, mut j) = (0usize, w.len());
    while j > i + 1 && w[i] == w[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    if i == j {
        return Err(Error::EmptyCircuit);
    }
    Ok((
        Circuit::from_cyclic(&w[i..j], 1),
        EdgePath::new(w[..i].to_vec()),
    ))
}

/// Start index of the lexicographically least rotation.
pub fn least_rotation(s: &[Edge]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Length of the primitive root of `s` (smallest period dividing `len`).
pub fn primitive_period(s: &[Edge]) -> usize {
    let n = s.len();
    let mut fail = alloc::vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n % p == 0 {
        p
    } else {
        n
    }
}
