//! Edge paths, free reduction, turns and occurrence counting.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::graph::Edge;

/// A sequence of signed edges. Ordered shortlex: by length, then
/// lexicographically in the fixed edge order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct EdgePath(Vec<Edge>);

impl EdgePath {
    /// Wraps edges without checking endpoint compatibility; use
    /// [`Graph::path`](crate::graph::Graph::path) for checked construction.
    pub fn new(edges: Vec<Edge>) -> EdgePath {
        EdgePath(edges)
    }

    pub fn empty() -> EdgePath {
        EdgePath(Vec::new())
    }

    pub fn single(e: Edge) -> EdgePath {
        EdgePath(alloc::vec![e])
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Edge> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Edge> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> EdgePath {
        EdgePath(inverse_edges(&self.0))
    }

    pub fn concat(&self, other: &EdgePath) -> EdgePath {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        EdgePath(v)
    }

    pub fn is_reduced(&self) -> bool {
        is_reduced(&self.0)
    }

    /// Free reduction.
    pub fn reduce(&self) -> EdgePath {
        EdgePath(reduce_edges(&self.0))
    }

    /// Linear count of occurrences of `v` or `v^-1` in this path.
    pub fn occurrences_of(&self, v: &EdgePath) -> u64 {
        count_linear(&v.0, &self.0) + count_linear(&inverse_edges(&v.0), &self.0)
    }

    /// Turns at the interior junctions.
    pub fn turns(&self) -> Vec<Turn> {
        self.0
            .windows(2)
            .map(|w| Turn::new(w[0].inv(), w[1]))
            .collect()
    }
}

impl Ord for EdgePath {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for EdgePath {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Edge>> for EdgePath {
    fn from(v: Vec<Edge>) -> Self {
        EdgePath(v)
    }
}

pub fn inverse_edges(edges: &[Edge]) -> Vec<Edge> {
    edges.iter().rev().map(|e| e.inv()).collect()
}

pub fn is_reduced(edges: &[Edge]) -> bool {
    edges.windows(2).all(|w| w[1] != w[0].inv())
}

/// Stack-based free reduction.
pub fn reduce_edges(edges: &[Edge]) -> Vec<Edge> {
    let mut out: Vec<Edge> = Vec::with_capacity(edges.len());
    for &e in edges {
        push_reduced(&mut out, e);
    }
    out
}

/// Appends `e` to a reduced word, cancelling against the last edge.
#[inline]
pub fn push_reduced(word: &mut Vec<Edge>, e: Edge) {
    if word.last() == Some(&e.inv()) {
        word.pop();
    } else {
        word.push(e);
    }
}

/// Number of start positions of `v` in `w`, no wrap-around.
pub fn count_linear(v: &[Edge], w: &[Edge]) -> u64 {
    if v.is_empty() || v.len() > w.len() {
        return 0;
    }
    w.windows(v.len()).filter(|win| *win == v).count() as u64
}

/// Number of start positions of `v` in the cyclic word `w`. The pattern may
/// wrap around `w` several times.
pub fn count_cyclic(v: &[Edge], w: &[Edge]) -> u64 {
    let n = w.len();
    if v.is_empty() || n == 0 {
        return 0;
    }
    (0..n)
        .filter(|&i| v.iter().enumerate().all(|(j, &e)| w[(i + j) % n] == e))
        .count() as u64
}

/// Length of the longest common prefix.
pub fn common_prefix(a: &[Edge], b: &[Edge]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// An unordered pair of directions at a vertex, stored sorted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Turn(Edge, Edge);

impl Turn {
    pub fn new(a: Edge, b: Edge) -> Turn {
        if a <= b {
            Turn(a, b)
        } else {
            Turn(b, a)
        }
    }

    pub fn first(self) -> Edge {
        self.0
    }

    pub fn second(self) -> Edge {
        self.1
    }

    pub fn is_degenerate(self) -> bool {
        self.0 == self.1
    }

    /// Maps both directions through `d`.
    pub fn map(self, d: impl Fn(Edge) -> Edge) -> Turn {
        Turn::new(d(self.0), d(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn rose() -> Graph {
        Graph::rose(&["a", "b", "c"])
    }

    #[test]
    fn reduce_examples() {
        let g = rose();
        assert_eq!(
            g.parse_word("a,b,b^-1,c").unwrap().reduce(),
            g.parse_word("a,c").unwrap()
        );
        assert_eq!(EdgePath::empty().reduce(), EdgePath::empty());
        assert!(g.parse_word("a,a^-1,b,b^-1").unwrap().reduce().is_empty());
    }

    #[test]
    fn shortlex_order() {
        let g = rose();
        let mut v = alloc::vec![
            g.parse_word("b,a").unwrap(),
            g.parse_word("a^-1").unwrap(),
            g.parse_word("a,b").unwrap(),
            g.parse_word("a").unwrap(),
        ];
        v.sort();
        let s: Vec<_> = v.iter().map(|p| g.format_path(p)).collect();
        assert_eq!(s, ["a", "a^-1", "a,b", "b,a"]);
    }

    #[test]
    fn linear_and_cyclic_counts() {
        let g = rose();
        let w = g.parse_word("a,b,a").unwrap();
        assert_eq!(count_linear(&[Edge::positive(0)], w.edges()), 2);
        let ab = g.parse_word("a,b").unwrap();
        assert_eq!(count_linear(ab.edges(), w.edges()), 1);
        // cyclically ba also occurs across the seam
        let ba = g.parse_word("a,a").unwrap();
        assert_eq!(count_linear(ba.edges(), w.edges()), 0);
        assert_eq!(count_cyclic(ba.edges(), w.edges()), 1);
        // pattern longer than the word wraps around
        assert_eq!(
            count_cyclic(g.parse_word("a,b,a,b,a").unwrap().edges(), ab.edges()),
            1
        );
    }

    #[test]
    fn turns_of_path() {
        let g = rose();
        assert!(g.parse_word("a").unwrap().turns().is_empty());
        let t = g.parse_word("a,b").unwrap().turns();
        assert_eq!(t, [Turn::new(Edge::positive(0).inv(), Edge::positive(1))]);
    }
}
