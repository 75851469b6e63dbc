//! Finite graphs with an involution on signed edges.
//!
//! Positive edge `i` is encoded as `2i` and its inverse as `2i + 1`, so the
//! involution is a bit flip and the fixed edge ordering used for canonical
//! circuits is `e0 < e0^-1 < e1 < e1^-1 < ...`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::path::EdgePath;

/// A signed edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(u32);

impl Edge {
    pub const fn positive(index: usize) -> Edge {
        Edge((index as u32) << 1)
    }

    pub const fn from_id(id: usize) -> Edge {
        Edge(id as u32)
    }

    /// Dense id in `0..2m`.
    pub const fn id(self) -> usize {
        self.0 as usize
    }

    /// Index of the underlying positive edge.
    pub const fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub const fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub const fn inv(self) -> Edge {
        Edge(self.0 ^ 1)
    }

    pub const fn unsigned(self) -> Edge {
        Edge(self.0 & !1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "e{}^-1", self.index())
        } else {
            write!(f, "e{}", self.index())
        }
    }
}

pub type VertexId = usize;

/// A finite connected graph without valence-one vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    name: String,
    vertices: Vec<String>,
    edge_names: Vec<String>,
    ends: Vec<(VertexId, VertexId)>,
}

impl Graph {
    /// Builds and validates a graph from vertex names and `(name, from, to)`
    /// triples for the positive edges.
    pub fn new<S: AsRef<str>>(name: &str, vertices: &[S], edges: &[(S, S, S)]) -> Result<Graph> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateName(v.clone()));
            }
        }
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let lookup = |v: &str| {
            vertices
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnknownVertex(v.to_string()))
        };
        let mut edge_names = Vec::with_capacity(edges.len());
        let mut ends = Vec::with_capacity(edges.len());
        let mut names = BTreeSet::new();
        for (e, from, to) in edges {
            let e = e.as_ref();
            if e.is_empty() || e.contains(',') || e.contains('^') || e.contains(char::is_whitespace)
            {
                return Err(Error::Invalid(format!(
                    "edge name `{e}` is not a valid token"
                )));
            }
            if !names.insert(e.to_string()) {
                return Err(Error::DuplicateName(e.to_string()));
            }
            edge_names.push(e.to_string());
            ends.push((lookup(from.as_ref())?, lookup(to.as_ref())?));
        }
        let g = Graph {
            name: name.to_string(),
            vertices,
            edge_names,
            ends,
        };
        g.validate()?;
        Ok(g)
    }

    /// The rose with one vertex `v` and one petal per name.
    pub fn rose(names: &[&str]) -> Graph {
        let edges: Vec<(&str, &str, &str)> = names.iter().map(|n| (*n, "v", "v")).collect();
        Graph::new("rose", &["v"], &edges).expect("rose petals must have distinct token names")
    }

    fn validate(&self) -> Result<()> {
        let mut valence = vec![0usize; self.vertices.len()];
        for &(o, t) in &self.ends {
            valence[o] += 1;
            valence[t] += 1;
        }
        if let Some(v) = valence.iter().position(|&d| d < 2) {
            return Err(Error::LowValence(self.vertices[v].clone()));
        }
        // union-find would do; the graphs here are tiny
        let mut reached = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(v) = stack.pop() {
            for &(o, t) in &self.ends {
                for (a, b) in [(o, t), (t, o)] {
                    if a == v && !reached[b] {
                        reached[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Number of positive edges.
    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    /// Rank of the fundamental group.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_rose(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edge_count()).map(Edge::positive)
    }

    /// All signed edges in the fixed order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..2 * self.edge_count()).map(Edge::from_id)
    }

    pub fn origin(&self, e: Edge) -> VertexId {
        let (o, t) = self.ends[e.index()];
        if e.is_inverse() {
            t
        } else {
            o
        }
    }

    pub fn terminus(&self, e: Edge) -> VertexId {
        self.origin(e.inv())
    }

    /// Directions (signed edges) leaving `v`.
    pub fn directions_at(&self, v: VertexId) -> Vec<Edge> {
        self.edges().filter(|&e| self.origin(e) == v).collect()
    }

    pub fn edge_name(&self, e: Edge) -> &str {
        &self.edge_names[e.index()]
    }

    /// `a` or `a^-1`.
    pub fn token(&self, e: Edge) -> String {
        if e.is_inverse() {
            format!("{}^-1", self.edge_name(e))
        } else {
            self.edge_name(e).to_string()
        }
    }

    pub fn edge_by_token(&self, token: &str) -> Result<Edge> {
        let token = token.trim();
        let (name, inverse) = match token.strip_suffix("^-1") {
            Some(n) => (n.trim(), true),
            None => (token, false),
        };
        let i = self
            .edge_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownEdge(token.to_string()))?;
        let e = Edge::positive(i);
        Ok(if inverse { e.inv() } else { e })
    }

    fn compact_names(&self) -> bool {
        self.edge_names
            .iter()
            .all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
    }

    /// Parses a word in token syntax (`a,b^-1,a`) or, when every edge name is
    /// a single lowercase letter, the compact case-toggling form (`abA`).
    /// The result is not reduced.
    pub fn parse_word(&self, text: &str) -> Result<EdgePath> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(EdgePath::empty());
        }
        let edges: Vec<Edge> = if text.contains(',') || text.contains('^') || !self.compact_names()
        {
            text.split(',')
                .map(|t| self.edge_by_token(t))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    let e = self
                        .edge_by_token(&c.to_ascii_lowercase().to_string())
                        .map_err(|_| Error::UnknownEdge(c.to_string()))?;
                    Ok(if c.is_ascii_uppercase() { e.inv() } else { e })
                })
                .collect::<Result<_>>()?
        };
        self.path(edges)
    }

    /// Checks endpoint compatibility of consecutive edges.
    pub fn path(&self, edges: Vec<Edge>) -> Result<EdgePath> {
        for (i, w) in edges.windows(2).enumerate() {
            if self.terminus(w[0]) != self.origin(w[1]) {
                return Err(Error::EndpointMismatch { position: i });
            }
        }
        Ok(EdgePath::new(edges))
    }

    pub fn is_closed(&self, p: &EdgePath) -> bool {
        match (p.first(), p.last()) {
            (Some(f), Some(l)) => self.origin(f) == self.terminus(l),
            _ => true,
        }
    }

    /// Token-syntax rendering.
    pub fn format_edges(&self, edges: &[Edge]) -> String {
        let mut s = String::new();
        for (i, &e) in edges.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&self.token(e));
        }
        s
    }

    pub fn format_path(&self, p: &EdgePath) -> String {
        self.format_edges(p.edges())
    }

    /// All reduced paths with exactly `len >= 1` edges, in shortlex order.
    pub fn reduced_paths(&self, len: usize) -> Vec<EdgePath> {
        let mut out = Vec::new();
        if len == 0 {
            return out;
        }
        let mut stack: Vec<Edge> = Vec::with_capacity(len);
        self.extend_reduced(&mut stack, len, &mut |p| {
            out.push(EdgePath::new(p.to_vec()))
        });
        out
    }

    fn extend_reduced(&self, stack: &mut Vec<Edge>, len: usize, emit: &mut dyn FnMut(&[Edge])) {
        if stack.len() == len {
            emit(stack);
            return;
        }
        let candidates: Vec<Edge> = match stack.last() {
            None => self.edges().collect(),
            Some(&l) => self
                .directions_at(self.terminus(l))
                .into_iter()
                .filter(|&e| e != l.inv())
                .collect(),
        };
        for e in candidates {
            stack.push(e);
            self.extend_reduced(stack, len, emit);
            stack.pop();
        }
    }

    /// All reduced paths of length `1..=max_len`, shortlex order.
    pub fn reduced_paths_up_to(&self, max_len: usize) -> Vec<EdgePath> {
        (1..=max_len).flat_map(|l| self.reduced_paths(l)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_is_fixed_point_free() {
        let g = Graph::rose(&["a", "b"]);
        for e in g.edges() {
            assert_ne!(e, e.inv());
            assert_eq!(e.inv().inv(), e);
            assert_eq!(g.origin(e.inv()), g.terminus(e));
        }
    }

    #[test]
    fn parse_token_and_compact_forms() {
        let g = Graph::rose(&["a", "b"]);
        let p = g.parse_word("a,b").unwrap();
        assert_eq!(p.edges(), &[Edge::positive(0), Edge::positive(1)]);
        let q = g.parse_word("a,a^-1").unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.edges()[1], Edge::positive(0).inv());
        assert_eq!(g.parse_word("aB").unwrap(), g.parse_word("a,b^-1").unwrap());
        assert_eq!(g.parse_word("a,q"), Err(Error::UnknownEdge("q".into())));
    }

    #[test]
    fn compact_form_disabled_for_long_names() {
        let g = Graph::new("g", &["v"], &[("x1", "v", "v"), ("x2", "v", "v")]).unwrap();
        assert!(g.parse_word("x1x2").is_err());
        assert_eq!(g.parse_word("x1,x2^-1").unwrap().len(), 2);
    }

    #[test]
    fn endpoint_mismatch_is_reported() {
        // theta graph: u -a-> w, u -b-> w, u -c-> w
        let g = Graph::new(
            "theta",
            &["u", "w"],
            &[("a", "u", "w"), ("b", "u", "w"), ("c", "u", "w")],
        )
        .unwrap();
        assert_eq!(g.rank(), 2);
        assert!(g.parse_word("a,b^-1").is_ok());
        assert_eq!(
            g.parse_word("a,b"),
            Err(Error::EndpointMismatch { position: 0 })
        );
    }

    #[test]
    fn graph_validation() {
        assert_eq!(
            Graph::new("bad", &["u", "w"], &[("a", "u", "w"), ("b", "u", "u")]),
            Err(Error::LowValence("w".into()))
        );
        assert_eq!(
            Graph::new("bad", &["u", "w"], &[("a", "u", "u"), ("b", "w", "w")]),
            Err(Error::Disconnected)
        );
        assert!(matches!(
            Graph::new("bad", &["u"], &[("a", "u", "x")]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn reduced_path_counts() {
        let g = Graph::rose(&["a", "b"]);
        assert_eq!(g.reduced_paths(1).len(), 4);
        assert_eq!(g.reduced_paths(3).len(), 4 * 9);
        assert_eq!(g.reduced_paths_up_to(2).len(), 4 + 12);
    }
}
