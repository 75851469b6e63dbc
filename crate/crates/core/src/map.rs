//! Tight graph self-maps, turn legality and train-track certification.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use crate::matrix::{Irreducibility, Matrix};
use crate::path::{inverse_edges, is_reduced, push_reduced, reduce_edges, EdgePath, Turn};

/// Default cap on explicit word length during iteration.
pub const DEFAULT_WORD_CAP: usize = 10_000_000;

/// A tight self-map of a graph, given by edge-image words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    name: String,
    graph: Graph,
    vertex_images: Vec<VertexId>,
    /// Images indexed by signed edge id.
    images: Vec<Vec<Edge>>,
}

impl GraphMap {
    /// Builds a map from images of positive edges. Vertex images are
    /// inferred from the edge images when `vertex_images` is `None`.
    pub fn new(
        name: &str,
        graph: Graph,
        vertex_images: Option<Vec<VertexId>>,
        positive_images: Vec<EdgePath>,
    ) -> Result<GraphMap> {
        if positive_images.len() != graph.edge_count() {
            return Err(Error::Invalid(alloc::format!(
                "map gives {} edge images for {} edges",
                positive_images.len(),
                graph.edge_count()
            )));
        }
        let mut images = vec![Vec::new(); 2 * graph.edge_count()];
        for (i, p) in positive_images.into_iter().enumerate() {
            let e = Edge::positive(i);
            let name = graph.edge_name(e).to_string();
            if p.is_empty() {
                return Err(Error::EmptyImage { edge: name });
            }
            if !p.is_reduced() {
                return Err(Error::NotTight { edge: name });
            }
            graph.path(p.edges().to_vec())?;
            images[e.inv().id()] = inverse_edges(p.edges());
            images[e.id()] = p.into_edges();
        }
        let vertex_images = match vertex_images {
            Some(v) => v,
            None => {
                let mut v = vec![usize::MAX; graph.vertex_count()];
                for e in graph.edges() {
                    v[graph.origin(e)] = graph.origin(images[e.id()][0]);
                }
                v
            }
        };
        for e in graph.edges() {
            let img = &images[e.id()];
            if graph.origin(img[0]) != vertex_images[graph.origin(e)]
                || graph.terminus(*img.last().unwrap()) != vertex_images[graph.terminus(e)]
            {
                return Err(Error::EndpointInconsistent {
                    edge: graph.token(e),
                });
            }
        }
        Ok(GraphMap {
            name: name.to_string(),
            graph,
            vertex_images,
            images,
        })
    }

    /// Parses positive edge images from `(edge, word)` text pairs. An entry
    /// keyed by an inverse token must agree with the inverse of the positive
    /// image.
    pub fn from_words(
        name: &str,
        graph: Graph,
        vertex_images: Option<Vec<VertexId>>,
        words: &[(String, String)],
    ) -> Result<GraphMap> {
        let mut positive: Vec<Option<EdgePath>> = vec![None; graph.edge_count()];
        let mut negative: Vec<(Edge, EdgePath)> = Vec::new();
        for (edge, word) in words {
            let e = graph.edge_by_token(edge)?;
            let p = graph.parse_word(word)?;
            if e.is_inverse() {
                negative.push((e, p));
            } else if positive[e.index()].replace(p).is_some() {
                return Err(Error::DuplicateName(edge.clone()));
            }
        }
        for (e, p) in &negative {
            match &positive[e.index()] {
                Some(q) if q.inverse() == *p => {}
                Some(_) => {
                    return Err(Error::NotEquivariant {
                        edge: graph.token(*e),
                    })
                }
                None => positive[e.index()] = Some(p.inverse()),
            }
        }
        let positive = positive
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| Error::EmptyImage {
                    edge: graph.edge_name(Edge::positive(i)).to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GraphMap::new(name, graph, vertex_images, positive)
    }

    /// Identity map of a graph.
    pub fn identity(graph: Graph) -> GraphMap {
        let images = graph.edges().map(|e| vec![e]).collect();
        let vertex_images = (0..graph.vertex_count()).collect();
        GraphMap {
            name: "identity".into(),
            graph,
            vertex_images,
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_images[v]
    }

    pub fn image(&self, e: Edge) -> &[Edge] {
        &self.images[e.id()]
    }

    /// Derivative `Df`: first edge of the image.
    pub fn derivative(&self, e: Edge) -> Edge {
        self.images[e.id()][0]
    }

    pub fn format_image(&self, e: Edge) -> String {
        self.graph.format_edges(self.image(e))
    }

    /// Unreduced concatenation of images.
    pub fn image_of_edges(&self, w: &[Edge]) -> Vec<Edge> {
        let mut out = Vec::new();
        for &e in w {
            out.extend_from_slice(self.image(e));
        }
        out
    }

    /// `[f(w)]`, reducing while concatenating.
    pub fn apply_edges(&self, w: &[Edge]) -> Vec<Edge> {
        let mut out = Vec::new();
        for &e in w {
            for &x in self.image(e) {
                push_reduced(&mut out, x);
            }
        }
        out
    }

    pub fn apply(&self, p: &EdgePath) -> EdgePath {
        EdgePath::new(self.apply_edges(p.edges()))
    }

    /// `[f(c)]`, cyclically reduced, multiplicity preserved.
    pub fn apply_circuit(&self, c: &Circuit) -> Result<Circuit> {
        let w = cyclic_tighten(self.apply_edges(c.root()));
        if w.is_empty() {
            return Err(Error::EmptyCircuit);
        }
        Ok(Circuit::from_cyclic(&w, c.multiplicity()))
    }

    /// `[f^n(p)]` with reduction after every step.
    pub fn iterate(&self, p: &EdgePath, n: usize, cap: usize) -> Result<EdgePath> {
        let mut w = reduce_edges(p.edges());
        for _ in 0..n {
            w = self.apply_edges(&w);
            if w.len() > cap {
                return Err(Error::ResourceCap { cap });
            }
        }
        Ok(EdgePath::new(w))
    }

    pub fn iterate_circuit(&self, c: &Circuit, n: usize, cap: usize) -> Result<Circuit> {
        let mut w = c.root().to_vec();
        for _ in 0..n {
            w = cyclic_tighten(self.apply_edges(&w));
            if w.is_empty() {
                return Err(Error::EmptyCircuit);
            }
            if w.len() as u64 * c.multiplicity() > cap as u64 {
                return Err(Error::ResourceCap { cap });
            }
        }
        Ok(Circuit::from_cyclic(&w, c.multiplicity()))
    }

    /// `f ∘ g` (apply `g` first), tightened.
    pub fn compose(&self, g: &GraphMap) -> Result<GraphMap> {
        if self.graph != g.graph {
            return Err(Error::GraphMismatch);
        }
        let positive = self
            .graph
            .positive_edges()
            .map(|e| EdgePath::new(self.apply_edges(g.image(e))))
            .collect();
        let vertices = g
            .vertex_images
            .iter()
            .map(|&v| self.vertex_images[v])
            .collect();
        GraphMap::new(&self.name, self.graph.clone(), Some(vertices), positive)
    }

    /// `f^k` for `k >= 1`, tightened.
    pub fn power(&self, k: usize) -> Result<GraphMap> {
        assert!(k >= 1, "power must be positive");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.compose(&acc)?;
        }
        if k > 1 {
            acc.name = alloc::format!("{}^{}", self.name, k);
        }
        Ok(acc)
    }

    /// `M(f)[i][j] = <e_i, f(e_j)>`.
    pub fn transition_matrix(&self) -> Matrix {
        let m = self.graph.edge_count();
        let mut out = Matrix::zeros(m);
        for j in 0..m {
            for &x in self.image(Edge::positive(j)) {
                out.add_to(x.index(), j, 1);
            }
        }
        out
    }

    /// Signed letter matrix: entry `[x][y]` counts occurrences of signed edge
    /// `x` in `f(y)`, indexed by signed edge ids.
    pub fn signed_matrix(&self) -> Vec<Vec<u64>> {
        let n = 2 * self.graph.edge_count();
        let mut out = vec![vec![0; n]; n];
        for y in self.graph.edges() {
            for &x in self.image(y) {
                out[x.id()][y.id()] += 1;
            }
        }
        out
    }

    pub fn legality(&self) -> LegalityTable {
        LegalityTable::new(self)
    }

    /// Certifies train-trackness via the turn criterion.
    pub fn train_track_certificate(&self) -> TrainTrackCertificate {
        let table = self.legality();
        for e in self.graph.positive_edges() {
            for t in EdgePath::new(self.image(e).to_vec()).turns() {
                if !table.is_legal(t) {
                    let at = self.first_cancellation(e, 64);
                    return TrainTrackCertificate::Fails {
                        edge: e,
                        turn: t,
                        cancellation_at: at,
                    };
                }
            }
        }
        TrainTrackCertificate::Holds {
            checked_turns: table.len(),
        }
    }

    pub fn is_train_track(&self) -> bool {
        matches!(
            self.train_track_certificate(),
            TrainTrackCertificate::Holds { .. }
        )
    }

    /// Least `k <= max_k` such that `f` applied to `[f^(k-1)(e)]` cancels.
    pub fn first_cancellation(&self, e: Edge, max_k: usize) -> Option<usize> {
        let mut w = vec![e];
        for k in 1..=max_k {
            let raw = self.image_of_edges(&w);
            let reduced = reduce_edges(&raw);
            if reduced.len() < raw.len() {
                return Some(k);
            }
            if reduced.len() > 1 << 20 {
                return None;
            }
            w = reduced;
        }
        None
    }

    /// Least `k` such that `M(f^k) > 0`, every periodic direction is fixed
    /// by `Df^k`, and every edge image of `f^k` has at least two edges.
    /// Returns `k` together with `f^k`.
    pub fn normalize_power(&self) -> Result<(usize, GraphMap)> {
        if !self.is_train_track() {
            return Err(Error::NotTrainTrack);
        }
        let m = self.transition_matrix();
        let exponent = match m.irreducibility() {
            Irreducibility::Primitive { exponent } => exponent,
            _ => return Err(Error::NotPrimitive),
        };
        let period = self.direction_period();
        let mut k = 1usize;
        let mut pow = m.clone();
        let cap = exponent.max(2) * period * 8;
        while k <= cap {
            let expands = pow.column_sums().iter().all(|&s| s >= 2);
            if k % period == 0 && k >= exponent && pow.is_positive() && expands {
                return Ok((k, self.power(k)?));
            }
            pow = pow.checked_mul(&m).ok_or(Error::NotExpanding)?;
            k += 1;
        }
        Err(Error::NotExpanding)
    }

    /// Directions lying on a cycle of `Df`, with cycle lengths.
    pub fn periodic_directions(&self) -> Vec<(Edge, usize)> {
        let mut out = Vec::new();
        for e in self.graph.edges() {
            let mut x = self.derivative(e);
            for p in 1..=2 * self.graph.edge_count() {
                if x == e {
                    out.push((e, p));
                    break;
                }
                x = self.derivative(x);
            }
        }
        out
    }

    /// lcm of the cycle lengths of `Df`.
    pub fn direction_period(&self) -> usize {
        self.periodic_directions()
            .iter()
            .fold(1, |acc, &(_, p)| lcm(acc, p))
    }

    /// Signed edges `e` with `f(e)` starting with `e`.
    pub fn fixed_directions(&self) -> Vec<Edge> {
        self.graph
            .edges()
            .filter(|&e| self.derivative(e) == e)
            .collect()
    }

    /// Minimal simplicial length of an edge image.
    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Σ_e ℓ(f(e))` over positive edges.
    pub fn total_image_len(&self) -> usize {
        self.graph
            .positive_edges()
            .map(|e| self.image(e).len())
            .sum()
    }
}

/// Cyclic reduction of a reduced word that may have cancelling ends.
pub fn cyclic_tighten(mut w: Vec<Edge>) -> Vec<Edge> {
    let (mut i, mut j) = (0usize, w.len());
    while j > i + 1 && w[i] == w[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    if i == j {
        return Vec::new();
    }
    w.truncate(j);
    w.drain(..i);
    w
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Outcome of the train-track check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrainTrackCertificate {
    /// Every turn crossed by an edge image is legal.
    Holds { checked_turns: usize },
    /// `f(edge)` crosses the illegal `turn`; iterating shows cancellation at
    /// step `cancellation_at` when found within the search cap.
    Fails {
        edge: Edge,
        turn: Turn,
        cancellation_at: Option<usize>,
    },
}

/// Legality of every non-degenerate turn with its `Tf`-orbit.
#[derive(Clone, Debug)]
pub struct LegalityTable {
    size: usize,
    legal: Vec<bool>,
    orbits: BTreeMap<Turn, Vec<Turn>>,
    derivative: Vec<Edge>,
}

impl LegalityTable {
    pub fn new(f: &GraphMap) -> LegalityTable {
        let g = f.graph();
        let size = 2 * g.edge_count();
        let mut legal = vec![false; size * size];
        let mut orbits = BTreeMap::new();
        let derivative: Vec<Edge> = g.edges().map(|e| f.derivative(e)).collect();
        for a in g.edges() {
            for b in g.edges() {
                if a >= b || g.origin(a) != g.origin(b) {
                    continue;
                }
                let start = Turn::new(a, b);
                let mut orbit = vec![start];
                let verdict = loop {
                    let t = orbit.last().unwrap().map(|e| derivative[e.id()]);
                    if t.is_degenerate() {
                        orbit.push(t);
                        break false;
                    }
                    if orbit.contains(&t) {
                        orbit.push(t);
                        break true;
                    }
                    orbit.push(t);
                };
                legal[a.id() * size + b.id()] = verdict;
                legal[b.id() * size + a.id()] = verdict;
                orbits.insert(start, orbit);
            }
        }
        LegalityTable {
            size,
            legal,
            orbits,
            derivative,
        }
    }

    /// Degenerate turns are illegal.
    #[inline]
    pub fn is_legal(&self, t: Turn) -> bool {
        self.legal[t.first().id() * self.size + t.second().id()]
    }

    /// Legality of the junction `x·y` in a path, i.e. the turn `{x^-1, y}`.
    #[inline]
    pub fn junction_legal(&self, x: Edge, y: Edge) -> bool {
        self.legal[x.inv().id() * self.size + y.id()]
    }

    pub fn orbit(&self, t: Turn) -> Option<&[Turn]> {
        self.orbits.get(&t).map(Vec::as_slice)
    }

    pub fn derivative(&self, e: Edge) -> Edge {
        self.derivative[e.id()]
    }

    /// Number of non-degenerate turns.
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn illegal_turns(&self) -> Vec<Turn> {
        self.orbits
            .keys()
            .copied()
            .filter(|&t| !self.is_legal(t))
            .collect()
    }

    pub fn is_legal_path(&self, w: &[Edge]) -> bool {
        is_reduced(w) && w.windows(2).all(|p| self.junction_legal(p[0], p[1]))
    }

    /// Number of illegal turns of a circuit, counting the wrap-around turn.
    pub fn illegal_turn_count(&self, c: &Circuit) -> u64 {
        let r = c.root();
        let n = r.len();
        (0..n)
            .filter(|&i| !self.junction_legal(r[i], r[(i + 1) % n]))
            .count() as u64
            * c.multiplicity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;

    fn turn(g: &Graph, a: &str, b: &str) -> Turn {
        Turn::new(g.edge_by_token(a).unwrap(), g.edge_by_token(b).unwrap())
    }

    #[test]
    fn fibonacci_legality() {
        let f = fibonacci();
        let g = f.graph();
        let t = f.legality();
        assert!(!t.is_legal(turn(g, "a", "b")));
        assert!(t.is_legal(turn(g, "a^-1", "b^-1")));
        assert!(t.is_legal(turn(g, "a", "a^-1")));
        assert_eq!(t.illegal_turns(), [turn(g, "a", "b")]);
        assert_eq!(
            t.orbit(turn(g, "a", "a^-1")).unwrap(),
            [
                turn(g, "a", "a^-1"),
                turn(g, "a", "b^-1"),
                turn(g, "a", "a^-1")
            ]
        );
    }

    #[test]
    fn train_track_examples() {
        assert!(fibonacci().is_train_track());
        assert!(map_p().is_train_track());
        let r = map_r();
        let g = r.graph();
        match r.train_track_certificate() {
            TrainTrackCertificate::Fails {
                edge,
                turn: t,
                cancellation_at,
            } => {
                assert_eq!(edge, g.edge_by_token("a").unwrap());
                assert_eq!(t, turn(g, "a^-1", "b"));
                assert_eq!(cancellation_at, Some(4));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn apply_and_iterate() {
        let f = fibonacci();
        let g = f.graph();
        let c = |s: &str| Circuit::new(g, &g.parse_word(s).unwrap()).unwrap();
        assert_eq!(f.apply_circuit(&c("a,b")).unwrap(), c("a,b,a"));
        assert_eq!(
            f.apply_circuit(&c("a,b,a^-1,b^-1")).unwrap(),
            c("b,a,b^-1,a^-1")
        );
        assert!(f.apply(&EdgePath::empty()).is_empty());
        let it = |s: &str, n| {
            g.format_path(
                &f.iterate(&g.parse_word(s).unwrap(), n, DEFAULT_WORD_CAP)
                    .unwrap(),
            )
        };
        assert_eq!(it("a", 3), "a,b,a,a,b");
        assert_eq!(it("a", 0), "a");
        assert_eq!(it("b", 2), "a,b");
        assert_eq!(
            f.iterate(&g.parse_word("a").unwrap(), 30, 1000),
            Err(Error::ResourceCap { cap: 1000 })
        );
    }

    #[test]
    fn transition_matrices() {
        assert_eq!(
            fibonacci().transition_matrix().rows(),
            [vec![1, 1], vec![1, 0]]
        );
        assert_eq!(
            GraphMap::identity(Graph::rose(&["a", "b"])).transition_matrix(),
            Matrix::identity(2)
        );
        assert_eq!(
            tribonacci().transition_matrix().rows(),
            [vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]
        );
    }

    #[test]
    fn normalization() {
        let (k, f2) = fibonacci().normalize_power().unwrap();
        assert_eq!(k, 2);
        assert_eq!(
            f2.format_image(f2.graph().edge_by_token("a").unwrap()),
            "a,b,a"
        );
        assert_eq!(map_p().normalize_power().unwrap().0, 2);
        assert_eq!(f2.normalize_power().unwrap().0, 1);
        assert_eq!(
            GraphMap::identity(Graph::rose(&["a", "b"])).normalize_power(),
            Err(Error::NotPrimitive)
        );
        assert_eq!(
            GraphMap::identity(Graph::rose(&["a"])).normalize_power(),
            Err(Error::NotExpanding)
        );
        assert_eq!(map_r().normalize_power(), Err(Error::NotTrainTrack));
    }

    #[test]
    fn equivariance_is_enforced() {
        let g = Graph::rose(&["a", "b"]);
        let words = [
            ("a".into(), "a,b".into()),
            ("b".into(), "a".into()),
            ("a^-1".into(), "a^-1,b^-1".into()),
        ];
        assert!(matches!(
            GraphMap::from_words("x", g.clone(), None, &words),
            Err(Error::NotEquivariant { .. })
        ));
        let words = [("a".into(), "a,b,b^-1".into()), ("b".into(), "a".into())];
        assert!(matches!(
            GraphMap::from_words("x", g, None, &words),
            Err(Error::NotTight { .. })
        ));
    }

    #[test]
    fn matrix_of_power_is_power_of_matrix() {
        for f in [fibonacci(), map_p(), tribonacci(), plastic()] {
            let m = f.transition_matrix();
            for k in 1..6 {
                assert_eq!(
                    f.power(k as usize).unwrap().transition_matrix(),
                    m.checked_pow(k).unwrap()
                );
            }
        }
    }
}
