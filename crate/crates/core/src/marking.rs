//! Markings: identifications of a free basis with loops in a graph.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::circuit::{cyclic_reduce, Circuit};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::path::{reduce_edges, EdgePath};

/// A marking of a graph `G` by a free basis. Basis words live on a rose
/// whose petals are the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    base: VertexId,
    basis: Graph,
    loops: Vec<EdgePath>,
    edge_words: Vec<EdgePath>,
}

impl Marking {
    /// The tautological marking of a rose: generators are the edges.
    pub fn identity(g: &Graph) -> Result<Marking> {
        if !g.is_rose() {
            return Err(Error::Invalid(
                "a marking must be given for graphs that are not roses".into(),
            ));
        }
        let names: Vec<&str> = g.positive_edges().map(|e| g.edge_name(e)).collect();
        let basis = Graph::rose(&names);
        let loops: Vec<EdgePath> = g.positive_edges().map(EdgePath::single).collect();
        Ok(Marking {
            base: 0,
            basis,
            edge_words: loops.clone(),
            loops,
        })
    }

    /// Builds a marking from generator loops (paths in `g`) and, for every
    /// positive edge of `g`, its word in the generators (comma token syntax).
    /// Edge words may be omitted on roses where the loops are single edges.
    pub fn new(
        g: &Graph,
        base: &str,
        generators: &[(String, String)],
        edge_words: Option<&[(String, String)]>,
    ) -> Result<Marking> {
        let base = g
            .vertex_by_name(base)
            .ok_or_else(|| Error::UnknownVertex(base.to_string()))?;
        if generators.len() != g.rank() {
            return Err(Error::Invalid(alloc::format!(
                "marking has {} generators but the graph has rank {}",
                generators.len(),
                g.rank()
            )));
        }
        let names: Vec<&str> = generators.iter().map(|(n, _)| n.as_str()).collect();
        let basis = Graph::new(
            "basis",
            &["*"],
            &names.iter().map(|n| (*n, "*", "*")).collect::<Vec<_>>(),
        )?;
        let mut loops = Vec::with_capacity(generators.len());
        for (name, word) in generators {
            let p = g.parse_word(word)?;
            if p.is_empty()
                || g.origin(p.first().unwrap()) != base
                || g.terminus(p.last().unwrap()) != base
            {
                return Err(Error::MarkingBase(name.clone()));
            }
            loops.push(p);
        }
        let edge_words = match edge_words {
            Some(words) => {
                let mut out = alloc::vec![None; g.edge_count()];
                for (edge, word) in words {
                    let e = g.edge_by_token(edge)?;
                    let mut w = basis.parse_word(word)?;
                    if e.is_inverse() {
                        w = w.inverse();
                    }
                    out[e.index()] = Some(w);
                }
                out.into_iter()
                    .enumerate()
                    .map(|(i, w)| {
                        w.ok_or_else(|| {
                            Error::Invalid(alloc::format!(
                                "marking has no word for edge `{}`",
                                g.edge_name(crate::Edge::positive(i))
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            }
            None => {
                // loops that are single distinct edges determine the inverse
                let mut out = alloc::vec![EdgePath::empty(); g.edge_count()];
                let mut covered = alloc::vec![false; g.edge_count()];
                for (i, p) in loops.iter().enumerate() {
                    if p.len() != 1 {
                        return Err(Error::Invalid("marking edge words are required when generator loops are longer than one edge".into()));
                    }
                    let e = p.first().unwrap();
                    let x = EdgePath::single(crate::Edge::positive(i));
                    out[e.index()] = if e.is_inverse() { x.inverse() } else { x };
                    covered[e.index()] = true;
                }
                if covered.iter().any(|c| !c) {
                    return Err(Error::Invalid("marking edge words are required".into()));
                }
                out
            }
        };
        let m = Marking {
            base,
            basis,
            loops,
            edge_words,
        };
        for (i, (name, _)) in generators.iter().enumerate() {
            let back = m.to_basis(&m.loops[i]);
            let expected = Circuit::from_cyclic(&[crate::Edge::positive(i)], 1);
            match cyclic_reduce(&m.basis, &back) {
                Ok((c, _)) if c == expected => {}
                _ => return Err(Error::MarkingRoundTrip(name.clone())),
            }
        }
        Ok(m)
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    /// The rose carrying basis words.
    pub fn basis(&self) -> &Graph {
        &self.basis
    }

    pub fn generator_loop(&self, i: usize) -> &EdgePath {
        &self.loops[i]
    }

    /// Path in the graph realizing a basis word, reduced.
    pub fn to_graph(&self, word: &EdgePath) -> EdgePath {
        let mut out = Vec::new();
        for &x in word.edges() {
            let l = &self.loops[x.index()];
            if x.is_inverse() {
                out.extend(l.inverse().into_edges());
            } else {
                out.extend_from_slice(l.edges());
            }
        }
        EdgePath::new(reduce_edges(&out))
    }

    /// Basis word of a path in the graph, reduced.
    pub fn to_basis(&self, p: &EdgePath) -> EdgePath {
        let mut out = Vec::new();
        for &e in p.edges() {
            let w = &self.edge_words[e.index()];
            if e.is_inverse() {
                out.extend(w.inverse().into_edges());
            } else {
                out.extend_from_slice(w.edges());
            }
        }
        EdgePath::new(reduce_edges(&out))
    }

    /// Conjugacy class in the graph of a basis word given in text.
    pub fn circuit_of(&self, g: &Graph, text: &str) -> Result<Circuit> {
        let word = self.basis.parse_word(text)?.reduce();
        cyclic_reduce(g, &self.to_graph(&word)).map(|(c, _)| c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rose_identity_marking() {
        let g = Graph::rose(&["a", "b"]);
        let m = Marking::identity(&g).unwrap();
        let c = m.circuit_of(&g, "a,b,a^-1").unwrap();
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn theta_graph_marking_round_trips() {
        let g = Graph::new(
            "theta",
            &["u", "w"],
            &[("p", "u", "w"), ("q", "u", "w"), ("r", "u", "w")],
        )
        .unwrap();
        let gens = [("x".into(), "p,q^-1".into()), ("y".into(), "p,r^-1".into())];
        let words = [
            ("p".into(), "".into()),
            ("q".into(), "x^-1".into()),
            ("r".into(), "y^-1".into()),
        ];
        let m = Marking::new(&g, "u", &gens, Some(&words)).unwrap();
        let c = m.circuit_of(&g, "x,y^-1").unwrap();
        assert_eq!(g.format_edges(c.root()), "q^-1,r");
        let bad = [
            ("p".into(), "".into()),
            ("q".into(), "x".into()),
            ("r".into(), "y^-1".into()),
        ];
        assert_eq!(
            Marking::new(&g, "u", &gens, Some(&bad)),
            Err(Error::MarkingRoundTrip("x".into()))
        );
        let off_base = [("x".into(), "p".into()), ("y".into(), "p,r^-1".into())];
        assert_eq!(
            Marking::new(&g, "u", &off_base, Some(&words)),
            Err(Error::MarkingBase("x".into()))
        );
    }
}
