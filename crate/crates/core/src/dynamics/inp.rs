//! Search for indivisible Nielsen paths of a normalized train-track map.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::{GraphMap, LegalityTable};
use crate::path::{inverse_edges, EdgePath, Turn};
use crate::spectral::{map_pf, tt_metric, DEFAULT_TOL};

use super::cancellation::{bcc_estimate, DEFAULT_SEARCH_DEPTH};

/// Legal paths enumerated per tip before the search gives up.
pub const MAX_LEG_CANDIDATES: usize = 4_000_000;

/// `ρ = α^-1 β` with `α`, `β` legal and `[f(ρ)] = ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InpRecord {
    pub path: EdgePath,
    pub alpha: Vec<Edge>,
    pub beta: Vec<Edge>,
    /// The unique illegal turn `{α_1, β_1}`.
    pub tip: Turn,
    /// Common prefix `p` with `f(α) = p α` and `f(β) = p β`.
    pub prefix: Vec<Edge>,
    pub period: usize,
    /// Whether `ρ` is a loop.
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InpSearch {
    pub records: Vec<InpRecord>,
    /// Largest leg length (in edges) searched.
    pub leg_bound: usize,
    pub tips: Vec<Turn>,
    pub cancellation_bound: usize,
}

impl InpSearch {
    /// More than one INP means the input was not normalized.
    pub fn violates_uniqueness(&self) -> bool {
        self.records.len() > 1
    }

    pub fn has_closed(&self) -> bool {
        self.records.iter().any(|r| r.closed)
    }
}

/// Leg bound in edges: `ℓ_tt(α) <= C_f max_tt / (λ - 1)`, divided by the
/// shortest edge.
pub fn leg_bound(cf: usize, lambda: f64, max_tt: f64, min_tt: f64) -> usize {
    libm::ceil(cf as f64 * max_tt / ((lambda - 1.0) * min_tt)) as usize
}

/// All INPs with legs up to the bound derived from bounded cancellation.
pub fn inp_search(f: &GraphMap) -> Result<InpSearch> {
    let pf = map_pf(f, DEFAULT_TOL)?;
    if pf.lambda <= 1.0 {
        return Err(Error::NotExpanding);
    }
    let lengths = tt_metric(&pf);
    let max_tt = lengths.as_slice().iter().copied().fold(0.0, f64::max);
    let min_tt = lengths.as_slice().iter().copied().fold(f64::MAX, f64::min);
    let cf = bcc_estimate(f, DEFAULT_SEARCH_DEPTH).configured_bound;
    let bound = leg_bound(cf, pf.lambda, max_tt, min_tt).max(1);
    inp_search_with(f, bound, cf)
}

/// INP search with an explicit leg bound.
pub fn inp_search_with(f: &GraphMap, bound: usize, cancellation_bound: usize) -> Result<InpSearch> {
    let g = f.graph();
    let table = f.legality();
    let tips = table.illegal_turns();
    let mut records = Vec::new();
    for &tip in &tips {
        let (d1, d2) = (tip.first(), tip.second());
        let left = fixed_legs(f, &table, d1, bound)?;
        let right = fixed_legs(f, &table, d2, bound)?;
        for (alpha, p) in &left {
            for (beta, q) in &right {
                if p != q {
                    continue;
                }
                let mut rho = inverse_edges(alpha);
                rho.extend_from_slice(beta);
                let closed =
                    g.terminus(*alpha.last().unwrap()) == g.terminus(*beta.last().unwrap());
                records.push(InpRecord {
                    path: EdgePath::new(rho),
                    alpha: alpha.clone(),
                    beta: beta.clone(),
                    tip,
                    prefix: p.clone(),
                    period: 1,
                    closed,
                });
            }
        }
    }
    Ok(InpSearch {
        records,
        leg_bound: bound,
        tips,
        cancellation_bound,
    })
}

/// Legal paths `α` from direction `d` with `ℓ(α) <= bound` and `f(α) = p α`,
/// paired with `p`. The vertex at the tip must be fixed.
fn fixed_legs(
    f: &GraphMap,
    table: &LegalityTable,
    d: Edge,
    bound: usize,
) -> Result<Vec<(Vec<Edge>, Vec<Edge>)>> {
    let g = f.graph();
    let out = Vec::new();
    if f.vertex_image(g.origin(d)) != g.origin(d) {
        return Ok(out);
    }
    let mut leg = Legs {
        f,
        table,
        bound,
        path: alloc::vec![d],
        image: f.image(d).to_vec(),
        visited: 0,
        out,
    };
    leg.grow()?;
    Ok(leg.out)
}

struct Legs<'a> {
    f: &'a GraphMap,
    table: &'a LegalityTable,
    bound: usize,
    path: Vec<Edge>,
    image: Vec<Edge>,
    visited: usize,
    out: Vec<(Vec<Edge>, Vec<Edge>)>,
}

impl Legs<'_> {
    fn grow(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > MAX_LEG_CANDIDATES {
            return Err(Error::SearchTooLarge(alloc::format!(
                "INP legs exceed {MAX_LEG_CANDIDATES} candidates"
            )));
        }
        let n = self.path.len();
        let m = self.image.len();
        if m >= n && self.image[m - n..] == self.path[..] {
            self.out
                .push((self.path.clone(), self.image[..m - n].to_vec()));
        }
        if n == self.bound {
            return Ok(());
        }
        let g = self.f.graph();
        let last = self.path[n - 1];
        for e in g.directions_at(g.terminus(last)) {
            if e == last.inv() || !self.table.junction_legal(last, e) {
                continue;
            }
            self.path.push(e);
            self.image.extend_from_slice(self.f.image(e));
            self.grow()?;
            self.path.pop();
            self.image.truncate(m);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;

    #[test]
    fn legal_map_has_no_inp() {
        let doubling = GraphMap::from_words(
            "d",
            crate::graph::Graph::rose(&["a", "b"]),
            None,
            &[("a".into(), "a,b".into()), ("b".into(), "b,a".into())],
        )
        .unwrap();
        let s = inp_search(&doubling).unwrap();
        assert!(s.tips.is_empty());
        assert!(s.records.is_empty());
    }

    #[test]
    fn map_p_is_conjugate_to_fibonacci() {
        // P = ι F ι with ι inverting both generators, so P^2 has one INP
        let (_, p) = map_p().normalize_power().unwrap();
        let s = inp_search(&p).unwrap();
        assert_eq!(s.tips.len(), 1);
        assert_eq!(s.records.len(), 1);
        let g = p.graph();
        assert_eq!(s.records[0].path, g.parse_word("b,a,b^-1,a^-1").unwrap());
        assert!(s.records[0].closed);
    }

    #[test]
    fn fibonacci_square_has_one_closed_inp() {
        let (_, f2) = fibonacci().normalize_power().unwrap();
        let s = inp_search(&f2).unwrap();
        assert_eq!(s.records.len(), 1, "{:?}", s.records);
        let r = &s.records[0];
        let g = f2.graph();
        assert_eq!(
            g.format_path(&r.path),
            g.format_path(&g.parse_word("b^-1,a^-1,b,a").unwrap())
        );
        assert_eq!(f2.apply(&r.path), r.path);
        assert!(r.closed);
        assert!(!s.violates_uniqueness());
    }

    #[test]
    fn found_paths_are_fixed_with_one_illegal_turn() {
        for f in [
            fibonacci(),
            plastic(),
            tribonacci(),
            plastic_inverse(),
            fibonacci_inverse(),
        ] {
            let (_, h) = f.normalize_power().unwrap();
            let table = h.legality();
            for r in inp_search(&h).unwrap().records {
                assert_eq!(h.apply(&r.path), r.path);
                let illegal = r
                    .path
                    .edges()
                    .windows(2)
                    .filter(|p| !table.junction_legal(p[0], p[1]))
                    .count();
                assert_eq!(illegal, 1);
            }
        }
    }
}
