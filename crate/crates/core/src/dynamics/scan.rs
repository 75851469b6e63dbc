//! Heuristic scan for periodic conjugacy classes.

use alloc::vec::Vec;

use crate::circuit::{least_rotation, primitive_period, Circuit};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::GraphMap;
use crate::path::inverse_edges;

use super::inp::{inp_search, InpRecord};

/// Candidate words the scan may enumerate (about rank 3 at length 10).
pub const MAX_SCAN_WORDS: u64 = 12_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    GeometricEvidence,
    AtoroidalConsistent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::GeometricEvidence => "geometric-evidence",
            Verdict::AtoroidalConsistent => "atoroidal-consistent",
        }
    }
}

/// A class with `[f^k(c)]` equal to `c` (or `c^-1` when `inverted`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicClass {
    pub circuit: Circuit,
    pub period: usize,
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub max_len: usize,
    pub k_max: usize,
    pub classes_checked: u64,
    pub periodic: Vec<PeriodicClass>,
    pub closed_inps: Vec<InpRecord>,
    pub verdict: Verdict,
}

/// Enumerates primitive cyclically reduced classes of length `<= l`, up to
/// rotation and inversion, and reports those with `[f^k(c)] = c^±1` for
/// some `k <= k_max`. Closed INPs of the normalized power count as evidence
/// too.
pub fn hyperbolicity_scan(f: &GraphMap, l: usize, k_max: usize) -> Result<ScanReport> {
    let g = f.graph();
    if !g.is_rose() {
        return Err(Error::Invalid("the scan runs on maps of a rose".into()));
    }
    let letters = 2 * g.rank() as u64;
    let estimate = (1..l)
        .try_fold(letters, |acc, _| acc.checked_mul(letters - 1))
        .unwrap_or(u64::MAX);
    if estimate > MAX_SCAN_WORDS {
        return Err(Error::SearchTooLarge(alloc::format!(
            "{estimate} words of length {l} on rank {}",
            g.rank()
        )));
    }
    let alphabet: Vec<Edge> = g.edges().collect();
    let mut scan = Scan {
        f,
        alphabet: &alphabet,
        k_max,
        word: Vec::new(),
        checked: 0,
        periodic: Vec::new(),
    };
    for n in 1..=l {
        for &x in &alphabet {
            scan.word.push(x);
            scan.extend(n)?;
            scan.word.pop();
        }
    }
    let closed_inps = match f.normalize_power() {
        Ok((_, h)) => inp_search(&h)?
            .records
            .into_iter()
            .filter(|r| r.closed)
            .collect(),
        Err(_) => Vec::new(),
    };
    let verdict = if scan.periodic.is_empty() && closed_inps.is_empty() {
        Verdict::AtoroidalConsistent
    } else {
        Verdict::GeometricEvidence
    };
    Ok(ScanReport {
        max_len: l,
        k_max,
        classes_checked: scan.checked,
        periodic: scan.periodic,
        closed_inps,
        verdict,
    })
}

struct Scan<'a> {
    f: &'a GraphMap,
    alphabet: &'a [Edge],
    k_max: usize,
    word: Vec<Edge>,
    checked: u64,
    periodic: Vec<PeriodicClass>,
}

impl Scan<'_> {
    fn extend(&mut self, n: usize) -> Result<()> {
        let first = self.word[0];
        if self.word.len() == n {
            return self.visit();
        }
        let last = *self.word.last().unwrap();
        for i in 0..self.alphabet.len() {
            let e = self.alphabet[i];
            // a least rotation starts with its least letter
            if e < first || e == last.inv() {
                continue;
            }
            self.word.push(e);
            self.extend(n)?;
            self.word.pop();
        }
        Ok(())
    }

    fn visit(&mut self) -> Result<()> {
        let w = &self.word;
        let n = w.len();
        if w[n - 1] == w[0].inv() || least_rotation(w) != 0 || primitive_period(w) != n {
            return Ok(());
        }
        let inv = inverse_edges(w);
        let r = least_rotation(&inv);
        let inv_canon: Vec<Edge> = inv[r..].iter().chain(&inv[..r]).copied().collect();
        if inv_canon < *w {
            return Ok(());
        }
        self.checked += 1;
        let c = Circuit::from_cyclic(w, 1);
        let ci = c.inverse();
        let mut x = c.clone();
        for k in 1..=self.k_max {
            x = self.f.apply_circuit(&x)?;
            if x == c || x == ci {
                let inverted = x == ci && x != c;
                self.periodic.push(PeriodicClass {
                    circuit: c,
                    period: k,
                    inverted,
                });
                break;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;
    use crate::graph::Graph;

    #[test]
    fn fibonacci_commutator_is_periodic() {
        let f = fibonacci();
        let r = hyperbolicity_scan(&f, 4, 2).unwrap();
        assert_eq!(r.verdict, Verdict::GeometricEvidence);
        let g = f.graph();
        let comm = Circuit::new(g, &g.parse_word("a,b,a^-1,b^-1").unwrap()).unwrap();
        assert!(r
            .periodic
            .iter()
            .any(|p| p.circuit.same_ray(&comm) || p.circuit.same_ray(&comm.inverse())));
        assert!(!r.closed_inps.is_empty());
    }

    #[test]
    fn identity_is_all_periodic() {
        let id = GraphMap::identity(Graph::rose(&["a", "b"]));
        let r = hyperbolicity_scan(&id, 3, 1).unwrap();
        assert_eq!(r.periodic.len() as u64, r.classes_checked);
        assert_eq!(r.verdict, Verdict::GeometricEvidence);
    }

    #[test]
    fn class_count_matches_necklace_count() {
        // primitive cyclically reduced classes of length <= 2 in F_2 up to
        // inversion: a, b, ab, ab^-1
        let id = GraphMap::identity(Graph::rose(&["a", "b"]));
        let r = hyperbolicity_scan(&id, 2, 1).unwrap();
        assert_eq!(r.classes_checked, 4);
    }

    #[test]
    fn guard_rejects_large_scans() {
        assert!(matches!(
            hyperbolicity_scan(&plastic(), 12, 2),
            Err(Error::SearchTooLarge(_))
        ));
    }
}
