//! Geodesic currents truncated to weight systems on reduced paths.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Add;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::GraphMap;
use crate::path::{inverse_edges, EdgePath};
use crate::spectral::{stable_frequencies, EdgeLengths};

/// Value type of a weight system.
pub trait Value: Copy + PartialOrd + Default + Add<Output = Self> {
    fn to_f64(self) -> f64;
}

impl Value for u64 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Value for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

/// Where a weight system came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Rational,
    Stable,
    Unstable,
    Derived,
}

/// Values `<v, μ>` for reduced paths `v` with `1 <= ℓ(v) <= depth`. Absent
/// paths have value zero.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSystem<V> {
    depth: usize,
    values: BTreeMap<EdgePath, V>,
    provenance: Provenance,
    tolerance: f64,
}

impl<V: Value> WeightSystem<V> {
    pub fn from_map(
        depth: usize,
        values: BTreeMap<EdgePath, V>,
        provenance: Provenance,
        tolerance: f64,
    ) -> Self {
        let values = values
            .into_iter()
            .filter(|(k, v)| k.len() <= depth && *v > V::default())
            .collect();
        WeightSystem {
            depth,
            values,
            provenance,
            tolerance,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn value(&self, v: &[Edge]) -> V {
        self.values
            .get(&EdgePath::new(v.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    /// Nonzero entries in shortlex order.
    pub fn iter(&self) -> impl Iterator<Item = (&EdgePath, V)> {
        self.values.iter().map(|(k, &v)| (k, v))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// `w(μ) = ½ Σ_{e signed} <e, μ>`.
    pub fn weight(&self) -> f64 {
        0.5 * self
            .values
            .iter()
            .filter(|(k, _)| k.len() == 1)
            .map(|(_, v)| v.to_f64())
            .sum::<f64>()
    }

    pub fn to_f64(&self) -> WeightSystem<f64> {
        WeightSystem {
            depth: self.depth,
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v.to_f64()))
                .collect(),
            provenance: self.provenance,
            tolerance: self.tolerance,
        }
    }

    pub fn scaled(&self, c: f64) -> WeightSystem<f64> {
        let mut out = self.to_f64();
        out.values.values_mut().for_each(|v| *v *= c);
        out
    }

    /// Restriction to paths of length `<= depth`.
    pub fn truncate(&self, depth: usize) -> Self {
        WeightSystem::from_map(
            depth.min(self.depth),
            self.values.clone(),
            self.provenance,
            self.tolerance,
        )
    }

    /// Largest violation of flip symmetry.
    pub fn flip_residual(&self) -> f64 {
        self.values
            .iter()
            .map(|(k, v)| (v.to_f64() - self.value(&inverse_edges(k.edges())).to_f64()).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of the switch conditions
    /// `Σ_e <ve> = <v> = Σ_e <ev>` over paths `v` with `ℓ(v) < depth`.
    pub fn switch_residual(&self) -> f64 {
        let mut right: BTreeMap<EdgePath, f64> = BTreeMap::new();
        let mut left: BTreeMap<EdgePath, f64> = BTreeMap::new();
        let mut subjects: BTreeMap<EdgePath, ()> = BTreeMap::new();
        for (k, v) in &self.values {
            let e = k.edges();
            if e.len() < self.depth {
                subjects.insert(k.clone(), ());
            }
            if e.len() >= 2 {
                let pre = EdgePath::new(e[..e.len() - 1].to_vec());
                let suf = EdgePath::new(e[1..].to_vec());
                *right.entry(pre.clone()).or_insert(0.0) += v.to_f64();
                *left.entry(suf.clone()).or_insert(0.0) += v.to_f64();
                subjects.insert(pre, ());
                subjects.insert(suf, ());
            }
        }
        subjects
            .keys()
            .map(|v| {
                let x = self.value(v.edges()).to_f64();
                let r = right.get(v).copied().unwrap_or(0.0);
                let l = left.get(v).copied().unwrap_or(0.0);
                (x - r).abs().max((x - l).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// `η_c` truncated at `depth`: `value(v) = <v, c>`, cyclic, both
/// orientations, times multiplicity.
pub fn rational_current(c: &Circuit, depth: usize) -> WeightSystem<u64> {
    let root = c.root();
    let n = root.len();
    let k = c.multiplicity();
    let mut values: BTreeMap<EdgePath, u64> = BTreeMap::new();
    for i in 0..n {
        let mut w = Vec::with_capacity(depth);
        for l in 0..depth {
            w.push(root[(i + l) % n]);
            *values.entry(EdgePath::new(w.clone())).or_insert(0) += k;
            *values.entry(EdgePath::new(inverse_edges(&w))).or_insert(0) += k;
        }
    }
    WeightSystem {
        depth,
        values,
        provenance: Provenance::Rational,
        tolerance: 0.0,
    }
}

/// Exact weight of a rational current: its length times multiplicity.
pub fn rational_weight(ws: &WeightSystem<u64>) -> u64 {
    ws.values
        .iter()
        .filter(|(k, _)| k.len() == 1)
        .map(|(_, &v)| v)
        .sum::<u64>()
        / 2
}

/// `μ+` of a normalized train-track map at depth `depth`. The unstable
/// current is the stable current of an inverse representative.
pub fn stable_current(
    f: &GraphMap,
    depth: usize,
    tol: f64,
    provenance: Provenance,
) -> Result<WeightSystem<f64>> {
    let fr = stable_frequencies(f, depth, tol)?;
    let tolerance = (10.0 * fr.residual).max(f64::EPSILON);
    let values = fr.into_map();
    Ok(WeightSystem::from_map(depth, values, provenance, tolerance))
}

/// `φ η_c = η_{[φ(c)]}` on a rose.
pub fn pushforward(phi: &GraphMap, c: &Circuit) -> Result<Circuit> {
    if !phi.graph().is_rose() {
        return Err(Error::Invalid(
            "pushforward is defined for maps of a rose".into(),
        ));
    }
    phi.apply_circuit(c)
}

/// Projective max-distance over paths of length `<= depth`.
pub fn distance<A: Value, B: Value>(
    x: &WeightSystem<A>,
    y: &WeightSystem<B>,
    depth: usize,
) -> Result<f64> {
    let need = depth;
    for have in [x.depth, y.depth] {
        if have < need {
            return Err(Error::DepthTooSmall { have, need });
        }
    }
    let (wx, wy) = (x.weight(), y.weight());
    if wx <= 0.0 || wy <= 0.0 {
        return Err(Error::ZeroWeight);
    }
    let mut d: f64 = 0.0;
    for (k, v) in x.iter().filter(|(k, _)| k.len() <= depth) {
        d = d.max((v.to_f64() / wx - y.value(k.edges()).to_f64() / wy).abs());
    }
    for (k, v) in y.iter().filter(|(k, _)| k.len() <= depth) {
        d = d.max((x.value(k.edges()).to_f64() / wx - v.to_f64() / wy).abs());
    }
    Ok(d)
}

/// `<T, μ> = Σ_{e positive} ℓ_T(e) <e, μ>`.
pub fn intersection<V: Value>(lengths: &EdgeLengths, ws: &WeightSystem<V>) -> f64 {
    lengths
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &l)| l * ws.value(&[Edge::positive(i)]).to_f64())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;
    use crate::graph::Graph;
    use crate::spectral::DEFAULT_TOL;

    fn circ(g: &Graph, s: &str) -> Circuit {
        Circuit::new(g, &g.parse_word(s).unwrap()).unwrap()
    }

    #[test]
    fn rational_examples() {
        let g = Graph::rose(&["a", "b"]);
        let w = |s: &str| g.parse_word(s).unwrap().into_edges();
        let ab = rational_current(&circ(&g, "a,b"), 2);
        for s in ["a", "b", "a^-1", "b^-1", "a,b", "b,a"] {
            assert_eq!(ab.value(&w(s)), 1, "{s}");
        }
        assert_eq!(ab.value(&w("a,b^-1")), 0);
        assert_eq!(ab.weight(), 2.0);
        assert_eq!(rational_weight(&ab), 2);
        let aba2 = rational_current(&circ(&g, "a,b,a").scale(2), 1);
        assert_eq!(aba2.value(&w("a")), 4);
        assert_eq!(aba2.value(&w("b")), 2);
        assert_eq!(ab.switch_residual(), 0.0);
    }

    #[test]
    fn stable_current_examples() {
        let (_, f2) = fibonacci().normalize_power().unwrap();
        let g = f2.graph();
        let w = |s: &str| g.parse_word(s).unwrap().into_edges();
        let mu = stable_current(&f2, 2, DEFAULT_TOL, Provenance::Stable).unwrap();
        assert!((mu.value(&w("a,b")) - 0.3819660113).abs() < 1e-8);
        assert_eq!(mu.value(&w("b,b")), 0.0);
        assert_eq!(mu.value(&w("b^-1,a^-1")), mu.value(&w("a,b")));
        assert!((mu.weight() - 1.0).abs() < 1e-12);
        assert!(mu.switch_residual() < 1e-10);
    }

    #[test]
    fn pushforward_of_commutator_is_fixed() {
        let f = fibonacci();
        let g = f.graph();
        assert_eq!(pushforward(&f, &circ(g, "a")).unwrap(), circ(g, "a,b"));
        let c = circ(g, "a,b,a^-1,b^-1");
        let image = pushforward(&f, &c).unwrap();
        assert_eq!(image, circ(g, "b,a,b^-1,a^-1"));
        assert_eq!(rational_current(&image, 4), rational_current(&c, 4));
        assert_eq!(pushforward(&f, &c.scale(3)).unwrap(), image.scale(3));
    }

    #[test]
    fn distance_is_projective() {
        let g = Graph::rose(&["a", "b"]);
        let x = rational_current(&circ(&g, "a,b,a,b^-1"), 3);
        assert_eq!(distance(&x, &x, 3).unwrap(), 0.0);
        assert!(distance(&x, &x.scaled(7.5), 3).unwrap() < 1e-15);
        let empty = WeightSystem::<u64>::from_map(3, BTreeMap::new(), Provenance::Derived, 0.0);
        assert_eq!(distance(&x, &empty, 3), Err(Error::ZeroWeight));
        assert_eq!(
            distance(&x, &x, 4),
            Err(Error::DepthTooSmall { have: 3, need: 4 })
        );
    }

    #[test]
    fn fibonacci_iterate_approaches_stable_current() {
        let f = fibonacci();
        let g = f.graph();
        let w = f.iterate(&g.parse_word("a").unwrap(), 20, 1 << 24).unwrap();
        let c = Circuit::from_cyclic(w.edges(), 1);
        let mu = stable_current(&f, 2, DEFAULT_TOL, Provenance::Stable).unwrap();
        assert!(distance(&rational_current(&c, 2), &mu, 2).unwrap() < 1e-3);
    }
}
