//! Block substitutions on used words and their limit frequencies.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::pf::{pf_eigendata, pf_right_from, SparseMatrix};
use super::{orientation_split, OrientationSplit, OrientationType};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::map::GraphMap;
use crate::path::{inverse_edges, reduce_edges, EdgePath};

/// Largest supported block length.
pub const MAX_BLOCK_LEN: usize = 32;

/// The substitution induced by `f` on used blocks of a fixed length.
#[derive(Clone, Debug)]
pub struct BlockSubstitution {
    length: usize,
    split: OrientationSplit,
    /// Every used word of length `<= length`.
    used: BTreeSet<Vec<Edge>>,
    blocks: Vec<Vec<Edge>>,
    index: BTreeMap<Vec<Edge>, usize>,
    images: Vec<Vec<usize>>,
    matrix: SparseMatrix,
}

impl BlockSubstitution {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn split(&self) -> &OrientationSplit {
        &self.split
    }

    /// The used blocks of the full length, sorted.
    pub fn alphabet(&self) -> &[Vec<Edge>] {
        &self.blocks
    }

    pub fn index_of(&self, block: &[Edge]) -> Option<usize> {
        self.index.get(block).copied()
    }

    /// Image of block `i` as a sequence of block indices.
    pub fn image(&self, i: usize) -> &[usize] {
        &self.images[i]
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn is_used(&self, w: &[Edge]) -> bool {
        self.used.contains(w)
    }

    /// All used words of length `<= length`.
    pub fn used_words(&self) -> impl Iterator<Item = &Vec<Edge>> {
        self.used.iter()
    }

    /// Block count vector of a word (linear, no wrap-around).
    pub fn block_vector(&self, w: &[Edge]) -> Vec<f64> {
        let mut x = vec![0.0; self.blocks.len()];
        if w.len() >= self.length {
            for win in w.windows(self.length) {
                if let Some(&i) = self.index.get(win) {
                    x[i] += 1.0;
                }
            }
        }
        x
    }
}

/// Used words of length `<= l` are found by an exact closure: starting from
/// the letters, add every factor of length `<= l` of `f(w)` for every used
/// `w`. Any factor of `f^n(x)` of length `<= l` lies in the image of a
/// factor of `f^(n-1)(x)` of length `<= l`, so the closure is exactly the
/// set of factors.
pub fn block_substitution(f: &GraphMap, l: usize) -> Result<BlockSubstitution> {
    if l == 0 || l > MAX_BLOCK_LEN {
        return Err(Error::Invalid(alloc::format!(
            "block length must lie in 1..={MAX_BLOCK_LEN}"
        )));
    }
    let split = orientation_split(f)?;
    let mut used: BTreeSet<Vec<Edge>> = BTreeSet::new();
    let mut stack: Vec<Vec<Edge>> = Vec::new();
    for &x in &split.alphabet {
        if used.insert(vec![x]) {
            stack.push(vec![x]);
        }
    }
    while let Some(w) = stack.pop() {
        let raw = f.image_of_edges(&w);
        if reduce_edges(&raw).len() != raw.len() {
            return Err(Error::NotTrainTrack);
        }
        for start in 0..raw.len() {
            for end in start + 1..=(start + l).min(raw.len()) {
                let u = &raw[start..end];
                if !used.contains(u) {
                    used.insert(u.to_vec());
                    stack.push(u.to_vec());
                }
            }
        }
    }
    let blocks: Vec<Vec<Edge>> = used.iter().filter(|w| w.len() == l).cloned().collect();
    let index: BTreeMap<Vec<Edge>, usize> = blocks
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, b)| (b, i))
        .collect();
    let mut images = Vec::with_capacity(blocks.len());
    let mut entries = Vec::new();
    for (j, b) in blocks.iter().enumerate() {
        let img = f.image_of_edges(b);
        let lead = f.image(b[0]).len();
        let seq: Vec<usize> = (0..lead).map(|p| index[&img[p..p + l]]).collect();
        for &i in &seq {
            entries.push((i, j, 1));
        }
        images.push(seq);
    }
    let matrix = SparseMatrix::new(blocks.len(), entries);
    Ok(BlockSubstitution {
        length: l,
        split,
        used,
        blocks,
        index,
        images,
        matrix,
    })
}

/// Limit frequencies `a_v` of used paths `v` with `ℓ(v) <= R`, symmetric
/// under inversion. Unused paths are absent and have frequency zero.
#[derive(Clone, Debug)]
pub struct Frequencies {
    pub depth: usize,
    pub kind: OrientationType,
    pub lambda: f64,
    pub residual: f64,
    values: BTreeMap<EdgePath, f64>,
}

impl Frequencies {
    pub fn get(&self, v: &[Edge]) -> f64 {
        self.values
            .get(&EdgePath::new(v.to_vec()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Nonzero entries in shortlex order.
    pub fn iter(&self) -> impl Iterator<Item = (&EdgePath, f64)> {
        self.values.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_map(self) -> BTreeMap<EdgePath, f64> {
        self.values
    }
}

/// `a_v` from the PF right eigenvector of the `R`-block substitution.
pub fn stable_frequencies(f: &GraphMap, depth: usize, tol: f64) -> Result<Frequencies> {
    let bs = block_substitution(f, depth)?;
    let pf = pf_eigendata(bs.matrix(), tol)?;
    Ok(assemble(&bs, &pf.right, pf.lambda, pf.residual))
}

/// Same as [`stable_frequencies`] but power-iterating from the block vector
/// of the first iterate of `seed` long enough to contain a block.
pub fn seeded_frequencies(f: &GraphMap, depth: usize, seed: Edge, tol: f64) -> Result<Frequencies> {
    let bs = block_substitution(f, depth)?;
    if !bs.split.alphabet.contains(&seed) {
        return Err(Error::Invalid(
            "seed edge is not in the substitution alphabet".into(),
        ));
    }
    let mut w = vec![seed];
    while w.len() < depth {
        w = f.apply_edges(&w);
    }
    let start = bs.block_vector(&w);
    let (lambda, right, residual) = pf_right_from(bs.matrix(), &start, tol)?;
    Ok(assemble(&bs, &right, lambda, residual))
}

fn assemble(bs: &BlockSubstitution, u: &[f64], lambda: f64, residual: f64) -> Frequencies {
    // one-sided frequencies of every used word via prefix sums over blocks
    let mut one_sided: BTreeMap<Vec<Edge>, f64> = BTreeMap::new();
    for (i, b) in bs.blocks.iter().enumerate() {
        for k in 1..=b.len() {
            *one_sided.entry(b[..k].to_vec()).or_insert(0.0) += u[i];
        }
    }
    let mut values = BTreeMap::new();
    for (w, &x) in &one_sided {
        let inv = inverse_edges(w);
        let y = match bs.split.kind {
            OrientationType::Type1 => x,
            OrientationType::Type2 => x + one_sided.get(&inv).copied().unwrap_or(0.0),
        };
        if y > 0.0 {
            values.insert(EdgePath::new(w.clone()), y);
            values.insert(EdgePath::new(inv), y);
        }
    }
    Frequencies {
        depth: bs.length,
        kind: bs.split.kind,
        lambda,
        residual,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;
    use crate::spectral::{pf_eigendata, DEFAULT_TOL};

    fn names(f: &GraphMap, ws: &[Vec<Edge>]) -> Vec<alloc::string::String> {
        ws.iter()
            .map(|w| f.graph().format_edges(w).replace(',', ""))
            .collect()
    }

    #[test]
    fn fibonacci_alphabets() {
        let f = fibonacci();
        let b2 = block_substitution(&f, 2).unwrap();
        let mut n2 = names(&f, b2.alphabet());
        n2.sort();
        assert_eq!(n2, ["aa", "ab", "ba"]);
        let b3 = block_substitution(&f, 3).unwrap();
        let mut n3 = names(&f, b3.alphabet());
        n3.sort();
        assert_eq!(n3, ["aab", "aba", "baa", "bab"]);
    }

    #[test]
    fn length_one_recovers_transition_matrix() {
        for f in [fibonacci(), tribonacci()] {
            let b1 = block_substitution(&f, 1).unwrap();
            assert_eq!(b1.matrix().to_dense(), f.transition_matrix());
        }
    }

    #[test]
    fn block_eigenvalues_agree() {
        let f = fibonacci();
        let lambda = pf_eigendata(&f.transition_matrix(), DEFAULT_TOL)
            .unwrap()
            .lambda;
        for l in 1..=6 {
            let b = block_substitution(&f, l).unwrap();
            let pf = pf_eigendata(b.matrix(), DEFAULT_TOL).unwrap();
            assert!((pf.lambda - lambda).abs() < 1e-8, "L = {l}");
        }
    }

    #[test]
    fn fibonacci_frequencies() {
        let f = fibonacci();
        let g = f.graph();
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        let fr = stable_frequencies(&f, 3, DEFAULT_TOL).unwrap();
        let w = |s: &str| g.parse_word(s).unwrap().into_edges();
        assert!((fr.get(&w("a")) - 1.0 / phi).abs() < 1e-8);
        assert!((fr.get(&w("a,b")) - 1.0 / (phi * phi)).abs() < 1e-8);
        assert!((fr.get(&w("a,a")) - 1.0 / (phi * phi * phi)).abs() < 1e-8);
        assert_eq!(fr.get(&w("b,b")), 0.0);
        assert_eq!(fr.get(&w("b^-1,a^-1")), fr.get(&w("a,b")));
        assert!((fr.get(&w("a")) + fr.get(&w("b")) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn type2_frequencies_are_symmetric_and_normalized() {
        let (_, g) = plastic_inverse().normalize_power().unwrap();
        let fr = stable_frequencies(&g, 3, DEFAULT_TOL).unwrap();
        assert_eq!(fr.kind, OrientationType::Type2);
        let total: f64 = g.graph().positive_edges().map(|e| fr.get(&[e])).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for (v, x) in fr.iter() {
            assert_eq!(fr.get(&inverse_edges(v.edges())), x);
        }
    }
}
