//! Small maps on roses used throughout the tests and the example library.

use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::Graph;
use crate::map::GraphMap;

fn rose_map(name: &str, edges: &[&str], images: &[(&str, &str)]) -> GraphMap {
    let words: Vec<(String, String)> = images
        .iter()
        .map(|(e, w)| ((*e).into(), (*w).into()))
        .collect();
    GraphMap::from_words(name, Graph::rose(edges), None, &words).expect("built-in example is valid")
}

/// Fibonacci automorphism `a -> ab, b -> a`.
pub fn fibonacci() -> GraphMap {
    rose_map("fibonacci", &["a", "b"], &[("a", "a,b"), ("b", "a")])
}

/// Train-track representative of the inverse of [`fibonacci`]:
/// `a -> b, b -> b^-1 a`.
pub fn fibonacci_inverse() -> GraphMap {
    rose_map(
        "fibonacci-inverse",
        &["a", "b"],
        &[("a", "b"), ("b", "b^-1,a")],
    )
}

/// `a -> b, b -> c, c -> ab`, stretch factor the plastic number.
pub fn plastic() -> GraphMap {
    rose_map(
        "plastic",
        &["a", "b", "c"],
        &[("a", "b"), ("b", "c"), ("c", "a,b")],
    )
}

/// Inverse of [`plastic`]: `a -> c a^-1, b -> a, c -> b`.
pub fn plastic_inverse() -> GraphMap {
    rose_map(
        "plastic-inverse",
        &["a", "b", "c"],
        &[("a", "c,a^-1"), ("b", "a"), ("c", "b")],
    )
}

/// `a -> ab, b -> ac, c -> a`.
pub fn tribonacci() -> GraphMap {
    rose_map(
        "tribonacci",
        &["a", "b", "c"],
        &[("a", "a,b"), ("b", "a,c"), ("c", "a")],
    )
}

/// `a -> ba, b -> a`.
pub fn map_p() -> GraphMap {
    rose_map("P", &["a", "b"], &[("a", "b,a"), ("b", "a")])
}

/// `a -> ab, b -> a^-1`, not a train-track map.
pub fn map_r() -> GraphMap {
    rose_map("R", &["a", "b"], &[("a", "a,b"), ("b", "a^-1")])
}
