//! Shipped example documents with their certification status.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// A periodic class or a closed INP was found.
    GeometricEvidence,
    /// The scan found no periodic class and the normalized power has no
    /// closed INP.
    AtoroidalConsistent,
    /// Certification does not apply (the matrix is not primitive).
    Unverified,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::GeometricEvidence => "geometric-evidence",
            Status::AtoroidalConsistent => "atoroidal-consistent",
            Status::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExampleEntry {
    pub name: &'static str,
    pub document: &'static str,
    pub status: Status,
    pub summary: &'static str,
}

pub const EXAMPLES: &[ExampleEntry] = &[
    ExampleEntry {
        name: "fibonacci",
        document: include_str!("../data/fibonacci.json"),
        status: Status::GeometricEvidence,
        summary: "a -> ab, b -> a; fixes the class of the commutator",
    },
    ExampleEntry {
        name: "plastic",
        document: include_str!("../data/plastic.json"),
        status: Status::AtoroidalConsistent,
        summary: "a -> b, b -> c, c -> ab; stretch factor the plastic number, with inverse",
    },
    ExampleEntry {
        name: "tribonacci",
        document: include_str!("../data/tribonacci.json"),
        status: Status::AtoroidalConsistent,
        summary: "a -> ab, b -> ac, c -> a; no inverse representative shipped",
    },
    ExampleEntry {
        name: "P",
        document: include_str!("../data/P.json"),
        status: Status::GeometricEvidence,
        summary: "a -> ba, b -> a; has a closed INP",
    },
    ExampleEntry {
        name: "identity",
        document: include_str!("../data/identity.json"),
        status: Status::Unverified,
        summary: "identity of the rose of rank 2; not primitive",
    },
];

pub fn find(name: &str) -> Option<&'static ExampleEntry> {
    EXAMPLES.iter().find(|e| e.name == name)
}
