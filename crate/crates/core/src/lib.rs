//! Train-track maps of graphs, geodesic currents as weight systems, and
//! Perron–Frobenius frequency analysis for outer automorphisms of free groups.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod currents;
pub mod dynamics;
pub mod error;
pub mod examples;
pub mod graph;
pub mod map;
pub mod marking;
pub mod matrix;
pub mod path;
pub mod spectral;

pub use circuit::{cyclic_reduce, Circuit};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexId};
pub use map::{GraphMap, LegalityTable, TrainTrackCertificate};
pub use marking::Marking;
pub use matrix::{Irreducibility, Matrix};
pub use path::{EdgePath, Turn};
