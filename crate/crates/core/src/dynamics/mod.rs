//! Bounded cancellation, goodness, Nielsen paths, hyperbolicity scans,
//! translation lengths and the north–south experiment.

pub mod cancellation;
pub mod goodness;
pub mod inp;
pub mod length;
pub mod northsouth;
pub mod packed;
pub mod scan;

pub use cancellation::{
    bcc_estimate, cancellation, max_cancellation, CancellationEstimate, DEFAULT_SEARCH_DEPTH,
};
pub use goodness::{
    generalized_goodness, goodness, goodness_constant, goodness_with, ilt_trajectory, legal_ends,
    GoodnessReport,
};
pub use inp::{inp_search, inp_search_with, InpRecord, InpSearch};
pub use length::{limit_length, translation_length, twisted_length, LimitLength, MetricGraphTree};
pub use northsouth::{
    dichotomy, Dichotomy, Flag, NorthSouth, NorthSouthConfig, Row, SeedRun, CSV_HEADER,
};
pub use packed::{PackedCircuit, PackedConfig, PackedIterator};
pub use scan::{hyperbolicity_scan, PeriodicClass, ScanReport, Verdict};
