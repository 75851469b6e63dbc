use alloc::string::String;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("consecutive edges at positions {position} and {} do not share an endpoint", position + 1)]
    EndpointMismatch { position: usize },
    #[error("path is not closed")]
    NotClosed,
    #[error("path is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("circuit is empty")]
    EmptyCircuit,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex `{0}` has valence less than two")]
    LowValence(String),
    #[error("image of edge `{edge}` is not reduced")]
    NotTight { edge: String },
    #[error("image of edge `{edge}` is empty")]
    EmptyImage { edge: String },
    #[error("image of `{edge}` is not the inverse of the image of its inverse")]
    NotEquivariant { edge: String },
    #[error("image of edge `{edge}` does not run between the images of its endpoints")]
    EndpointInconsistent { edge: String },
    #[error("maps act on different graphs")]
    GraphMismatch,
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("map is not a train-track map")]
    NotTrainTrack,
    #[error("map does not expand: some edge image has length one in every power")]
    NotExpanding,
    #[error("no periodic edge whose image starts with itself; normalize the map first")]
    NoPeriodicEdge,
    #[error("orientation closure mixes single- and double-signed edges")]
    MixedOrientation,
    #[error("periodic edges disagree on the orientation type")]
    OrientationDisagreement,
    #[error("word length cap of {cap} edges exceeded")]
    ResourceCap { cap: usize },
    #[error("occurrence counts overflow floating point")]
    CountOverflow,
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
    #[error("weight system depth {have} is smaller than the required {need}")]
    DepthTooSmall { have: usize, need: usize },
    #[error("weight system has zero weight")]
    ZeroWeight,
    #[error("iteration did not converge within {steps} steps")]
    NonConvergence { steps: usize },
    #[error("cancellation reached past the explicit boundary of a packed segment")]
    CompressionExhausted,
    #[error("marking generator `{0}` does not round-trip to a conjugate of itself")]
    MarkingRoundTrip(String),
    #[error("marking generator loop `{0}` is not based at the marking base vertex")]
    MarkingBase(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
