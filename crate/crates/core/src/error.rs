use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operation requires an inner product; not available over {0}")]
    UnsupportedBackend(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("malformed simplex {0:?}: {1}")]
    MalformedSimplex(Vec<u32>, String),
    #[error("complex is not closed under faces: face {face:?} of simplex {simplex} missing")]
    NotClosed { simplex: usize, face: Vec<u32> },
    #[error("simplex ids are not face-ordered at simplex {0}")]
    NotFaceOrdered(usize),
    #[error("subcomplex of vertex {0} is not closed under faces")]
    MaskNotClosed(String),
    #[error("cycle found through edge {edge} ({src} -> {dst})")]
    CycleFound { edge: usize, src: String, dst: String },
    #[error("edge {edge} ({src} -> {dst}) is not an inclusion: simplex {simplex} missing from {dst}")]
    InclusionViolated { edge: usize, src: String, dst: String, simplex: usize },
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("not a directed path: {0}")]
    NotAPath(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("invalid subgraph selector: {0}")]
    InvalidSelector(String),
    #[error("subgraph selector is not connected")]
    DisconnectedSelector,
    #[error("rank function is not interval decomposable: multiplicity {multiplicity} at ({birth}, {death})")]
    NotIntervalDecomposable { birth: usize, death: usize, multiplicity: i64 },
    #[error("radius schedule must be strictly increasing")]
    InvalidSchedule,
    #[error("filtration is not monotone at level {0}")]
    NotMonotone(usize),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
