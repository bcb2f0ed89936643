use thiserror::Error;

use crate::complex::{Simplex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("vertex `{0}` has {1} coordinates, expected {2}")]
    WrongArity(VertexId, usize, usize),
    #[error("vertices `{0}` and `{1}` share the same coordinates")]
    CoincidentVertices(VertexId, VertexId),
    #[error("duplicate simplex {0}")]
    DuplicateSimplex(Simplex),
    #[error("simplex {0} has affinely dependent vertices")]
    AffinelyDependent(Simplex),
    #[error("open simplices {0} and {1} overlap")]
    OverlappingSimplices(Simplex, Simplex),
    #[error("point {0} lies outside the polyhedron")]
    PointOutsidePolyhedron(String),
    #[error("complex is not closed: face {face} of {simplex} is missing")]
    NotClosed { simplex: Simplex, face: Simplex },
    #[error("not a subcomplex: {0} is not a simplex of the parent")]
    NotSubcomplex(Simplex),
    #[error("unknown subcomplex `{0}`")]
    UnknownSubcomplex(String),
    #[error("input homeomorphism is not normal: {0}")]
    NotNormalInput(String),
    #[error("map is not normal: {0}")]
    NotNormal(String),
    #[error("fine simplex {0} has no carrier")]
    MissingCarrier(Simplex),
    #[error("vertex `{0}` has no image")]
    MissingImage(VertexId),
    #[error("image of {simplex} leaves the closure of its target carrier {carrier}")]
    ImageOutsideCarrier { simplex: Simplex, carrier: Simplex },
    #[error("no closed codomain simplex contains both images of {0}")]
    CarrierClash(Simplex),
    #[error("maps disagree on the fixed set at vertex `{0}`")]
    FixedSetMismatch(VertexId),
    #[error("maps have no common refinement")]
    NoCommonRefinement,
    #[error("star condition still fails after {rounds} rounds at vertices {failing:?}")]
    RoundsExhausted { rounds: usize, failing: Vec<VertexId> },
    #[error("subcomplex is not full: {0} has all vertices in it but is missing")]
    NotFull(Simplex),
    #[error("barrier violated at {0}")]
    BarrierViolation(Simplex),
    #[error("map is not simplicial at vertex `{0}`")]
    NotSimplicial(VertexId),
    #[error("homotopy does not start at f on the subcomplex: vertex `{0}`")]
    Incompatible(VertexId),
    #[error("complex is not connected")]
    NotConnected,
    #[error("path does not start in the subcomplex")]
    StartNotInA,
    #[error("base vertex mismatch: `{0}` is not sent to `{1}`")]
    BaseVertexMismatch(VertexId, VertexId),
    #[error("not certifiably simply connected: {0}")]
    NotCertifiablySimplyConnected(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
