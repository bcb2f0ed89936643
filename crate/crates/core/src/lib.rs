//! Exact piecewise-linear homotopy toolkit.
//!
//! Geometric simplicial complexes with rational coordinates, subdivisions
//! and normal triangulations, PL maps with simplicial approximation and
//! checkable homotopy certificates, cylinder retractions, integer homology
//! and edge-path fundamental groups.
//!
//! Everything geometric is generic over [`Scalar`]; the aliases below fix
//! the exact [`Rational`] instance and an `f64` instance for experiments.

pub mod algebra;
pub mod certificate;
pub mod complex;
pub mod corpus;
pub mod cylinder;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod pi_one;
pub mod plmap;
pub mod scalar;
pub mod scx;
pub mod subdivision;

pub use algebra::{AbelianGroup, ChainComplex, Homology, IntMatrix};
pub use certificate::{HomotopyCertificate, HomotopyStep};
pub use complex::{Complex, Location, Point, Simplex, VertexId};
pub use cylinder::{CylinderRetraction, Extension, PrismComplex};
pub use error::{Error, Result};
pub use pi_one::{Presentation, Word};
pub use plmap::PlMap;
pub use scalar::{Rational, Scalar};
pub use subdivision::{PlHomeo, SubdivisionWitness};

pub type RationalComplex = Complex<Rational>;
pub type RationalMap = PlMap<Rational>;
pub type RationalHomeo = PlHomeo<Rational>;
pub type RationalCertificate = HomotopyCertificate<Rational>;

pub type FloatComplex = Complex<f64>;
pub type FloatMap = PlMap<f64>;
