//! GKM graphs end to end: weight-lattice arithmetic, graph validation and
//! faces, catalogs of model graphs, equal-rank homogeneous spaces from root
//! systems, equivariant cohomology by congruences, and the combinatorial
//! classification of positively curved GKM_3 graphs.
//!
//! The linear algebra and polynomial layers are generic over [`scalar::Field`];
//! the graph computations are instantiated at [`Rational`].

pub mod catalog;
pub mod classifier;
pub mod cohomology;
pub mod error;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod rootsys;
pub mod scalar;

pub use error::{GkmError, Result};
pub use graph::{Edge, Face, GkmGraph, StarEdge};
pub use lattice::{Weight, WeightClass};

/// Exact rationals used by every graph-level computation.
pub type Rational = num_rational::BigRational;
pub type RationalMatrix = linalg::Matrix<Rational>;
pub type RationalPolynomial = poly::Polynomial<Rational>;
/// Floating-point instantiations, for quick numeric experiments only.
pub type F64Matrix = linalg::Matrix<f64>;
pub type F64Polynomial = poly::Polynomial<f64>;
