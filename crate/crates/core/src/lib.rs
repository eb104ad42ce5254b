//! Exact Moore-Penrose pseudo-inverses of symmetric rational matrices and
//! the positive / negative (pseudo-)invertibility of graphs.
//!
//! * [`ratmath`]: exact rational scalars and dense matrices (determinant,
//!   RREF, inverse, pseudo-inverse, Kronecker product).
//! * [`spectral`]: Jacobi eigenvalues, least positive / largest negative
//!   eigenvalues, PSD tests and their bisection characterization.
//! * [`signability`]: signature-matrix signability and pseudo-inverse graphs.
//! * [`blockops`]: generalized Schur complements and Banachiewicz-Schur
//!   block pseudo-inverses.
//! * [`constructions`]: stars, pendant-vertex and pendant-path graphs.
//! * [`graphio`]: graph6 and weighted edge-list / DOT output.
//! * [`census`]: classification counts over graph6 lists.

pub mod blockops;
pub mod census;
pub mod constructions;
mod error;
pub mod graph;
pub mod graphio;
pub mod ratmath;
pub mod signability;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, WeightedGraph};
pub use ratmath::{MathError, RatMatrix, Rational};
