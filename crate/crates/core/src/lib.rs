//! Exact computer algebra for ℝ[n]-bundles over shifted tangent bundles: graded
//! derivations, the symmetry dgla of `Q = d + H∂t`, derived and hamiltonian
//! brackets, equivariant complexes, lift certificates and cohomology ranks.

pub mod algebra;
pub mod bundle;
pub mod cohomology;
pub mod commands;
pub mod derivation;
pub mod derived;
pub mod error;
pub mod expr;
pub mod lie;
pub mod lift;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod problem;
pub mod report;
pub mod scalar;

pub use algebra::{Algebra, Generator, GradedAlgebra, GradedElement, Monomial};
pub use derivation::Derivation;
pub use error::{Error, Result};
pub use model::{CdgaModel, ModelId, VectorField};
pub use poly::{CoeffPoly, RatFunc};
pub use scalar::Scalar;
