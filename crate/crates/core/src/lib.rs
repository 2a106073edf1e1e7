//! Exact computation of generalized (automorphism-twisted) derivations of
//! finite-dimensional Lie algebras given by structure constants.
//!
//! All arithmetic is over the rationals. Linear solvers assemble explicit
//! systems and take exact kernels; the polynomial side provides lex Gröbner
//! bases for the ideal-theoretic description of derivation varieties of
//! `sl2`.

pub mod algebra;
pub mod error;
pub mod gderiv;
pub mod hilbert;
pub mod linalg;
pub mod poly;
pub mod reproduce;
pub mod sl2;

pub use algebra::{Automorphism, LieAlgebra};
pub use error::{Error, Result};
pub use gderiv::{DerivationKind, DerivationSpace, MapSpace};
pub use linalg::{Matrix, Rational, Subspace};
pub use poly::{Ideal, MultiPoly};
