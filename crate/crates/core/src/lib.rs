//! Delocalized traces, determinant maps and eta invariants on group-algebra
//! models.
//!
//! The algebraic core ([`algebra::AlgElem`], [`matrix::Mat`],
//! [`charclass::GradedPoly`]) is generic over the coefficient field through
//! [`scalar::Coeff`]; the aliases below fix the three supported backends.
//! Spectral and path computations run in double precision over the left
//! regular representation of a finite group.

pub mod algebra;
pub mod charclass;
pub mod cyclo;
pub mod detmap;
pub mod error;
pub mod eta;
pub mod group;
pub mod growth;
pub mod matrix;
pub mod quad;
pub mod regular;
pub mod scalar;
pub mod seminorm;
pub mod suite;

pub use algebra::AlgElem;
pub use charclass::{GradedPoly, GradedRing};
pub use cyclo::CycloNumber;
pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec};
pub use matrix::Mat;
pub use scalar::{Coeff, GaussianRational};

pub type C64 = num::complex::Complex64;
pub type C32 = num::complex::Complex32;

pub type AlgElemF64 = AlgElem<C64>;
pub type AlgElemF32 = AlgElem<C32>;
pub type AlgElemQ = AlgElem<GaussianRational>;

pub type MatF64 = Mat<C64>;
pub type MatF32 = Mat<C32>;
pub type MatQ = Mat<GaussianRational>;

pub type GradedPolyF64 = GradedPoly<C64>;
pub type GradedPolyQ = GradedPoly<GaussianRational>;
