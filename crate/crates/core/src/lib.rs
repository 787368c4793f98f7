//! Exact computations in extended affine Weyl groups and affine Hecke algebras:
//! ordinary, parabolic and semiperiodic Kazhdan–Lusztig polynomials, and the
//! dimension and character formulas built from them for modular representations
//! attached to a nilpotent element.
//!
//! Everything is generic over the coefficient ring of the Laurent polynomials;
//! the aliases at the crate root fix it to arbitrary-precision integers.

pub mod affweyl;
pub mod antispherical;
pub mod error;
pub mod hecke;
pub mod kl;
pub mod laurent;
pub mod modular;
pub mod rootdata;
pub mod semiperiodic;

pub use affweyl::{AffineElt, AffineWeyl, CosetFilter, FiniteElt};
pub use error::{Error, Result};
pub use laurent::{Coeff, Laurent};
pub use rootdata::{LeviDatum, NilpotentDatum, RootDatum, Weight};

/// Laurent polynomials in `v` with big-integer coefficients.
pub type LaurentPoly = Laurent<num_bigint::BigInt>;
