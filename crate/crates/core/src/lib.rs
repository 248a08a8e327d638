//! Exact computer algebra for Cartan-type Lie superalgebras and the integral
//! form of the enveloping superalgebra of their map superalgebras.
//!
//! The crate is layered bottom-up:
//!
//! - [`exterior`]: the Grassmann algebra Λ(n), superderivations, and the
//!   families W(n), S(n), S̃(n), H(n).
//! - [`roots`]: Cartan subalgebras, weights, heights and multiplicities.
//! - [`chevalley`]: a Chevalley-type basis, its axiom checks and the integer
//!   structure-constant table everything downstream consumes.
//! - [`combinatorics`]: multisets, sub-multiset streams, the partition-like
//!   index sets used by the straightening sums, and the monoid algebras `A`.
//! - [`enveloping`]: the PBW normal-form oracle for U(𝔤⊗A) over ℚ.
//! - [`zform`]: integral generators, the straightening identities, the
//!   rewriting of monomials onto the integral basis, and its verifiers.
//! - [`campaign`]: batch drivers producing JSON reports (used by the binary).
//!
//! All arithmetic is exact. Nothing in the engine touches floating point.

pub mod campaign;
pub mod chevalley;
pub mod combinatorics;
pub mod enveloping;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod roots;
pub mod zform;

pub use error::{Error, Result};

/// Exact rational scalars.
pub type Q = num_rational::BigRational;
/// Exact integers.
pub type Z = num_bigint::BigInt;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}
