//! Divisor class group arithmetic on nonsingular Miura curves.
//!
//! Classes of degree-zero divisors are represented by ideals of the affine
//! coordinate ring `K[x_1, …, x_t] / ⟨F_M⟩`; the group law reduces to ideal
//! products and colon ideals computed with Gröbner bases under the weighted
//! Miura order.

pub mod curve;
pub mod field;
pub mod groebner;
pub mod jacobian;
pub mod oracle;
pub mod polyring;
pub mod script;

pub use field::{FieldSpec, FieldValue};
pub use groebner::Basis;
pub use polyring::{MiuraOrder, Monomial, PolyRing, Polynomial};
