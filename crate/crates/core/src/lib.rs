//! Zero-sum invariants and structure theory of finite commutative semigroups.
//!
//! A semigroup is a validated Cayley table ([`Semigroup`]). On top of it the
//! crate computes Green's relations ([`green`]), ideals, Rees quotients and
//! the nil/archimedean/elementary classification ([`decomposition`]), the
//! Davenport constants and the constant `E(S)` ([`zerosum`]), and it
//! generates catalogs of small semigroups ([`catalog`]) on which
//! [`verify`] checks the known bounds.

pub mod catalog;
pub mod cayley;
pub mod decomposition;
pub mod green;
pub mod sequence;
pub mod verify;
pub mod zerosum;

pub use cayley::{
    fixtures, CayleyError, ElementId, IndexPeriod, Restriction, Semigroup, SpecialElements,
};
pub use sequence::Sequence;
pub use zerosum::EgzValue;
