//! Exact-arithmetic toolkit for finite orthomodular lattices and the
//! bivariate probability maps (s-, j-, d- and G-maps) defined on them.
//!
//! * [`lattice`]: finite orthomodular lattices, validation and generators.
//! * [`feasibility`]: exact rational LP, affine dimension and vertices.
//! * [`states`]: states and the state polytope.
//! * [`bimaps`]: bivariate maps, axiom checkers, Γ-families, constructions.
//! * [`analysis`]: Bell-type, Jauch–Piron and pseudometric verdicts.
//! * [`io`]: JSON file formats.
//! * [`suite`]: the built-in test lattices.

#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod bimaps;
pub mod feasibility;
pub mod io;
pub mod lattice;
pub mod rat;
pub mod states;
pub mod suite;

pub use lattice::{Elem, Oml};
pub use rat::Rat;
