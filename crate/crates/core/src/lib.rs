//! Exact Harder-Narasimhan theory on finite models.
//!
//! * [`numpoly`]: polynomials over `Q` in `λ`, the eventual order, ranks and
//!   integrality.
//! * [`hntype`]: Harder-Narasimhan types, polygons and their partial order.
//! * [`lattice`]: finite subobject lattices, semistability and HN filtrations.
//! * [`family`]: families over finite topological spaces and their
//!   stratification by HN type, including the recursive construction of strata.
//! * [`cli`]: the `hnstrata` command-line tool.
//!
//! Every comparison and interpolation is carried out in exact rational
//! arithmetic.

pub mod cli;
pub mod family;
pub mod fixtures;
pub mod hntype;
pub mod lattice;
pub mod numpoly;

pub use hntype::{hnt_leq, validate_hn_type, HnPolygon, HnType, HnTypeError, PolygonPoint};
pub use lattice::{
    hn_filtration, hn_type, lattice_from_splitting, HnFiltration, LatticeError, SplittingType,
    SubobjectLattice,
};
pub use numpoly::{Degree, NumPoly, NumPolyError, RatPoly, Rational};
