//! Exact equivariant characteristic classes of torus-invariant varieties.
//!
//! The crate computes localized equivariant Hirzebruch classes `td_y` and
//! Todd classes of singular subvarieties by fixed-point localization, with
//! every value an exact sparse multivariate rational function.
//!
//! Layering (each module only looks down):
//! - [`context`], [`poly`], [`ratfun`], [`series`], [`parse`] — the exact
//!   arithmetic kernel and its text grammar;
//! - [`weight`], [`space`] — character lattices, fixed-point models of
//!   projective spaces and Grassmannians, cell data;
//! - [`localize`] — Euler classes, smooth local classes, fixed-point
//!   integration, residues, singular-point extraction, normal forms, and
//!   the y -> -1 (Chern-Schwartz-MacPherson) limit;
//! - [`motivic`] — additivity calculus over stratifications, pushforwards
//!   through resolutions, complete-intersection comparison;
//! - [`detvar`] — the determinant-variety program: germ classification,
//!   the inductive extraction, closed-form checks, the radial table, the
//!   positivity substitution.

pub mod context;
pub mod error;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod series;

pub mod weight;

pub mod space;

pub mod localize;

pub mod motivic;

pub mod detvar;

pub use context::VarContext;
pub use num_rational::BigRational;
pub use error::{EqError, Result};
pub use poly::LaurentPoly;
pub use ratfun::RatFun;
pub use series::PowerSeries;
