//! Computations with inner toral polynomials, distinguished varieties and
//! algebraic pairs of commuting isometries.
//!
//! * [`bipoly`]: exact and floating-point bivariate polynomial algebra.
//! * [`innertoral`]: toral / inner toral classification, monodromy grouping of
//!   branches, polynomial convexity, sampling of varieties.
//! * [`opmodel`]: matrix rational inner functions and their model pairs,
//!   minimal polynomials and truncated operator identities.
//! * [`torusmeasure`]: Hardy-space models of measures on monomial curves in
//!   the torus.

pub mod bipoly;
pub mod det;
pub mod error;
pub mod fixtures;
pub mod innertoral;
pub mod linalg;
pub mod opmodel;
pub mod parallel;
pub mod scalar;
pub mod torusmeasure;

pub use bipoly::{BiPoly, ExactPoly, FloatPoly, UniPoly};
pub use error::{Error, Result};
pub use scalar::{ExactComplex, Scalar, C64};
