//! Univariate and sparse multivariate polynomials over finite fields.

mod mpoly;
mod resultant;
mod roots;
mod upoly;

pub use mpoly::{grlex, parse, MPoly, Mono, VarSet, MAX_VARS};
pub use resultant::{bareiss_det, resultant};
pub use roots::{root_multiplicity, roots_in_ext, roots_in_field, roots_over_ext};
pub use upoly::UPoly;
