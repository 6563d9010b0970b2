//! Exact p-curvature computations for connections on genus-2 curves
//! `y^2 = g(x)` over fields of odd characteristic.

pub mod connection;
pub mod curve;
pub mod detpsi;
pub mod error;
pub mod field;
pub mod hurwitz;
pub mod mat2;
pub mod nc_expand;
pub mod poly;
pub mod prank;
pub mod ring;
pub mod solve_count;
pub mod verify;

pub use error::{Error, Result};
pub use field::{ExtElem, ExtField, FieldElem, PrimeField};
pub use poly::{MPoly, UPoly, VarSet};
pub use ring::{Field, Ring};
