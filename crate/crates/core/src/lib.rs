//! Exact and numerical tools for double zeta values at roots of unity and
//! the period-polynomial spaces attached to `Gamma_1(N)`.

pub mod error;
pub mod linalg;
pub mod sl2;
pub mod equivariant;
pub mod period;
pub mod formal;
pub mod relations;
pub mod numeric;

pub use error::{Error, Result};
