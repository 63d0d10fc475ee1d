//! Numerical evaluation of colored double zeta values and checks of the
//! generated relations.

pub mod bernoulli;
pub mod fixed;
pub mod eval;
pub mod zeta;

pub use eval::{phi, reg_double_zeta, verify_euler, verify_relation, RegValue};
pub use fixed::MpComplex;
pub use zeta::{colored_double_zeta, hurwitz_zeta, polylog_root};
