//! Para-unitary FIR systems: Laurent-polynomial arithmetic, block-Hankel
//! tests, state-space realizations, Blaschke–Potapov synthesis and family
//! constructions.

pub mod batch;
pub mod blaschke;
pub mod cli;
pub mod error;
pub mod families;
pub mod hankel;
pub mod io;
pub mod laurent;
pub mod linalg;
pub mod realization;
pub mod reference;

pub use error::{Error, Result};
pub use laurent::{Causality, LaurentPoly, Role};
