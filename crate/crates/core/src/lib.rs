//! Extended exponential families on finite state spaces.
//!
//! Given an integer model matrix, this crate computes the lattice kernel of
//! the family, the Hilbert basis that defines its maximal monomial model,
//! the exposed sets of the marginal polytope, and decides whether a density
//! lies in the closure of the family, with explicit limit paths.

pub mod border;
pub mod error;
pub mod exactmath;
pub mod family;
pub mod hilbert;
pub mod io;
pub mod model;
pub mod models;

pub use error::{Error, Result};
