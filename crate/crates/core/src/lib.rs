//! Generalized Gauss map for surfaces in the model geometries
//! ℝⁿ, 𝕊ⁿ, ℍⁿ, 𝕊²×ℝ and ℍ²×ℝ, with numerical verification of the
//! identities it satisfies.

pub mod algebra;
pub mod ambient;
pub mod calculus;
pub mod error;
pub mod exec;
pub mod gaussmap;
pub mod report;
pub mod surface;
pub mod taylor;
pub mod verify;

pub use error::{GeomError, Result};
