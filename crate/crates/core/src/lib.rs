//! Exact cellular homology with integer and `Z/k` coefficients, Bockstein
//! maps, cross products and a small formal bordism calculus.

pub mod bockstein;
pub mod cli;
pub mod complex;
pub mod error;
pub mod exactalg;
pub mod formalbord;
pub mod homology;
pub mod products;
pub mod report;
pub mod spaces;

pub use error::{Error, Result};
