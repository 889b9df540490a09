//! Formal matrix integrals as generating functions of maps.

pub mod curve;
pub mod error;
pub mod invariant;
pub mod loops;
pub mod wick;
pub mod series;
pub mod toprec;

pub use error::{Error, Result};
