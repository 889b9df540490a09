//! Exact arithmetic substrate.

pub mod laurent_n;
pub mod mpoly;
pub mod newton;
pub mod rational;
pub mod ring;
pub mod truncated;

pub use laurent_n::{LaurentPoly, LaurentPolyN};
pub use mpoly::MPoly;
pub use newton::{invert_matrix, newton_branch, newton_system, revert};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use ring::{Field, Ring};
pub use truncated::{SeriesRecord, TruncatedSeries, EXACT};
