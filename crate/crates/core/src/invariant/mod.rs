//! Invariant monomials: products of normalized traces of words in the matrix
//! alphabet, modulo cyclic rotation of each word and permutation of the words.

mod monomial;
mod parse;
mod potential;

pub use monomial::{canonical_rotation, rotation_symmetry, Color, InvariantMonomial, Word};
pub use parse::{parse_monomial, parse_word};
pub use potential::{Coupling, CouplingPoly, Potential, PotentialTerm};
