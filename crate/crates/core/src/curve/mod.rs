//! Spectral curves of the one- and two-matrix models and their closed-form
//! free energies.

pub mod chart;
pub mod local;
pub mod rational;
pub mod triple;
pub mod two_matrix;
pub mod zhukovsky;

pub use chart::{GammaChart, Series};
pub use rational::{residue_at, RationalFunctionZ, ZPoint};
pub use triple::f2_1mm;
pub use zhukovsky::{f0_1mm, f1_1mm, solve_1mm_curve, CurveDump, OneMatrixModel, ResidueIdentities, ZhukovskyCurve};
pub use two_matrix::{f0_2mm, f1_2mm, solve_2mm_curve, RationalCurve2MM, TwoMatrixModel};
