//! Loop equations: the cyclic derivative, the loop-insertion operator and
//! their verification against formal expectation values.

mod check;
mod expr;
mod rules;

pub use check::{check_loop_equation, expectation, loop_sides, LoopEquation, LoopReport, Mismatch};
pub use expr::{Letter, NCExpression, NCTerm, FROZEN};
pub use rules::{apply_k, apply_k_expr, nc_derivative, nc_derivative_monomial};
