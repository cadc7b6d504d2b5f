//! Exact polynomial algebra over rational coefficients.

mod expr;
mod matrix;
mod parse;
mod patch;
mod ratfunc;

pub use expr::{rat, ratio, Expr, Monomial};
pub use matrix::{rational_rank, reduce_vector, span_contains, span_rank, ExprMatrix};
pub use parse::{node_to_expr, parse_expr, parse_node, Node};
pub use patch::Patch;
pub(crate) use patch::is_identifier;
pub use ratfunc::RatFunc;

pub use num_rational::BigRational;
