//! Exact arithmetic: rationals, multivariate polynomials and rational
//! functions, plus a tolerance-aware float ring, all behind [`Scalar`].

pub mod algebra;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod symbol;

pub use algebra::{
    contains_monomial, factor_match, solve_for_monomial, solve_linear, substitute, substitute_monomial, Assumptions,
    Bindings, LinearSolution,
};
pub use num_rational::BigRational;
pub use parse::{parse_expr, parse_relation};
pub use poly::{fmt_rational, Monomial, Polynomial};
pub use ratfunc::RatFunc;
pub use scalar::{Float, Scalar, FLOAT_ZERO_EPS};
pub use symbol::{sym, Base, Direction, Symbol};

/// Exact rational shorthand.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
