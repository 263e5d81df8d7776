//! Exact arithmetic: rationals, sparse polynomials, rational functions in the
//! parameters, and fraction-free linear algebra over them.

mod gcd;
mod matrix;
mod parse;
mod poly;
mod ratfunc;
mod subst;

use thiserror::Error;

pub use gcd::{content_in, gcd, lcm};
pub use matrix::{
    bareiss, clear_denominators, dot, is_zero_vector, normalize_vector, rank_q, BasisSolver, MatK,
    Vector,
};
pub use parse::{parse_parameter_poly, parse_poly, parse_ratfunc};
pub use poly::{rat, ratio, Monomial, Poly, Rational, VarId};
pub use ratfunc::RatFunc;
pub use subst::substitute;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("no value assigned to {0:?}")]
    MissingAssignment(VarId),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse `{input}` at byte {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },
}
