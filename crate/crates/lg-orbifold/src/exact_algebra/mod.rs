//! Exact arithmetic substrate: rationals, sparse polynomials, integer
//! matrices with Smith normal form, and the weight equation.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod weights;

pub use matrix::{smith_normal_form, IntMatrix, SnfDecomposition};
pub use poly::{default_vars, Exponents, Polynomial};
pub use rational::{fmt_rational, int, parse_rational, rat, Rational};
pub use weights::{exponent_matrix, solve_weight_equation, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("index {0} out of range for {1} variables")]
    IndexOutOfRange(usize, usize),
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("no positive weight system solves the exponent equations")]
    NoWeightSystem,
    #[error("weight system is not unique")]
    NonUniqueWeights,
}
