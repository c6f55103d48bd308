//! Matrix factorizations over exact polynomial rings, restriction to the
//! graph hypersurface x_n = f, pushforward by the Koszul factor
//! (x_n − f, U₂), the cone endofunctor, and the ε-extended morphism
//! complex between cone objects.

pub mod functors;
pub mod matrix;
pub mod mf;
pub mod morphism;

pub use functors::{
    cone_endofunctor, pushforward_mf, restrict_mf, signed_permutation_similarity, split_potential, Similarity,
    SplitPotential,
};
pub use matrix::PolyMatrix;
pub use mf::{check_mf, koszul, tensor, MatrixFactorization, MfFile};
pub use morphism::{epsilon_hom_differential, epsilon_morphism, hom_differential, ConeObject, Morphism};

use crate::exact_algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MfError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{var} appears with exponent {degree}; only linear dependence is supported")]
    DegreeTooHighInXn { var: String, degree: u32 },
    #[error("potential mismatch: expected {expected}, got {got}")]
    PotentialMismatch { expected: String, got: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
