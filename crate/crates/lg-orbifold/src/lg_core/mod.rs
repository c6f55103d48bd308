//! Weight systems, diagonal symmetry groups, Berglund–Hübsch duality and
//! the characters that twist the formal generator ε.

pub mod classify;
pub mod duality;
pub mod group;

use num_bigint::BigInt;

pub use classify::{check_nondegenerate, classify_type, Atom, IsolatedVerdict, NondegeneracyReport, PolyClass};
pub use duality::{bh_transpose, dual_group, epsilon_character, invertible_matrix, pairing};
pub use group::{max_symmetry_group, Character, DiagonalGroup, GroupElement, Subgroup};

use crate::exact_algebra::{AlgebraError, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LgError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("exponent matrix has rank {rank} < {n}: symmetry group is infinite")]
    InfiniteGroup { rank: usize, n: usize },
    #[error("polynomial is not invertible")]
    NotInvertible,
    #[error("not a subgroup of the maximal symmetry group")]
    NotASubgroup,
    #[error("character is not defined on the monodromy element")]
    CharacterUndefinedOnJ,
    #[error("element does not belong to the group")]
    NotInGroup,
    #[error("group of order {0} exceeds the enumeration cap")]
    TooLarge(BigInt),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("shape error: {0}")]
    Shape(String),
}

/// J, the exponential grading element θ_J = (w₁/h, …, wₙ/h).
pub fn monodromy_element(ws: &WeightSystem) -> GroupElement {
    GroupElement::new(ws.theta_j())
}

pub fn weight_system(w: &crate::exact_algebra::Polynomial) -> Result<WeightSystem, LgError> {
    Ok(crate::exact_algebra::solve_weight_equation(&w.exponent_rows())?)
}
