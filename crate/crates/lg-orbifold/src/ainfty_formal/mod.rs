//! Formal side of the ε-extended A∞-structure: sign exponents, the
//! expansion of M_n into popsicle operators P_{n,F}, and a verifier that
//! sorts the terms of the A∞-identity into admissible-cut relations.

pub mod expand;
pub mod signs;
pub mod verify;

pub use expand::{expand_mn, identity_terms, FormalExpression, IdentityTerm, Node, Term};
pub use signs::{cap_sign, clubsuit_classical, clubsuit_sign, sign_exponents, vanish_noninjective, SignExponents};
pub use verify::{leibniz_terms, verify_ainfty, RelationCheck, UnmatchedTerm, VerificationReport};

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::exact_algebra::rational::{parity, serde_rat};
use crate::exact_algebra::{int, Rational};

/// Largest arity the verifier accepts. The cut enumeration is 4ⁿ.
pub const MAX_ARITY: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AinftyError {
    #[error("arity {0} outside 1..={MAX_ARITY}")]
    Arity(usize),
    #[error("ε-slot {slot} outside 1..={n}")]
    Slot { slot: usize, n: usize },
    #[error("parity {parity} is inconsistent with integral degree {degree}")]
    Parity { degree: String, parity: u8 },
    #[error("expected {expected} degrees, got {got}")]
    Degrees { expected: usize, got: usize },
}

/// A rational degree together with the ℤ/2 grading used in signs.
/// For integral degrees the two must agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grading {
    #[serde(with = "serde_rat")]
    pub degree: Rational,
    pub parity: u8,
}

impl Grading {
    pub fn new(degree: Rational, bit: u8) -> Result<Self, AinftyError> {
        let p = bit % 2;
        match parity(&degree) {
            Some(q) if q != p => Err(AinftyError::Parity { degree: degree.to_string(), parity: bit }),
            _ => Ok(Grading { degree, parity: p }),
        }
    }

    /// Only for integral degrees.
    pub fn integral(degree: Rational) -> Option<Self> {
        parity(&degree).map(|p| Grading { degree, parity: p })
    }

    pub fn int(d: i64) -> Self {
        Grading::integral(int(d)).unwrap()
    }

    /// deg ε = −1 + deg Γ.
    pub fn epsilon(gamma: &Grading) -> Self {
        Grading { degree: &gamma.degree - Rational::one(), parity: (gamma.parity + 1) % 2 }
    }

    pub fn add(&self, other: &Grading) -> Grading {
        Grading { degree: &self.degree + &other.degree, parity: (self.parity + other.parity) % 2 }
    }
}

/// An input slot of M_n: `a` or `εb`, with the degree of the underlying
/// a or b.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalGenerator {
    pub name: String,
    pub eps: bool,
    pub base: Grading,
}

impl FormalGenerator {
    pub fn plain(name: impl Into<String>, base: Grading) -> Self {
        FormalGenerator { name: name.into(), eps: false, base }
    }

    pub fn eps(name: impl Into<String>, base: Grading) -> Self {
        FormalGenerator { name: name.into(), eps: true, base }
    }

    pub fn degree(&self, gamma: &Grading) -> Grading {
        if self.eps {
            self.base.add(&Grading::epsilon(gamma))
        } else {
            self.base.clone()
        }
    }
}

/// The popsicle operator P_{n,F}; m_n when F is empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Operator {
    pub n: usize,
    pub f: BTreeSet<usize>,
}

impl Operator {
    pub fn new(n: usize, f: BTreeSet<usize>) -> Self {
        Operator { n, f }
    }

    /// 2 − n − |F|(1 − deg Γ).
    pub fn degree(&self, gamma: &Grading) -> Grading {
        let k = self.f.len() as i64;
        Grading {
            degree: int(2 - self.n as i64) - int(k) * (Rational::one() - &gamma.degree),
            parity: ((self.n as i64 + k * (1 + gamma.parity as i64)) % 2) as u8,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_empty() {
            write!(f, "m_{}", self.n)
        } else {
            let s: Vec<String> = self.f.iter().map(|x| x.to_string()).collect();
            write!(f, "P_{{{},{{{}}}}}", self.n, s.join(","))
        }
    }
}

pub(crate) fn check_slots(n: usize, eps: &BTreeSet<usize>) -> Result<(), AinftyError> {
    if n == 0 || n > MAX_ARITY {
        return Err(AinftyError::Arity(n));
    }
    if let Some(&s) = eps.iter().find(|&&s| s == 0 || s > n) {
        return Err(AinftyError::Slot { slot: s, n });
    }
    Ok(())
}
