//! Twisted Reeb orbit sectors Σ_{g,l} of the quotient Milnor fibre link,
//! their Robbin–Salamon indices and degree shifts, and the arithmetic side
//! of sphere-bubble vanishing.

pub mod index;
pub mod sector;
pub mod vanishing;

pub use index::{
    age, check_shift_inequality, degree_shift, invariants, maslov_term, q_function, rotation_number, rs_index,
    ShiftCheck,
};
pub use sector::{
    derivative_index_sets, enumerate_sectors, fixed_coordinates, principal_orbit, LgContext, SectorInvariants,
    SectorKey, TwistedSector,
};
pub use vanishing::{vanishing_certificate, BindingConstraint, CertificateReport, NCheck};

use crate::lg_core::LgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SectorError {
    #[error(transparent)]
    Lg(#[from] LgError),
    #[error("sector is empty")]
    EmptySector,
    #[error("period must be positive")]
    NonPositivePeriod,
    #[error("certificate not applicable: μ = {0} ≤ -1/2")]
    NotApplicable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<crate::exact_algebra::AlgebraError> for SectorError {
    fn from(e: crate::exact_algebra::AlgebraError) -> Self {
        SectorError::Lg(e.into())
    }
}

/// serde adapter printing 0-based index sets 1-based, as in the literature.
pub(crate) mod one_based {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &BTreeSet<usize>, s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<usize>, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.contains(&0) {
            return Err(serde::de::Error::custom("indices are 1-based"));
        }
        Ok(v.into_iter().map(|i| i - 1).collect())
    }
}
