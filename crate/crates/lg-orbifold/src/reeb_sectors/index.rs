use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact_algebra::rational::{serde_rat, Rational};
use crate::exact_algebra::WeightSystem;
use crate::lg_core::GroupElement;

use super::sector::{SectorInvariants, TwistedSector};
use super::SectorError;

fn two() -> Rational {
    Rational::from_integer(2.into())
}

/// Q(s) = 2s for integral s, 2⌊s⌋+1 otherwise.
pub fn q_function(s: &Rational) -> Rational {
    if s.is_integer() {
        two() * s
    } else {
        two() * s.floor() + Rational::from_integer(1.into())
    }
}

pub fn age(g: &GroupElement) -> Rational {
    g.age()
}

fn require_nonempty(s: &TwistedSector) -> Result<(), SectorError> {
    if s.nonempty {
        Ok(())
    } else {
        Err(SectorError::EmptySector)
    }
}

/// Rotation of the frame along γ: −Σ_{I} θ_{g,i} + Σ_{Iᶜ} (lθ_{J,j} − l).
pub fn rotation_number(s: &TwistedSector, ws: &WeightSystem) -> Result<Rational, SectorError> {
    require_nonempty(s)?;
    let tj = ws.theta_j();
    let g = &s.key.g.phases;
    let l = &s.key.l;
    let a: Rational = s.i.iter().map(|&i| g[i].clone()).sum();
    let b: Rational = s.ic.iter().map(|&j| l * &tj[j] - l).sum();
    Ok(b - a)
}

/// Σ_{I} Q(lθ_{J,i}+θ_{g,i}) + (|Iᶜ|−1)·Q(l)
pub fn maslov_term(s: &TwistedSector, ws: &WeightSystem) -> Result<Rational, SectorError> {
    require_nonempty(s)?;
    let tj = ws.theta_j();
    let l = &s.key.l;
    let a: Rational = s.i.iter().map(|&i| q_function(&(l * &tj[i] + &s.key.g.phases[i]))).sum();
    let m = Rational::from_integer((s.ic.len() as i64 - 1).into());
    Ok(a + m * q_function(l))
}

/// μ_RS, evaluated term by term in a single pass over the coordinates.
pub fn rs_index(s: &TwistedSector, ws: &WeightSystem) -> Result<Rational, SectorError> {
    require_nonempty(s)?;
    let tj = ws.theta_j();
    let l = &s.key.l;
    let ql = q_function(l);
    let mut mu = -ql.clone();
    for i in 0..tj.len() {
        let tg = &s.key.g.phases[i];
        if s.i.contains(&i) {
            mu += q_function(&(l * &tj[i] + tg)) - two() * tg;
        } else {
            mu += two() * (l * &tj[i] - l) + &ql;
        }
    }
    Ok(mu)
}

/// ⋆ = n − dim (ℂⁿ)^{g,l} − μ_RS
pub fn degree_shift(s: &TwistedSector, ws: &WeightSystem) -> Result<Rational, SectorError> {
    let mu = rs_index(s, ws)?;
    let n = Rational::from_integer((ws.n() as i64).into());
    Ok(n - Rational::from_integer((s.dim_fixed as i64).into()) - mu)
}

pub fn invariants(s: &TwistedSector, ws: &WeightSystem) -> Result<SectorInvariants, SectorError> {
    let rotation = rotation_number(s, ws)?;
    let maslov = maslov_term(s, ws)?;
    let mu_rs = two() * &rotation + &maslov;
    let n = Rational::from_integer((ws.n() as i64).into());
    let star = n - Rational::from_integer((s.dim_fixed as i64).into()) - &mu_rs;
    Ok(SectorInvariants { rotation, maslov, mu_rs, star, age: s.key.g.age() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub holds: bool,
    #[serde(with = "serde_rat")]
    pub star: Rational,
    #[serde(with = "serde_rat")]
    pub bound: Rational,
    #[serde(with = "serde_rat")]
    pub margin: Rational,
}

/// ⋆_{g,l} ≥ −2l(Σw−h)/h, with margin ⋆ − bound.
pub fn check_shift_inequality(s: &TwistedSector, ws: &WeightSystem) -> Result<ShiftCheck, SectorError> {
    let star = degree_shift(s, ws)?;
    let e = Rational::from_integer(ws.excess());
    let h = Rational::from_integer(ws.h.clone());
    let bound = -(two() * &s.key.l * e / h);
    let margin = &star - &bound;
    Ok(ShiftCheck { holds: margin >= Rational::zero(), star, bound, margin })
}
