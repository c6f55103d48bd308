use std::collections::BTreeSet;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact_algebra::rational::{serde_rat, Rational};
use crate::exact_algebra::{Polynomial, WeightSystem};
use crate::lg_core::{max_symmetry_group, monodromy_element, weight_system, DiagonalGroup, GroupElement};

use super::{one_based, SectorError};

/// W together with its weight system and G_W, computed once.
#[derive(Clone, Debug)]
pub struct LgContext {
    pub w: Polynomial,
    pub ws: WeightSystem,
    pub gw: DiagonalGroup,
}

impl LgContext {
    pub fn new(w: Polynomial) -> Result<Self, SectorError> {
        let ws = weight_system(&w)?;
        let gw = max_symmetry_group(&w)?;
        Ok(LgContext { w, ws, gw })
    }

    pub fn n(&self) -> usize {
        self.w.nvars()
    }

    pub fn theta_j(&self) -> Vec<Rational> {
        self.ws.theta_j()
    }

    /// J^k
    pub fn j_power(&self, k: i64) -> GroupElement {
        monodromy_element(&self.ws).pow(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SectorKey {
    #[serde(with = "serde_rat")]
    pub l: Rational,
    pub g: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedSector {
    pub key: SectorKey,
    #[serde(rename = "K", with = "one_based")]
    pub k: BTreeSet<usize>,
    #[serde(rename = "I", with = "one_based")]
    pub i: BTreeSet<usize>,
    #[serde(rename = "Ic", with = "one_based")]
    pub ic: BTreeSet<usize>,
    pub w_restricted_zero: bool,
    pub dim_fixed: usize,
    pub nonempty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorInvariants {
    #[serde(with = "serde_rat")]
    pub rotation: Rational,
    #[serde(with = "serde_rat")]
    pub maslov: Rational,
    #[serde(rename = "mu_RS", with = "serde_rat")]
    pub mu_rs: Rational,
    #[serde(with = "serde_rat")]
    pub star: Rational,
    #[serde(with = "serde_rat")]
    pub age: Rational,
}

/// K = {i : θ_{g,i} + l·θ_{J,i} ∈ ℤ}
pub fn fixed_coordinates(g: &GroupElement, l: &Rational, ws: &WeightSystem) -> BTreeSet<usize> {
    ws.theta_j()
        .iter()
        .zip(&g.phases)
        .enumerate()
        .filter(|(_, (tj, tg))| (*tg + l * *tj).is_integer())
        .map(|(i, _)| i)
        .collect()
}

/// I = {i : ∂ᵢW restricted to ℂ^K vanishes identically}, Iᶜ its complement.
pub fn derivative_index_sets(
    w: &Polynomial,
    k: &BTreeSet<usize>,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>), SectorError> {
    let mut i_set = BTreeSet::new();
    let mut ic = BTreeSet::new();
    for i in 0..w.nvars() {
        if w.partial_derivative(i)?.restrict_to_coordinates(k)?.is_zero() {
            i_set.insert(i);
        } else {
            ic.insert(i);
        }
    }
    Ok((i_set, ic))
}

impl LgContext {
    pub fn sector(&self, g: &GroupElement, l: &Rational) -> Result<TwistedSector, SectorError> {
        if !l.is_positive() {
            return Err(SectorError::NonPositivePeriod);
        }
        if !self.gw.contains(g) {
            return Err(crate::lg_core::LgError::NotInGroup.into());
        }
        let k = fixed_coordinates(g, l, &self.ws);
        let (i, ic) = derivative_index_sets(&self.w, &k)?;
        let w_restricted_zero = self.w.restrict_to_coordinates(&k)?.is_zero();
        let nonempty = !k.is_empty() && (w_restricted_zero || k.len() >= 2);
        Ok(TwistedSector {
            key: SectorKey { l: l.clone(), g: g.clone() },
            dim_fixed: k.len(),
            k,
            i,
            ic,
            w_restricted_zero,
            nonempty,
        })
    }
}

/// Every nonempty Σ_{g,l} with 0 < l ≤ l_max, sorted by (l, g).
pub fn enumerate_sectors(ctx: &LgContext, l_max: &Rational) -> Result<Vec<TwistedSector>, SectorError> {
    let elems = ctx.gw.elements()?;
    let tj = ctx.theta_j();
    let keys: BTreeSet<SectorKey> = elems
        .par_iter()
        .flat_map_iter(|g| candidate_periods(g, &tj, l_max).into_iter().map(move |l| SectorKey { l, g: g.clone() }))
        .collect();
    let keys: Vec<SectorKey> = keys.into_iter().collect();
    let out: Result<Vec<Option<TwistedSector>>, SectorError> = keys
        .par_iter()
        .map(|key| {
            let s = ctx.sector(&key.g, &key.l)?;
            Ok(s.nonempty.then_some(s))
        })
        .collect();
    Ok(out?.into_iter().flatten().collect())
}

// l = (k − θ_{g,i})/θ_{J,i} for integers k, restricted to (0, l_max]
fn candidate_periods(g: &GroupElement, tj: &[Rational], l_max: &Rational) -> BTreeSet<Rational> {
    let mut out = BTreeSet::new();
    for (tg, t) in g.phases.iter().zip(tj) {
        let top = (tg + l_max * t).floor().to_integer();
        let mut k = (tg.floor() + Rational::from_integer(1.into())).to_integer();
        while k <= top {
            let l = (Rational::from_integer(k.clone()) - tg) / t;
            if l.is_positive() && &l <= l_max {
                out.insert(l);
            }
            k += 1;
        }
    }
    out
}

/// Γ_W's sector (J⁻¹, 1).
pub fn principal_orbit(ctx: &LgContext) -> Result<TwistedSector, SectorError> {
    ctx.sector(&ctx.j_power(-1), &Rational::from_integer(1.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::rat;

    fn ctx(s: &str) -> LgContext {
        LgContext::new(Polynomial::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn chain_sector_at_one_third() {
        let c = ctx("x^2*y + y^4");
        let s = c.sector(&c.j_power(-3), &rat(1, 3)).unwrap();
        assert_eq!(s.k, BTreeSet::from([0]));
        assert_eq!(s.i, BTreeSet::from([0]));
        assert_eq!(s.ic, BTreeSet::from([1]));
        assert!(s.w_restricted_zero && s.nonempty);
        assert_eq!(s.dim_fixed, 1);
    }

    #[test]
    fn quadric_sectors() {
        let c = ctx("x^2 + y^2");
        let s = c.sector(&GroupElement::new(vec![rat(1, 2), rat(0, 1)]), &rat(1, 2)).unwrap();
        assert!(s.k.is_empty() && !s.nonempty);
        let all = enumerate_sectors(&c, &rat(1, 1)).unwrap();
        assert!(all.iter().any(|s| s.key.g == c.j_power(-1) && s.key.l == rat(1, 1) && s.k.len() == 2));
        assert!(all.windows(2).all(|p| p[0].key < p[1].key));
    }

    #[test]
    fn chain_enumeration_contains_example() {
        let c = ctx("x^2*y + y^4");
        let all = enumerate_sectors(&c, &rat(1, 2)).unwrap();
        assert!(all.iter().any(|s| s.key.g == c.j_power(-3) && s.key.l == rat(1, 3)));
    }

    #[test]
    fn non_member_rejected() {
        let c = ctx("x^2 + y^2");
        let g = GroupElement::new(vec![rat(1, 3), rat(0, 1)]);
        assert!(c.sector(&g, &rat(1, 1)).is_err());
    }
}
