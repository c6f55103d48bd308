use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::exact_algebra::rational::{fmt_rational, serde_rat, Rational};

use super::index::rs_index;
use super::sector::{principal_orbit, LgContext};
use super::SectorError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingConstraint {
    /// −lμ ≤ deg ξ ≤ −Nμ − N/2 has no solution with l ≥ 0.
    Degree,
    /// The degree bound forces l ≥ N(μ+1/2)/μ, beyond the action bound.
    DegreeAndAction,
    /// The system is feasible: no certificate for this N.
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NCheck {
    pub n: u64,
    pub infeasible: bool,
    pub binding: BindingConstraint,
    /// Lower bound on l from the degree inequalities (only for μ > 0).
    #[serde(with = "serde_rat::option", skip_serializing_if = "Option::is_none", default)]
    pub l_min: Option<Rational>,
    /// N²(1−ε) − ε, the action bound on l².
    #[serde(with = "serde_rat")]
    pub l_sq_max: Rational,
    /// Whether the bound as displayed, N²(1+1/μ)² ≤ l², is also infeasible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub displayed_form_infeasible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    #[serde(with = "serde_rat")]
    pub mu: Rational,
    #[serde(with = "serde_rat")]
    pub eps: Rational,
    pub checks: Vec<NCheck>,
    pub passes: bool,
}

/// For each 2 ≤ N ≤ n_max, decides exactly whether the degree bounds
/// −lμ ≤ deg ξ ≤ −Nμ − N/2 and the action bound l² ≤ N²(1−ε) − ε admit a
/// common period l ≥ 0.
pub fn vanishing_certificate(ctx: &LgContext, n_max: u64, eps: &Rational) -> Result<CertificateReport, SectorError> {
    if n_max < 2 {
        return Err(SectorError::InvalidArgument("N_max must be at least 2".into()));
    }
    if !eps.is_positive() || eps >= &Rational::one() {
        return Err(SectorError::InvalidArgument("eps must lie in (0,1)".into()));
    }
    let mu = rs_index(&principal_orbit(ctx)?, &ctx.ws)?;
    certificate_for_mu(&mu, n_max, eps)
}

pub fn certificate_for_mu(mu: &Rational, n_max: u64, eps: &Rational) -> Result<CertificateReport, SectorError> {
    let half = Rational::new(1.into(), 2.into());
    if mu <= &-half.clone() {
        return Err(SectorError::NotApplicable(fmt_rational(mu)));
    }
    let one = Rational::one();
    let mut checks = Vec::new();
    for n in 2..=n_max {
        let nn = Rational::from_integer(n.into());
        let l_sq_max = &nn * &nn * (&one - eps) - eps;
        let check = if mu.is_positive() {
            let l_min = &nn * (mu + &half) / mu;
            let infeasible = l_sq_max.is_negative() || &l_min * &l_min > l_sq_max;
            let shown = &nn * (&one + &one / mu);
            NCheck {
                n,
                infeasible,
                binding: if infeasible { BindingConstraint::DegreeAndAction } else { BindingConstraint::None },
                l_min: Some(l_min),
                displayed_form_infeasible: Some(&shown * &shown > l_sq_max),
                l_sq_max,
            }
        } else {
            // μ ≤ 0: deg ξ ≥ −lμ ≥ 0 for l ≥ 0, while −Nμ − N/2 < 0.
            let upper = -(&nn * mu) - &nn * &half;
            let infeasible = upper.is_negative();
            NCheck {
                n,
                infeasible,
                binding: if infeasible { BindingConstraint::Degree } else { BindingConstraint::None },
                l_min: None,
                displayed_form_infeasible: None,
                l_sq_max,
            }
        };
        checks.push(check);
    }
    let passes = checks.iter().all(|c| c.infeasible);
    Ok(CertificateReport { mu: mu.clone(), eps: eps.clone(), checks, passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::rat;
    use crate::exact_algebra::Polynomial;
    use num_traits::Zero;

    #[test]
    fn quadric_passes() {
        let c = LgContext::new(Polynomial::parse("x^2 + y^2").unwrap()).unwrap();
        let r = vanishing_certificate(&c, 50, &rat(1, 100)).unwrap();
        assert!(r.passes);
        assert!(r.mu.is_zero());
        assert_eq!(r.checks.len(), 49);
    }

    #[test]
    fn fano_quartic_fold_passes() {
        let c = LgContext::new(Polynomial::parse("x1^2 + x2^2 + x3^2 + x4^2").unwrap()).unwrap();
        let r = vanishing_certificate(&c, 50, &rat(1, 100)).unwrap();
        assert_eq!(r.mu, rat(2, 1));
        assert!(r.passes);
        assert!(r.checks.iter().all(|c| c.displayed_form_infeasible == Some(true)));
    }

    #[test]
    fn chain_not_applicable() {
        let c = LgContext::new(Polynomial::parse("x^2*y + y^4").unwrap()).unwrap();
        assert!(matches!(vanishing_certificate(&c, 10, &rat(1, 100)), Err(SectorError::NotApplicable(_))));
    }

    #[test]
    fn remark_range_uses_degree_branch() {
        let r = certificate_for_mu(&rat(-1, 4), 10, &rat(1, 100)).unwrap();
        assert!(r.passes);
        assert!(r.checks.iter().all(|c| c.binding == BindingConstraint::Degree));
    }
}
