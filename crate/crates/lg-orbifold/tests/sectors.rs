mod common;

use std::collections::BTreeSet;

use lg_orbifold::exact_algebra::{int, rat, Polynomial, Rational, WeightSystem};
use lg_orbifold::lg_core::{classify_type, PolyClass};
use lg_orbifold::reeb_sectors::{
    check_shift_inequality, enumerate_sectors, invariants, maslov_term, principal_orbit, rotation_number, rs_index,
    vanishing_certificate, LgContext, SectorError,
};
use num_traits::Zero;
use proptest::prelude::*;

fn ctx(s: &str) -> LgContext {
    LgContext::new(Polynomial::parse(s).unwrap()).unwrap()
}

fn principal_oracle(ws: &WeightSystem, l: i64) -> Rational {
    let sum: Rational = ws.w.iter().map(|w| Rational::from_integer(w.clone())).sum();
    let h = Rational::from_integer(ws.h.clone());
    int(2 * l) * (sum - &h) / h
}

#[test]
fn principal_index_identity() {
    // one variable has an empty link, so no principal orbit
    let corpus: Vec<_> = common::invertible_corpus(80, 5, 6, 2024).into_iter().filter(|p| p.nvars() >= 2).collect();
    assert!(corpus.len() >= 50);
    for p in corpus {
        let c = LgContext::new(p.clone()).unwrap();
        for l in 1..=5 {
            let s = c.sector(&c.j_power(-l), &int(l)).unwrap();
            assert!(s.nonempty);
            assert_eq!(rs_index(&s, &c.ws).unwrap(), principal_oracle(&c.ws, l), "{p} l={l}");
        }
    }
}

#[test]
fn fractional_sector_of_the_chain() {
    let c = ctx("x^2*y + y^4");
    let s = c.sector(&c.j_power(-3), &rat(1, 3)).unwrap();
    assert_eq!(
        (s.k.clone(), s.i.clone(), s.ic.clone()),
        (BTreeSet::from([0]), BTreeSet::from([0]), BTreeSet::from([1]))
    );
    assert!(s.w_restricted_zero);
    let two_path = int(2) * rotation_number(&s, &c.ws).unwrap() + maslov_term(&s, &c.ws).unwrap();
    assert_eq!(rs_index(&s, &c.ws).unwrap(), two_path);
    // the displayed "−2+2=0" drops the rotation of the fixed coordinate
    assert_eq!(two_path, rat(-1, 4));
}

#[test]
fn sectors_match_a_period_grid() {
    // every nonempty sector with l ≤ 2 sits on the grid 1/(lcm w · |G_W|)
    for w in ["x^2*y + y^4", "x^3 + y^3", "x^2*y + y^2*z + z^3", "x^2 + y^2"] {
        let c = ctx(w);
        let lmax = int(2);
        let found: BTreeSet<_> = enumerate_sectors(&c, &lmax).unwrap().into_iter().map(|s| s.key).collect();
        let elems = c.gw.elements().unwrap();
        let step: i64 = c.ws.w.iter().map(|x| x.to_string().parse::<i64>().unwrap()).product::<i64>()
            * c.gw.order.to_string().parse::<i64>().unwrap();
        let mut brute = BTreeSet::new();
        for g in &elems {
            for k in 1..=2 * step {
                let l = rat(k, step);
                let tj = c.theta_j();
                let fixes = g.phases.iter().zip(&tj).any(|(tg, t)| (tg + &l * t).is_integer());
                if fixes {
                    let s = c.sector(g, &l).unwrap();
                    if s.nonempty {
                        brute.insert(s.key);
                    }
                }
            }
        }
        assert_eq!(found, brute, "{w}");
    }
}

#[test]
fn shift_inequality_on_a_corpus() {
    for p in common::invertible_corpus(25, 3, 5, 77) {
        let c = LgContext::new(p.clone()).unwrap();
        if c.gw.order > 200.into() {
            continue;
        }
        for s in enumerate_sectors(&c, &int(4)).unwrap() {
            let chk = check_shift_inequality(&s, &c.ws).unwrap();
            assert!(chk.margin >= Rational::zero(), "{p} {:?}", s.key);
        }
    }
}

#[test]
fn vanishing_certificates() {
    let cy = ctx("x^2 + y^2");
    assert_eq!(classify_type(&cy.ws), PolyClass::LogCalabiYau);
    assert!(vanishing_certificate(&cy, 50, &rat(1, 100)).unwrap().passes);
    for w in [
        "x^2 + y^2 + z^2",
        "x^2 + y^2 + z^3",
        "x^3 + y^3 + z^3 + w^3",
        "x^2*y + y^3 + z^2",
        "a^2 + b^2 + c^2 + d^2 + e^4",
    ] {
        let c = ctx(w);
        assert_eq!(classify_type(&c.ws), PolyClass::LogFano, "{w}");
        let r = vanishing_certificate(&c, 50, &rat(1, 100)).unwrap();
        assert!(r.passes, "{w}");
        assert_eq!(r.checks.len(), 49);
    }
    match vanishing_certificate(&ctx("x^2*y + y^4"), 50, &rat(1, 100)) {
        Err(SectorError::NotApplicable(mu)) => assert_eq!(mu, "-3/4"),
        other => panic!("expected NotApplicable, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn index_two_ways(seed in any::<u64>()) {
        let p = common::invertible_corpus(1, 3, 4, seed).remove(0);
        let c = LgContext::new(p).unwrap();
        prop_assume!(c.gw.order <= 64.into());
        for s in enumerate_sectors(&c, &int(2)).unwrap() {
            let inv = invariants(&s, &c.ws).unwrap();
            prop_assert_eq!(&inv.mu_rs, &(int(2) * &inv.rotation + &inv.maslov));
            prop_assert_eq!(rs_index(&s, &c.ws).unwrap(), inv.mu_rs.clone());
            prop_assert!(check_shift_inequality(&s, &c.ws).unwrap().holds);
        }
    }

    #[test]
    fn principal_orbit_is_j_inverse_at_one(seed in any::<u64>()) {
        let p = common::invertible_corpus(1, 5, 8, seed).remove(0);
        prop_assume!(p.nvars() >= 2);
        let c = LgContext::new(p).unwrap();
        let s = principal_orbit(&c).unwrap();
        prop_assert_eq!(s.k.len(), c.n());
        prop_assert_eq!(rs_index(&s, &c.ws).unwrap(), principal_oracle(&c.ws, 1));
    }
}
