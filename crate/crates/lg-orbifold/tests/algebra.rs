mod common;

use std::collections::BTreeSet;

use lg_orbifold::exact_algebra::{rat, smith_normal_form, IntMatrix, Polynomial, Rational};
use lg_orbifold::lg_core::{
    bh_transpose, dual_group, invertible_matrix, max_symmetry_group, monodromy_element, weight_system, GroupElement,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use proptest::prelude::*;

/// Leibniz expansion, independent of the elimination in the library.
fn det_oracle(m: &[Vec<i64>]) -> i64 {
    fn go(m: &[Vec<i64>], cols: &mut Vec<usize>, row: usize) -> i64 {
        if row == m.len() {
            let mut inv = 0;
            for a in 0..cols.len() {
                for b in a + 1..cols.len() {
                    if cols[a] > cols[b] {
                        inv += 1;
                    }
                }
            }
            return if inv % 2 == 0 { 1 } else { -1 };
        }
        let mut s = 0;
        for c in 0..m.len() {
            if !cols.contains(&c) && m[row][c] != 0 {
                cols.push(c);
                s += m[row][c] * go(m, cols, row + 1);
                cols.pop();
            }
        }
        s
    }
    go(m, &mut Vec::new(), 0)
}

fn as_i64(a: &IntMatrix) -> Vec<Vec<i64>> {
    a.rows_vec().iter().map(|r| r.iter().map(|x| x.to_string().parse().unwrap()).collect()).collect()
}

/// Every monomial has weighted degree h and the weights are coprime.
fn weights_oracle(p: &Polynomial, w: &[BigInt], h: &BigInt) -> bool {
    let homogeneous = p.exponent_rows().iter().all(|row| {
        let d: BigInt = row.iter().zip(w).map(|(&e, wi)| BigInt::from(e) * wi).sum();
        &d == h
    });
    let g = w.iter().fold(h.clone(), |g, x| g.gcd(x));
    homogeneous && g == BigInt::from(1) && w.iter().all(|x| x.is_positive())
}

#[test]
fn paper_weight_systems() {
    let p = Polynomial::parse("x^2*y + y^4").unwrap();
    let ws = weight_system(&p).unwrap();
    assert_eq!(ws.w, vec![BigInt::from(3), BigInt::from(2)]);
    assert_eq!(ws.h, BigInt::from(8));
    let g = max_symmetry_group(&p).unwrap();
    assert_eq!(g.order, BigInt::from(8));
    assert!(g.is_cyclic());

    let g = max_symmetry_group(&Polynomial::parse("x^2 + y^2").unwrap()).unwrap();
    assert_eq!(g.invariant_factors, vec![BigInt::from(2), BigInt::from(2)]);
}

#[test]
fn snf_of_a_known_matrix() {
    let a = IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let s = smith_normal_form(&a);
    assert!(s.verify(&a));
    assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
}

#[test]
fn corpus_group_orders_match_determinants() {
    for p in common::invertible_corpus(80, 4, 6, 11) {
        let a = invertible_matrix(&p).unwrap();
        let d = det_oracle(&as_i64(&a)).abs();
        let g = max_symmetry_group(&p).unwrap();
        assert_eq!(g.order, BigInt::from(d), "{p}");
        let ws = weight_system(&p).unwrap();
        assert!(weights_oracle(&p, &ws.w, &ws.h), "{p}");
        assert!(g.contains(&monodromy_element(&ws)), "{p}");
    }
}

#[test]
fn group_elements_brute_force() {
    // count diagonal phases (k₁/d, …, kₙ/d) fixing every monomial
    for p in common::invertible_corpus(25, 3, 4, 5) {
        let g = max_symmetry_group(&p).unwrap();
        let d: i64 = g.order.to_string().parse().unwrap();
        let rows = p.exponent_rows();
        let n = p.nvars();
        let mut count = 0;
        let mut k = vec![0i64; n];
        loop {
            if rows.iter().all(|r| r.iter().zip(&k).map(|(&e, &ki)| e as i64 * ki).sum::<i64>() % d == 0) {
                count += 1;
                let e = GroupElement::new(k.iter().map(|&ki| rat(ki, d)).collect());
                assert!(g.contains(&e));
            }
            let mut i = 0;
            while i < n {
                k[i] += 1;
                if k[i] < d {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        assert_eq!(count, d, "{p}");
    }
}

#[test]
fn duality_is_an_involution_on_subgroups() {
    for p in common::invertible_corpus(12, 3, 4, 23) {
        let t = bh_transpose(&p).unwrap();
        assert_eq!(bh_transpose(&t).unwrap(), p);
        let gw = max_symmetry_group(&p).unwrap();
        let gwt = max_symmetry_group(&t).unwrap();
        assert_eq!(gw.order, gwt.order);
        for g in gw.all_subgroups().unwrap() {
            let d = dual_group(&g, &p).unwrap();
            assert_eq!(BigInt::from(g.order() * d.order()), gw.order, "{p}");
            let dd = dual_group(&d, &t).unwrap();
            let a: BTreeSet<_> = g.elements.iter().cloned().collect();
            let b: BTreeSet<_> = dd.elements.iter().cloned().collect();
            assert_eq!(a, b, "{p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn snf_certificate(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 1..=4)) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = IntMatrix::from_i64(&refs);
        let s = smith_normal_form(&a);
        prop_assert!(s.verify(&a));
        if rows.len() == 3 {
            let prod = s.diagonal.iter().fold(BigInt::from(1), |acc, x| acc * x);
            prop_assert_eq!(prod.abs(), BigInt::from(det_oracle(&rows).abs()));
        }
    }

    #[test]
    fn transpose_round_trip(seed in any::<u64>()) {
        let p = &common::invertible_corpus(1, 5, 7, seed)[0];
        let a = invertible_matrix(p).unwrap();
        let t = bh_transpose(p).unwrap();
        prop_assert_eq!(invertible_matrix(&t).unwrap(), a.transpose());
        prop_assert_eq!(&bh_transpose(&t).unwrap(), p);
    }

    #[test]
    fn monodromy_has_weight_phases(seed in any::<u64>()) {
        let p = &common::invertible_corpus(1, 5, 7, seed)[0];
        let ws = weight_system(p).unwrap();
        let j = monodromy_element(&ws);
        let h = Rational::from_integer(ws.h.clone());
        for (t, w) in j.phases.iter().zip(&ws.w) {
            prop_assert_eq!(t.clone(), Rational::from_integer(w.clone()) / &h);
        }
        prop_assert!(max_symmetry_group(p).unwrap().contains(&j));
        prop_assert!(j.pow(ws.h.to_string().parse::<i64>().unwrap()).is_identity());
    }
}
