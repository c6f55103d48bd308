//! Sign exponents. Every function takes integer degrees (true degrees, or
//! ℤ/2 lifts of fractional ones) indexed by 1-based input position, and
//! returns the exponent exactly; only its parity matters.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::popsicle_moduli::{AdmissibleCut, Flavor};

fn deg(d: &[i64], j: usize) -> i64 {
    d[j - 1]
}

/// Exponent of the cochain-level cap action with b in slot i:
/// Σ_{j<i}(j−1)·deg a_j + i·deg b + Σ_{j>i} j·deg a_j − deg Γ.
/// The first sum is read with deg a_j; as printed it would not depend on j.
pub fn cap_sign(n: usize, i: usize, degrees: &[i64], deg_gamma: i64) -> i64 {
    assert!(1 <= i && i <= n && degrees.len() == n);
    let mut s = i as i64 * deg(degrees, i) - deg_gamma;
    for j in 1..=n {
        if j < i {
            s += (j as i64 - 1) * deg(degrees, j);
        } else if j > i {
            s += j as i64 * deg(degrees, j);
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignExponents {
    pub star_a: i64,
    /// ⋆ᵇ_{n,F̂ʲ} keyed by the omitted slot i_j.
    pub star_b: BTreeMap<usize, i64>,
    /// ⋆_j for j = 0..=n.
    pub star_prefix: Vec<i64>,
}

fn diamond(degrees: &[i64]) -> i64 {
    degrees.iter().enumerate().map(|(j, d)| (j as i64 + 1) * d).sum()
}

fn tail(degrees: &[i64], f: &BTreeSet<usize>) -> i64 {
    let n = degrees.len();
    f.iter().map(|&f| (f + 1..=n).map(|l| deg(degrees, l) - 1).sum::<i64>()).sum()
}

/// ⋆ᵃ_{n,F} = Σ j·deg x_j + Σ_{f∈F, l>f}(deg x_l − 1).
pub fn star_a(degrees: &[i64], f: &BTreeSet<usize>) -> i64 {
    diamond(degrees) + tail(degrees, f)
}

/// ⋆_j = Σ_{l≤j}(deg x_l − 1).
pub fn star_prefix(degrees: &[i64], j: usize) -> i64 {
    (1..=j).map(|l| deg(degrees, l) - 1).sum()
}

/// The three exponent families of M_n with ε-slots F. In ⋆ᵇ the condition
/// `l > j` reuses the summation letter of the first sum; it is read as
/// l > f, so ⋆ᵇ_{n,F̂ʲ} has the same shape as ⋆ᵃ_{n,F̂ʲ}.
pub fn sign_exponents(n: usize, f: &BTreeSet<usize>, degrees: &[i64]) -> SignExponents {
    assert_eq!(degrees.len(), n);
    let star_b = f
        .iter()
        .map(|&ij| {
            let mut fh = f.clone();
            fh.remove(&ij);
            (ij, star_a(degrees, &fh))
        })
        .collect();
    SignExponents {
        star_a: star_a(degrees, f),
        star_b,
        star_prefix: (0..=n).map(|j| star_prefix(degrees, j)).collect(),
    }
}

/// Pairs (f₁, f₂) ∈ F₁ × F₂ with f₁ before f₂ once both are placed in F.
pub fn inversions(cut: &AdmissibleCut, f: &BTreeSet<usize>) -> Option<usize> {
    let (outer, inner) = cut.placement(f)?;
    Some(outer.values().map(|p| inner.values().filter(|q| p < q).count()).sum())
}

/// ♣ = n₂i + i + 1 + n₁|F₂| + (n₂+|F₂|)·Σ_{j≤i+|F₂|} deg a_j + #inversions.
/// `None` when the cut is not admissible for F.
pub fn clubsuit_sign(cut: &AdmissibleCut, f: &BTreeSet<usize>, degrees: &[i64]) -> Option<i64> {
    let inv = inversions(cut, f)? as i64;
    let (n1, n2, i) = (cut.n1 as i64, cut.n2 as i64, cut.i as i64);
    let k2 = cut.f2.len() as i64;
    let top = (cut.i + cut.f2.len()).min(degrees.len());
    let s: i64 = (1..=top).map(|j| deg(degrees, j)).sum();
    Some(n2 * i + i + 1 + n1 * k2 + (n2 + k2) * s + inv)
}

/// i + n₂i + n₂·Σ_{j ≥ i+n₂} deg a_j: the exponent that the classical
/// (F = ∅) part of the identity actually produces under ⋆ᵃ = Σ j·deg x_j.
pub fn clubsuit_classical(cut: &AdmissibleCut, degrees: &[i64]) -> i64 {
    let (n2, i) = (cut.n2 as i64, cut.i as i64);
    let s: i64 = (cut.i + cut.n2..=degrees.len()).map(|j| deg(degrees, j)).sum();
    i + n2 * i + n2 * s
}

/// Operators whose flavor repeats a colour count zero.
pub fn vanish_noninjective(flavor: &Flavor) -> bool {
    !flavor.is_injective()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn cap_sign_examples() {
        assert_eq!(cap_sign(1, 1, &[0], 0), 0);
        assert_eq!(cap_sign(3, 2, &[0, 0, 0], 0), 0);
        // (j−1)·deg a_j kills slot 1; only 2·deg b survives
        assert_eq!(cap_sign(2, 2, &[1, 1], 0), 2);
    }

    #[test]
    fn star_examples() {
        let e = sign_exponents(3, &BTreeSet::new(), &[1, 2, 3]);
        assert_eq!(e.star_a, 1 + 4 + 9);
        let e = sign_exponents(2, &set(&[1, 2]), &[0, 0]);
        assert_eq!(e.star_a, -1);
        assert_eq!(e.star_b[&1], 0);
        assert_eq!(e.star_b[&2], -1);
        let e = sign_exponents(4, &set(&[2]), &[1, 1, 1, 1]);
        assert!(e.star_prefix.iter().all(|&s| s == 0));
    }

    #[test]
    fn clubsuit_examples() {
        let cut = AdmissibleCut { n1: 1, n2: 2, i: 1, f1: set(&[]), f2: set(&[]) };
        assert_eq!(clubsuit_sign(&cut, &set(&[]), &[0, 0]), Some(4));
        // F₁={1} before F₂={1} placed at 2
        let cut = AdmissibleCut { n1: 2, n2: 1, i: 2, f1: set(&[1]), f2: set(&[1]) };
        assert_eq!(inversions(&cut, &set(&[1, 2])), Some(1));
        let bad = AdmissibleCut { n1: 2, n2: 1, i: 2, f1: set(&[1]), f2: set(&[1]) };
        assert_eq!(clubsuit_sign(&bad, &set(&[2]), &[0, 0]), None);
    }

    #[test]
    fn noninjective_flavors_vanish() {
        assert!(vanish_noninjective(&Flavor::new(2, vec![1, 1]).unwrap()));
        assert!(!vanish_noninjective(&Flavor::new(2, vec![1, 2]).unwrap()));
        assert!(!vanish_noninjective(&Flavor::new(3, vec![2]).unwrap()));
    }
}
