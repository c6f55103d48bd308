#![allow(dead_code)]

use lg_orbifold::exact_algebra::{int, Polynomial, Rational};
use lg_orbifold::mf_restrict::{koszul, MatrixFactorization, PolyMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Invertible polynomial built from Fermat/chain/loop atoms, exponents in
/// 2..=max_exp, with at most n_max variables.
pub fn random_invertible(rng: &mut impl Rng, n_max: usize, max_exp: u32) -> String {
    let n = rng.gen_range(1..=n_max);
    let mut terms = Vec::new();
    let mut v = 1;
    while v <= n {
        let left = n - v + 1;
        let kind = rng.gen_range(0..3);
        let len = if kind == 0 || left == 1 { 1 } else { rng.gen_range(2..=left) };
        let exps: Vec<u32> = (0..len).map(|_| rng.gen_range(2..=max_exp)).collect();
        let vars: Vec<usize> = (v..v + len).collect();
        match (kind, len) {
            (_, 1) => terms.push(format!("x{}^{}", vars[0], exps[0])),
            (1, _) => {
                for k in 0..len {
                    if k + 1 < len {
                        terms.push(format!("x{}^{}*x{}", vars[k], exps[k], vars[k + 1]));
                    } else {
                        terms.push(format!("x{}^{}", vars[k], exps[k]));
                    }
                }
            }
            _ => {
                for k in 0..len {
                    terms.push(format!("x{}^{}*x{}", vars[k], exps[k], vars[(k + 1) % len]));
                }
            }
        }
        v += len;
    }
    terms.join(" + ")
}

/// Deterministic corpus of distinct invertible polynomials.
pub fn invertible_corpus(size: usize, n_max: usize, max_exp: u32, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < size && tries < size * 50 {
        tries += 1;
        let s = random_invertible(&mut rng, n_max, max_exp);
        let p = Polynomial::parse(&s).unwrap();
        if seen.insert(p.to_string()) {
            out.push(p);
        }
    }
    out
}

pub fn vars() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

/// Random polynomial in x, y (z only when `with_z`), total degree ≤ d.
pub fn random_poly(rng: &mut impl Rng, d: u32, with_z: bool, nonzero: bool) -> Polynomial {
    loop {
        let mut p = Polynomial::zero(&vars());
        for _ in 0..rng.gen_range(1..=3) {
            let a = rng.gen_range(0..=d);
            let b = rng.gen_range(0..=d - a);
            let c = if with_z { rng.gen_range(0..=d - a - b) } else { 0 };
            let coef = Rational::from_integer(rng.gen_range(-3i64..=3).into());
            p = p.add(&Polynomial::monomial(&vars(), vec![a, b, c], coef)).unwrap();
        }
        if !nonzero || !p.is_zero() {
            return p;
        }
    }
}

pub fn z() -> Polynomial {
    Polynomial::var(&vars(), 2).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> PolyMatrix {
    let rows = (0..n).map(|_| (0..n).map(|_| random_poly(rng, 1, true, false)).collect()).collect();
    PolyMatrix::from_rows(&vars(), rows).unwrap()
}

pub struct Instance {
    pub n: MatrixFactorization,
    pub m: MatrixFactorization,
    pub u: Polynomial,
    pub v: Polynomial,
    pub f: Polynomial,
}

/// N is a Koszul factorization of V(x, y); M is a factorization of
/// U = V + (z − f)·U₂ built from a rescaled, reordered presentation of V.
pub fn instance(rng: &mut impl Rng) -> Instance {
    let k = rng.gen_range(1..=2);
    let pairs: Vec<(Polynomial, Polynomial)> =
        (0..k).map(|_| (random_poly(rng, 2, false, true), random_poly(rng, 2, false, true))).collect();
    let v = pairs.iter().fold(Polynomial::zero(&vars()), |s, (p, q)| s.add(&p.mul(q).unwrap()).unwrap());
    let f = random_poly(rng, 2, false, false);
    let u2 = random_poly(rng, 2, false, true);
    let t = z().sub(&f).unwrap();
    let u = v.add(&t.mul(&u2).unwrap()).unwrap();
    let c = int(rng.gen_range(1..=3));
    let mut other: Vec<_> = pairs.iter().rev().map(|(p, q)| (q.scale(&c), p.scale(&(int(1) / &c)))).collect();
    other.insert(rng.gen_range(0..=other.len()), (t, u2));
    Instance { n: koszul(&pairs).unwrap(), m: koszul(&other).unwrap(), u, v, f }
}
