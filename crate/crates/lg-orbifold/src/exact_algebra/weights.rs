use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::rational::{lcm_denominators, Rational};
use super::AlgebraError;

/// Positive primitive solution (w₁..wₙ; h) of aₖ·w = h for every row aₖ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    #[serde(with = "super::rational::serde_num::vec")]
    pub w: Vec<BigInt>,
    #[serde(with = "super::rational::serde_num")]
    pub h: BigInt,
}

impl WeightSystem {
    pub fn new(w: Vec<i64>, h: i64) -> Self {
        WeightSystem { w: w.into_iter().map(BigInt::from).collect(), h: BigInt::from(h) }
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// w₁+…+wₙ−h
    pub fn excess(&self) -> BigInt {
        self.w.iter().sum::<BigInt>() - &self.h
    }

    pub fn is_primitive(&self) -> bool {
        self.w.iter().fold(self.h.clone(), |g, x| g.gcd(x)).is_one()
    }

    pub fn is_valid(&self) -> bool {
        self.h.is_positive() && self.w.iter().all(|x| x.is_positive()) && self.is_primitive()
    }

    /// wᵢ/h
    pub fn theta_j(&self) -> Vec<Rational> {
        self.w.iter().map(|x| Rational::new(x.clone(), self.h.clone())).collect()
    }

    pub fn satisfies(&self, rows: &[Vec<u32>]) -> bool {
        rows.iter().all(|r| r.iter().zip(&self.w).map(|(&a, w)| BigInt::from(a) * w).sum::<BigInt>() == self.h)
    }
}

pub fn solve_weight_equation(rows: &[Vec<u32>]) -> Result<WeightSystem, AlgebraError> {
    if rows.is_empty() {
        return Err(AlgebraError::NoWeightSystem);
    }
    let n = rows[0].len();
    let m = rows.len();
    // augmented rational system A·w = 1
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<Rational> = r.iter().map(|&x| Rational::from_integer(x.into())).collect();
            v.push(Rational::one());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=n {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return Err(AlgebraError::NoWeightSystem);
    }
    if pivots.len() < n {
        return Err(AlgebraError::NonUniqueWeights);
    }
    let mut sol = vec![Rational::zero(); n];
    for (k, &c) in pivots.iter().enumerate() {
        sol[c] = a[k][n].clone();
    }
    if sol.iter().any(|q| !q.is_positive()) {
        return Err(AlgebraError::NoWeightSystem);
    }
    let l = lcm_denominators(sol.iter());
    let mut w: Vec<BigInt> = sol.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut h = l;
    let g = w.iter().fold(h.clone(), |g, x| g.gcd(x));
    for x in w.iter_mut() {
        *x /= &g;
    }
    h /= &g;
    Ok(WeightSystem { w, h })
}

/// Exponent matrix (rows = monomials) as an integer matrix.
pub fn exponent_matrix(rows: &[Vec<u32>]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}
