use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "entries_serde")]
    data: Vec<Vec<BigInt>>,
}

mod entries_serde {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = d.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        serde::Serialize::serialize(&v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.into_iter().map(|r| r.into_iter().map(|x| x.parse().map_err(D::Error::custom)).collect()).collect()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        IntMatrix { rows: r, cols: c, data: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn rows_vec(&self) -> &Vec<Vec<BigInt>> {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&r| !m[r][k].is_zero());
            let Some(p) = p else { return Some(BigInt::zero()) };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Some(sign * &m[n - 1][n - 1])
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Applies the matrix to a rational column vector.
    pub fn apply_rational(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i]
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, x)| acc + Rational::from_integer(a.clone()) * x)
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let s = self.data[src].clone();
        for (d, x) in self.data[dst].iter_mut().zip(s) {
            *d += q * x;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in &mut self.data {
            let v = q * &r[src];
            r[dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -x.clone();
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// U·A·V = D with U, V unimodular and d₁ | d₂ | … on the diagonal.
/// `v_inv` is kept alongside V so group coordinates never need an inversion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    #[serde(skip)]
    pub diagonal: Vec<BigInt>,
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut vi = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero pivot in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d.data[i][j].is_zero() && best.is_none_or(|(bi, bj)| d.data[i][j].abs() < d.data[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                d.swap_rows(pi, t);
                u.swap_rows(pi, t);
            }
            if pj != t {
                d.swap_cols(pj, t);
                v.swap_cols(pj, t);
                vi.swap_rows(pj, t);
            }
            let mut dirty = false;
            for i in t + 1..m {
                if d.data[i][t].is_zero() {
                    continue;
                }
                let q = d.data[i][t].div_floor(&d.data[t][t]);
                let nq = -q;
                d.add_row(i, t, &nq);
                u.add_row(i, t, &nq);
                if !d.data[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d.data[t][j].is_zero() {
                    continue;
                }
                let q = d.data[t][j].div_floor(&d.data[t][t]);
                let nq = -q.clone();
                d.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                // inverse of the column operation acts on rows of V⁻¹
                vi.add_row(t, j, &q);
                if !d.data[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let piv = d.data[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.data[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    let diagonal = (0..m.min(n)).map(|i| d.data[i][i].clone()).collect();
    SnfDecomposition { u, d, v, v_inv: vi, diagonal }
}

impl SnfDecomposition {
    /// Exact check of U·A·V = D, V·V⁻¹ = 1 and the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let prod = self.u.mul(a).mul(&self.v);
        if prod != self.d {
            return false;
        }
        if self.v.mul(&self.v_inv) != IntMatrix::identity(self.v.rows) {
            return false;
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.data[i][j].is_zero() {
                    return false;
                }
            }
        }
        let diag = &self.diagonal;
        for w in diag.windows(2) {
            if w[0].is_zero() {
                if !w[1].is_zero() {
                    return false;
                }
            } else if !w[1].is_multiple_of(&w[0]) {
                return false;
            }
        }
        let du = self.u.det().map(|x| x.abs());
        let dv = self.v.det().map(|x| x.abs());
        du == Some(BigInt::one()) && dv == Some(BigInt::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(s: &SnfDecomposition) -> Vec<i64> {
        s.diagonal.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn known_normal_forms() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(diag(&s), vec![2, 2]);

        let a = IntMatrix::from_i64(&[&[2, 1], &[0, 4]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(diag(&s), vec![1, 8]);

        let a = IntMatrix::from_i64(&[&[0]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(diag(&s), vec![0]);
    }

    #[test]
    fn rectangular_and_determinant() {
        let a = IntMatrix::from_i64(&[&[3, 0], &[1, 3], &[0, 9]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(IntMatrix::from_i64(&[&[2, 1], &[0, 4]]).det(), Some(BigInt::from(8)));
        assert_eq!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).det(), Some(BigInt::zero()));
    }
}
