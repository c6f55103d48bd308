use serde::{Deserialize, Serialize};

use super::{MfError, PolyMatrix};
use crate::exact_algebra::Polynomial;

/// (A, B) with A·B = B·A = W·Id. A maps the odd part to the even part and
/// B the even part to the odd part, so δ = [[0, A], [B, 0]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    pub potential: Polynomial,
    pub a: PolyMatrix,
    pub b: PolyMatrix,
}

/// On-disk form: every polynomial as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfFile {
    pub potential: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
}

impl MatrixFactorization {
    /// Square matrices of one size over the potential's variables.
    pub fn new(potential: Polynomial, a: PolyMatrix, b: PolyMatrix) -> Result<Self, MfError> {
        let r = a.nrows();
        if a.ncols() != r || b.nrows() != r || b.ncols() != r {
            return Err(MfError::ShapeMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        if a.vars() != potential.vars() || b.vars() != potential.vars() {
            return Err(MfError::ShapeMismatch("matrices and potential use different variables".into()));
        }
        Ok(MatrixFactorization { potential, a, b })
    }

    pub fn rank(&self) -> usize {
        self.a.nrows()
    }

    pub fn vars(&self) -> &[String] {
        self.potential.vars()
    }

    /// δ on the total space, even part first.
    pub fn delta(&self) -> PolyMatrix {
        let r = self.rank();
        let z = PolyMatrix::zeros(self.vars(), r, r);
        PolyMatrix::block(&z, &self.a, &self.b, &z).expect("square blocks")
    }

    pub fn with_vars(&self, vars: &[String]) -> Result<Self, MfError> {
        Ok(MatrixFactorization {
            potential: self.potential.with_vars(vars)?,
            a: self.a.with_vars(vars)?,
            b: self.b.with_vars(vars)?,
        })
    }

    pub fn from_file(f: &MfFile) -> Result<Self, MfError> {
        let mut texts: Vec<&str> = vec![f.potential.as_str()];
        texts.extend(f.a.iter().flatten().map(String::as_str));
        texts.extend(f.b.iter().flatten().map(String::as_str));
        let mut polys = Polynomial::parse_common(&texts)?.into_iter();
        let w = polys.next().expect("potential");
        let vars = w.vars().to_vec();
        let mut take = |m: &Vec<Vec<String>>| -> Vec<Vec<Polynomial>> {
            m.iter().map(|r| r.iter().map(|_| polys.next().expect("entry")).collect()).collect()
        };
        let a = take(&f.a);
        let b = take(&f.b);
        Self::new(w, PolyMatrix::from_rows(&vars, a)?, PolyMatrix::from_rows(&vars, b)?)
    }

    pub fn to_file(&self) -> MfFile {
        MfFile { potential: self.potential.to_string(), a: self.a.to_strings(), b: self.b.to_strings() }
    }
}

/// Exact check of A·B = W·Id and B·A = W·Id.
pub fn check_mf(m: &MatrixFactorization) -> Result<bool, MfError> {
    let w = PolyMatrix::scalar(m.vars(), m.rank(), &m.potential);
    Ok(m.a.mul(&m.b)? == w && m.b.mul(&m.a)? == w)
}

/// Kronecker product of polynomial matrices.
fn kron(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    let (p, q) = (y.nrows(), y.ncols());
    let mut out = PolyMatrix::zeros(x.vars(), x.nrows() * p, x.ncols() * q);
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            if x.get(i, j).is_zero() {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out.set(i * p + k, j * q + l, x.get(i, j).mul(y.get(k, l)).expect("shared variables"));
                }
            }
        }
    }
    out
}

/// M ⊗ N, a factorization of W_M + W_N. Koszul signs with the even block
/// ordered (M₀⊗N₀, M₁⊗N₁) and the odd block (M₁⊗N₀, M₀⊗N₁):
/// A = [[A⊗1, 1⊗A'], [−1⊗B', B⊗1]], B = [[B⊗1, −1⊗A'], [1⊗B', A⊗1]].
pub fn tensor(m: &MatrixFactorization, n: &MatrixFactorization) -> Result<MatrixFactorization, MfError> {
    if m.vars() != n.vars() {
        return Err(MfError::ShapeMismatch("factorizations over different variables".into()));
    }
    let im = PolyMatrix::identity(m.vars(), m.rank());
    let inn = PolyMatrix::identity(m.vars(), n.rank());
    let a = PolyMatrix::block(&kron(&m.a, &inn), &kron(&im, &n.a), &kron(&im, &n.b).neg(), &kron(&m.b, &inn))?;
    let b = PolyMatrix::block(&kron(&m.b, &inn), &kron(&im, &n.a).neg(), &kron(&im, &n.b), &kron(&m.a, &inn))?;
    MatrixFactorization::new(m.potential.add(&n.potential)?, a, b)
}

/// ⊗ᵢ (pᵢ, qᵢ), a factorization of Σ pᵢqᵢ of rank 2^{k−1}.
pub fn koszul(pairs: &[(Polynomial, Polynomial)]) -> Result<MatrixFactorization, MfError> {
    let mut it = pairs.iter();
    let rank_one = |(p, q): &(Polynomial, Polynomial)| -> Result<MatrixFactorization, MfError> {
        let v = p.vars().to_vec();
        MatrixFactorization::new(
            p.mul(q)?,
            PolyMatrix::from_rows(&v, vec![vec![p.clone()]])?,
            PolyMatrix::from_rows(&v, vec![vec![q.clone()]])?,
        )
    };
    let first = it.next().ok_or_else(|| MfError::InvalidInput("no Koszul pairs".into()))?;
    let mut m = rank_one(first)?;
    for pq in it {
        m = tensor(&m, &rank_one(pq)?)?;
    }
    Ok(m)
}
