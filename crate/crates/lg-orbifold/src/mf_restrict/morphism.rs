use super::functors::SplitPotential;
use super::{MatrixFactorization, MfError, PolyMatrix};
use crate::exact_algebra::Polynomial;

/// A homogeneous map between total spaces, with its ℤ/2 degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub matrix: PolyMatrix,
    pub parity: u8,
}

impl Morphism {
    pub fn new(matrix: PolyMatrix, parity: u8) -> Self {
        Morphism { matrix, parity: parity % 2 }
    }

    pub fn compose(&self, other: &Morphism) -> Result<Morphism, MfError> {
        Ok(Morphism::new(self.matrix.mul(&other.matrix)?, self.parity + other.parity))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// d(φ) = δ'∘φ − (−1)^{|φ|} φ∘δ for any pair of twisted differentials.
fn differential(phi: &Morphism, src: &PolyMatrix, dst: &PolyMatrix) -> Result<Morphism, MfError> {
    let left = dst.mul(&phi.matrix)?;
    let right = phi.matrix.mul(src)?;
    let m = if phi.parity == 0 { left.sub(&right)? } else { left.add(&right)? };
    Ok(Morphism::new(m, phi.parity + 1))
}

/// The morphism differential of MF(W), with δ = [[0, A], [B, 0]].
pub fn hom_differential(
    phi: &Morphism,
    src: &MatrixFactorization,
    dst: &MatrixFactorization,
) -> Result<Morphism, MfError> {
    if src.potential != dst.potential {
        return Err(MfError::PotentialMismatch { expected: src.potential.to_string(), got: dst.potential.to_string() });
    }
    differential(phi, &src.delta(), &dst.delta())
}

/// M[ε] with ε² = 0 and dε = t: the total space is (T, εT) and
/// δ = [[δ_M, t], [0, −δ_M]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeObject {
    pub base: MatrixFactorization,
    pub t: Polynomial,
}

impl ConeObject {
    pub fn new(base: &MatrixFactorization, split: &SplitPotential) -> Result<Self, MfError> {
        Ok(ConeObject { base: base.with_vars(split.u.vars())?, t: split.t() })
    }

    pub fn delta(&self) -> PolyMatrix {
        let d = self.base.delta();
        let n = d.nrows();
        let t = PolyMatrix::scalar(d.vars(), n, &self.t);
        let z = PolyMatrix::zeros(d.vars(), n, n);
        PolyMatrix::block(&d, &t, &z, &d.neg()).expect("square blocks")
    }
}

/// a + εb acting on (x, εy): (a·x, ε(b·x + (−1)^{|a|} a·y)), so the
/// matrix is [[a, 0], [b, ±a]]. b must have the opposite parity to a.
pub fn epsilon_morphism(a: &Morphism, b: &Morphism) -> Result<Morphism, MfError> {
    if a.matrix.nrows() != b.matrix.nrows() || a.matrix.ncols() != b.matrix.ncols() {
        return Err(MfError::ShapeMismatch("a and b have different shapes".into()));
    }
    if a.parity == b.parity {
        return Err(MfError::InvalidInput("εb must have the parity of a, so b has the other one".into()));
    }
    let z = PolyMatrix::zeros(a.matrix.vars(), a.matrix.nrows(), a.matrix.ncols());
    let diag = if a.parity == 0 { a.matrix.clone() } else { a.matrix.neg() };
    Ok(Morphism::new(PolyMatrix::block(&a.matrix, &z, &b.matrix, &diag)?, a.parity))
}

/// The differential on morphisms between cone objects, induced from MF(U).
pub fn epsilon_hom_differential(phi: &Morphism, src: &ConeObject, dst: &ConeObject) -> Result<Morphism, MfError> {
    if src.t != dst.t || src.base.potential != dst.base.potential {
        return Err(MfError::InvalidInput("cone objects over different hypersurfaces".into()));
    }
    let (ds, dd) = (src.delta(), dst.delta());
    if phi.matrix.nrows() != dd.nrows() || phi.matrix.ncols() != ds.nrows() {
        return Err(MfError::ShapeMismatch(format!(
            "morphism is {}x{}, cones have rank {} and {}",
            phi.matrix.nrows(),
            phi.matrix.ncols(),
            ds.nrows(),
            dd.nrows()
        )));
    }
    differential(phi, &ds, &dd)
}
