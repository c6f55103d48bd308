use serde::{Deserialize, Serialize};

use super::mf::tensor;
use super::{check_mf, MatrixFactorization, MfError, PolyMatrix};
use crate::exact_algebra::Polynomial;

/// U = U₁ + x_n·U₂ with U₁, U₂ free of x_n, and V = U₁ + f·U₂.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPotential {
    pub u: Polynomial,
    pub u1: Polynomial,
    pub u2: Polynomial,
    pub var: String,
    pub f: Polynomial,
    pub v: Polynomial,
}

impl SplitPotential {
    pub fn var_index(&self) -> usize {
        self.u.vars().iter().position(|v| *v == self.var).expect("validated")
    }

    /// x_n − f.
    pub fn t(&self) -> Polynomial {
        let x = Polynomial::var(self.u.vars(), self.var_index()).expect("validated");
        x.sub(&self.f).expect("shared variables")
    }
}

fn index_of(vars: &[String], var: &str) -> Result<usize, MfError> {
    vars.iter()
        .position(|v| v == var)
        .ok_or_else(|| MfError::InvalidInput(format!("{var} is not a variable of the ring")))
}

/// f over the given variables; it must not involve x_n.
fn graph_polynomial(vars: &[String], k: usize, f: &Polynomial) -> Result<Polynomial, MfError> {
    let f = f.with_vars(vars).map_err(|_| MfError::InvalidInput(format!("f = {f} uses variables outside {vars:?}")))?;
    if f.degree_in(k).unwrap_or(0) > 0 {
        return Err(MfError::InvalidInput(format!("f must not involve {}", vars[k])));
    }
    Ok(f)
}

pub fn split_potential(u: &Polynomial, var: &str, f: &Polynomial) -> Result<SplitPotential, MfError> {
    let k = index_of(u.vars(), var)?;
    let d = u.degree_in(k).unwrap_or(0);
    if d >= 2 {
        return Err(MfError::DegreeTooHighInXn { var: var.to_string(), degree: d });
    }
    let f = graph_polynomial(u.vars(), k, f)?;
    let zero = Polynomial::zero(u.vars());
    let u1 = u.substitute(k, &zero)?;
    let u2 = u.partial_derivative(k)?;
    let v = u.substitute(k, &f)?;
    Ok(SplitPotential { u: u.clone(), u1, u2, var: var.to_string(), f, v })
}

/// i*M: substitute x_n ↦ f everywhere.
pub fn restrict_mf(m: &MatrixFactorization, var: &str, f: &Polynomial) -> Result<MatrixFactorization, MfError> {
    let k = index_of(m.vars(), var)?;
    let f = graph_polynomial(m.vars(), k, f)?;
    if !check_mf(m)? {
        return Err(MfError::InvalidInput("input is not a matrix factorization".into()));
    }
    let sub = |p: &Polynomial| p.substitute(k, &f).map_err(MfError::from);
    MatrixFactorization::new(sub(&m.potential)?, m.a.try_map(sub)?, m.b.try_map(sub)?)
}

/// i_*N = N ⊗ (x_n − f, U₂).
pub fn pushforward_mf(n: &MatrixFactorization, split: &SplitPotential) -> Result<MatrixFactorization, MfError> {
    let n = n.with_vars(split.u.vars())?;
    if n.potential != split.v {
        return Err(MfError::PotentialMismatch { expected: split.v.to_string(), got: n.potential.to_string() });
    }
    let vars = split.u.vars();
    let k = MatrixFactorization::new(
        split.t().mul(&split.u2)?,
        PolyMatrix::from_rows(vars, vec![vec![split.t()]])?,
        PolyMatrix::from_rows(vars, vec![vec![split.u2.clone()]])?,
    )?;
    tensor(&n, &k)
}

/// Cone((x_n − f): M[1] → M) with even part (M₀, M₁[1]) and odd part
/// (M₁, M₀[1]): A = [[A, t], [0, −B]], B = [[B, t], [0, −A]].
pub fn cone_endofunctor(m: &MatrixFactorization, split: &SplitPotential) -> Result<MatrixFactorization, MfError> {
    let m = m.with_vars(split.u.vars())?;
    if !check_mf(&m)? {
        return Err(MfError::InvalidInput("input is not a matrix factorization".into()));
    }
    let r = m.rank();
    let t = PolyMatrix::scalar(m.vars(), r, &split.t());
    let z = PolyMatrix::zeros(m.vars(), r, r);
    let a = PolyMatrix::block(&m.a, &t, &z, &m.b.neg())?;
    let b = PolyMatrix::block(&m.b, &t, &z, &m.a.neg())?;
    MatrixFactorization::new(m.potential.clone(), a, b)
}

/// An isomorphism (φ₀, φ₁) of factorizations given by signed
/// permutations: A₂ = φ₀·A₁·φ₁⁻¹ and B₂ = φ₁·B₁·φ₀⁻¹.
/// `even[i] = (k, s)` means row i of the target is s times row k of the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Similarity {
    pub even: Vec<(usize, i8)>,
    pub odd: Vec<(usize, i8)>,
}

/// Largest rank searched; the search is over (r!·2ʳ)² pairs in the worst case.
pub const SIMILARITY_MAX_RANK: usize = 4;

fn signed(p: &Polynomial, s: i8) -> Polynomial {
    if s < 0 {
        p.neg()
    } else {
        p.clone()
    }
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Looks for a signed-permutation isomorphism from m1 to m2. `None` means
/// none exists, which does not rule out a homotopy equivalence.
pub fn signed_permutation_similarity(
    m1: &MatrixFactorization,
    m2: &MatrixFactorization,
) -> Result<Option<Similarity>, MfError> {
    let r = m1.rank();
    if r != m2.rank() || m1.vars() != m2.vars() {
        return Err(MfError::ShapeMismatch("ranks or rings differ".into()));
    }
    if r > SIMILARITY_MAX_RANK {
        return Err(MfError::InvalidInput(format!("similarity search is limited to rank {SIMILARITY_MAX_RANK}")));
    }
    if m1.potential != m2.potential {
        return Ok(None);
    }
    let perms = permutations(r);
    for p0 in &perms {
        for s0 in 0u32..(1 << r) {
            let sg0 = |i: usize| if s0 & (1 << i) != 0 { -1i8 } else { 1 };
            // A₂[i][j] = sg0(i)·sg1(j)·A₁[p0[i]][p1[j]]: pick column images greedily with backtracking
            let mut odd: Vec<(usize, i8)> = Vec::with_capacity(r);
            if search_columns(m1, m2, p0, &sg0, &mut odd, &mut vec![false; r]) {
                let even = (0..r).map(|i| (p0[i], sg0(i))).collect();
                return Ok(Some(Similarity { even, odd }));
            }
        }
    }
    Ok(None)
}

fn search_columns(
    m1: &MatrixFactorization,
    m2: &MatrixFactorization,
    p0: &[usize],
    sg0: &dyn Fn(usize) -> i8,
    odd: &mut Vec<(usize, i8)>,
    used: &mut Vec<bool>,
) -> bool {
    let r = p0.len();
    let j = odd.len();
    if j == r {
        // B₂[j][i] = sg1(j)·sg0(i)·B₁[p1[j]][p0[i]]
        return (0..r).all(|jj| {
            (0..r).all(|i| {
                let (k, s1) = odd[jj];
                *m2.b.get(jj, i) == signed(m1.b.get(k, p0[i]), s1 * sg0(i))
            })
        });
    }
    for k in 0..r {
        if used[k] {
            continue;
        }
        for s1 in [1i8, -1] {
            let fits = (0..r).all(|i| *m2.a.get(i, j) == signed(m1.a.get(p0[i], k), sg0(i) * s1));
            if fits {
                used[k] = true;
                odd.push((k, s1));
                if search_columns(m1, m2, p0, sg0, odd, used) {
                    return true;
                }
                odd.pop();
                used[k] = false;
            }
        }
    }
    false
}
