use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact_algebra::rational::{frac, Rational};
use crate::exact_algebra::{IntMatrix, Polynomial, WeightSystem};

use super::group::{Character, DiagonalGroup, GroupElement, Subgroup};
use super::{monodromy_element, LgError};

/// Square exponent matrix of an invertible polynomial, rows permuted so that
/// row i carries the main variable xᵢ on the diagonal. Variable i of Wᵀ
/// corresponds to row i.
pub fn invertible_matrix(w: &Polynomial) -> Result<IntMatrix, LgError> {
    let rows = w.exponent_rows();
    let n = w.nvars();
    if rows.len() != n || n == 0 {
        return Err(LgError::NotInvertible);
    }
    let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let m = IntMatrix::from_rows(a.clone());
    if m.det().is_none_or(|d| d.is_zero()) {
        return Err(LgError::NotInvertible);
    }
    let order = main_variable_order(&rows).unwrap_or_else(|| best_diagonal_order(&rows));
    let mut sorted = vec![Vec::new(); n];
    for (r, &var) in order.iter().enumerate() {
        sorted[var] = a[r].clone();
    }
    Ok(IntMatrix::from_rows(sorted))
}

// Each row's unique largest exponent names its main variable; succeeds when
// this is a bijection (all Fermat/chain/loop atoms with exponents ≥ 2).
fn main_variable_order(rows: &[Vec<u32>]) -> Option<Vec<usize>> {
    let n = rows.len();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for r in rows {
        let max = *r.iter().max()?;
        let mut hits = r.iter().enumerate().filter(|(_, &x)| x == max);
        let (i, _) = hits.next()?;
        if hits.next().is_some() || used[i] {
            return None;
        }
        used[i] = true;
        out.push(i);
    }
    Some(out)
}

// Fallback: the permutation with nonzero diagonal maximising the diagonal
// sum, first in lexicographic order.
fn best_diagonal_order(rows: &[Vec<u32>]) -> Vec<usize> {
    let n = rows.len();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(rows: &[Vec<u32>], cur: &mut Vec<usize>, used: &mut [bool], sum: u64, best: &mut Option<(u64, Vec<usize>)>) {
        let r = cur.len();
        if r == rows.len() {
            if best.as_ref().is_none_or(|(s, _)| sum > *s) {
                *best = Some((sum, cur.clone()));
            }
            return;
        }
        for v in 0..rows.len() {
            if used[v] || rows[r][v] == 0 {
                continue;
            }
            used[v] = true;
            cur.push(v);
            go(rows, cur, used, sum + rows[r][v] as u64, best);
            cur.pop();
            used[v] = false;
        }
    }
    go(rows, &mut cur, &mut used, 0, &mut best);
    best.map(|(_, p)| p).unwrap_or_else(|| (0..n).collect())
}

/// Wᵀ: the polynomial whose exponent matrix is Aᵀ, all coefficients 1.
pub fn bh_transpose(w: &Polynomial) -> Result<Polynomial, LgError> {
    let a = invertible_matrix(w)?;
    let at = a.transpose();
    let mut terms = BTreeMap::new();
    for i in 0..at.nrows() {
        let e: Vec<u32> = at.row(i).iter().map(|x| u32::try_from(x).expect("exponent")).collect();
        terms.insert(e, Rational::one());
    }
    Ok(Polynomial::from_terms(w.vars(), terms)?)
}

/// ⟨θ, θ'⟩ = θ'ᵀ·A·θ mod ℤ for θ ∈ G_W and θ' ∈ G_{Wᵀ}.
pub fn pairing(a: &IntMatrix, theta: &GroupElement, theta_t: &GroupElement) -> Rational {
    let at = a.apply_rational(&theta.phases);
    let s: Rational = at.iter().zip(&theta_t.phases).map(|(x, y)| x * y).sum();
    frac(&s)
}

/// Gᵀ as the annihilator of G in G_{Wᵀ} under the pairing.
pub fn dual_group(g: &Subgroup, w: &Polynomial) -> Result<Subgroup, LgError> {
    let a = invertible_matrix(w)?;
    dual_group_for_matrix(g, &a)
}

pub fn dual_group_for_matrix(g: &Subgroup, a: &IntMatrix) -> Result<Subgroup, LgError> {
    let n = a.ncols();
    let rows = a.rows_vec().clone();
    let gw = DiagonalGroup::from_exponent_rows(&rows, n)?;
    if g.n != n || !g.is_subgroup_of(&gw) {
        return Err(LgError::NotASubgroup);
    }
    let gwt = DiagonalGroup::from_exponent_rows(a.transpose().rows_vec(), n)?;
    let tests: &[GroupElement] = if g.generators.is_empty() { &g.elements } else { &g.generators };
    let elems: Vec<GroupElement> =
        gwt.elements()?.into_iter().filter(|t| tests.iter().all(|x| pairing(a, x, t).is_zero())).collect();
    Ok(Subgroup::from_elements(n, elems))
}

impl Character {
    /// χ(g) = ⟨g, θ'⟩ on G_W for a fixed θ' ∈ G_{Wᵀ}.
    pub fn from_pairing(gw: DiagonalGroup, a: &IntMatrix, theta_t: &GroupElement) -> Result<Self, LgError> {
        let values = gw.generators.iter().map(|g| pairing(a, g, theta_t)).collect();
        Character::new(gw, values)
    }
}

/// χ(J⁻¹), the phase twisting ε under the character action.
pub fn epsilon_character(chi: &Character, ws: &WeightSystem) -> Result<Rational, LgError> {
    let j = monodromy_element(ws);
    if !chi.group.contains(&j) {
        return Err(LgError::CharacterUndefinedOnJ);
    }
    chi.eval(&j.inverse())
}
