use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_algebra::{Polynomial, WeightSystem};

use super::duality::invertible_matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyClass {
    LogFano,
    LogCalabiYau,
    LogGeneral,
}

pub fn classify_type(ws: &WeightSystem) -> PolyClass {
    let e = ws.excess();
    if e.is_positive() {
        PolyClass::LogFano
    } else if e.is_zero() {
        PolyClass::LogCalabiYau
    } else {
        PolyClass::LogGeneral
    }
}

/// Atoms of an invertible polynomial, variables 0-indexed.
/// A chain x₁^{a₁}x₂ + … + x_k^{a_k} lists its variables head first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    Fermat { var: usize, exponent: u32 },
    Chain { vars: Vec<usize>, exponents: Vec<u32> },
    Loop { vars: Vec<usize>, exponents: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsolatedVerdict {
    /// Invertible and split into atoms: isolated singularity at 0.
    Verified { atoms: Vec<Atom> },
    /// Not decided here; the caller's assertion is carried along.
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    /// A monomial xᵢxⱼ with i ≠ j, if present.
    pub bilinear: Option<(usize, usize)>,
    pub isolated: IsolatedVerdict,
    pub passes: bool,
}

pub fn check_nondegenerate(w: &Polynomial) -> NondegeneracyReport {
    let bilinear = w.exponent_rows().iter().find_map(|r| {
        let nz: Vec<usize> = (0..r.len()).filter(|&i| r[i] != 0).collect();
        (nz.len() == 2 && r[nz[0]] == 1 && r[nz[1]] == 1).then(|| (nz[0], nz[1]))
    });
    let isolated = match atoms(w) {
        Some(a) => IsolatedVerdict::Verified { atoms: a },
        None => IsolatedVerdict::Asserted,
    };
    NondegeneracyReport { passes: bilinear.is_none(), bilinear, isolated }
}

/// Fermat/chain/loop decomposition, when the exponent matrix admits one.
pub fn atoms(w: &Polynomial) -> Option<Vec<Atom>> {
    let a = invertible_matrix(w).ok()?;
    let n = a.nrows();
    let entry = |i: usize, j: usize| u32::try_from(a.get(i, j)).ok();
    // row i = x_i^{a_ii} · x_{next(i)}
    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut diag = vec![0u32; n];
    for i in 0..n {
        diag[i] = entry(i, i)?;
        if diag[i] < 2 {
            return None;
        }
        for j in 0..n {
            if j == i || entry(j, j).is_none() {
                continue;
            }
            match entry(i, j)? {
                0 => {}
                1 if next[i].is_none() => next[i] = Some(j),
                _ => return None,
            }
        }
    }
    let mut prev: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if let Some(j) = next[i] {
            if prev[j].is_some() {
                return None;
            }
            prev[j] = Some(i);
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    // chains and Fermats start at variables nobody points to
    for start in 0..n {
        if prev[start].is_some() {
            continue;
        }
        let mut vars = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(j) = next[cur] {
            seen[j] = true;
            vars.push(j);
            cur = j;
        }
        if vars.len() == 1 {
            out.push(Atom::Fermat { var: start, exponent: diag[start] });
        } else {
            let exponents = vars.iter().map(|&v| diag[v]).collect();
            out.push(Atom::Chain { vars, exponents });
        }
    }
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vars = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            vars.push(cur);
            cur = next[cur]?;
        }
        if cur != start {
            return None;
        }
        let exponents = vars.iter().map(|&v| diag[v]).collect();
        out.push(Atom::Loop { vars, exponents });
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn classification_by_excess() {
        assert_eq!(classify_type(&WeightSystem::new(vec![1, 1], 2)), PolyClass::LogCalabiYau);
        assert_eq!(classify_type(&WeightSystem::new(vec![3, 2], 8)), PolyClass::LogGeneral);
        assert_eq!(classify_type(&WeightSystem::new(vec![1, 1, 1], 3)), PolyClass::LogCalabiYau);
        assert_eq!(classify_type(&WeightSystem::new(vec![1, 1, 1], 2)), PolyClass::LogFano);
    }

    #[test]
    fn nondegeneracy_examples() {
        let r = check_nondegenerate(&p("x^2*y + y^4"));
        assert!(r.passes);
        assert_eq!(
            r.isolated,
            IsolatedVerdict::Verified { atoms: vec![Atom::Chain { vars: vec![0, 1], exponents: vec![2, 4] }] }
        );
        let r = check_nondegenerate(&p("x^2 + x*y"));
        assert!(!r.passes);
        assert_eq!(r.bilinear, Some((0, 1)));
        assert_eq!(check_nondegenerate(&p("x^3 + x*y^3 + y^9")).isolated, IsolatedVerdict::Asserted);
    }

    #[test]
    fn loop_and_mixed_atoms() {
        let r = check_nondegenerate(&p("x^2*y + y^3*x + z^5"));
        let IsolatedVerdict::Verified { atoms } = r.isolated else { panic!() };
        assert_eq!(atoms.len(), 2);
        assert!(atoms.contains(&Atom::Fermat { var: 2, exponent: 5 }));
        assert!(atoms.contains(&Atom::Loop { vars: vec![0, 1], exponents: vec![2, 3] }));
    }
}
