use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::expand::{compose, identity_terms, sign_degree, IdentityTerm};
use super::signs::{clubsuit_classical, clubsuit_sign};
use super::{check_slots, AinftyError, FormalGenerator, Grading};
use crate::exact_algebra::int;
use crate::popsicle_moduli::{admissible_cuts, AdmissibleCut};

/// One quadratic relation: the admissible cuts of F, with how many of them
/// were hit by identity terms and how many cancel against another relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub f: Vec<usize>,
    /// None for the a-component; the dropped ε-slot for an ε-component relation.
    pub omitted: Option<usize>,
    pub cuts: usize,
    pub matched: usize,
    pub cancelling: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnmatchedTerm {
    pub term: String,
    pub eps: bool,
    pub reason: String,
    /// Input parities at which the failure was seen; empty for structural failures.
    pub parities: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub eps_slots: Vec<usize>,
    pub deg_gamma: Grading,
    pub a_terms: usize,
    pub eps_terms: usize,
    pub relations: Vec<RelationCheck>,
    pub structure_ok: bool,
    pub degree_ok: bool,
    /// Identity signs agree with ♣ up to one sign per relation.
    pub sign_verbatim: bool,
    /// The ε-component agrees with the a-components of the F̂ʲ identities
    /// up to one sign per relation.
    pub sign_selfconsistent: bool,
    /// Only for F = ∅: signs agree with the classical exponent.
    pub sign_classical_form: Option<bool>,
    pub parity_patterns: usize,
    pub unmatched: Option<UnmatchedTerm>,
    pub passes: bool,
}

fn generators(n: usize, eps: &BTreeSet<usize>, degrees: &[Grading]) -> Vec<FormalGenerator> {
    (1..=n)
        .map(|k| {
            let e = eps.contains(&k);
            let name = if e { format!("b{k}") } else { format!("a{k}") };
            FormalGenerator { name, eps: e, base: degrees[k - 1].clone() }
        })
        .collect()
}

fn names(inputs: &[FormalGenerator]) -> Vec<String> {
    inputs.iter().map(|g| g.name.clone()).collect()
}

fn without(e: &BTreeSet<usize>, j: usize) -> BTreeSet<usize> {
    let mut f = e.clone();
    f.remove(&j);
    f
}

fn sgn(x: i64) -> i64 {
    if x.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

struct Structure {
    relations: Vec<RelationCheck>,
    failure: Option<UnmatchedTerm>,
}

/// Parity-independent bookkeeping: a-terms are exactly the cuts of F, each
/// ε-term is a cut of the relation for its omitted slot, and every cut of
/// an ε-relation that no term hits is shared with exactly one other relation.
fn structure(n: usize, e: &BTreeSet<usize>, terms: &[IdentityTerm], nm: &[String]) -> Structure {
    let mut failure = None;
    let mut fail = |term: String, eps: bool, reason: String| {
        if failure.is_none() {
            failure = Some(UnmatchedTerm { term, eps, reason, parities: vec![] });
        }
    };
    let mut relations = Vec::new();

    let cuts_a: BTreeSet<AdmissibleCut> = admissible_cuts(n, e).into_iter().collect();
    let mut hit_a: BTreeMap<&AdmissibleCut, usize> = BTreeMap::new();
    for t in terms.iter().filter(|t| !t.eps) {
        *hit_a.entry(&t.cut).or_default() += 1;
        if !cuts_a.contains(&t.cut) {
            fail(t.node().render(nm), false, "not an admissible cut of F".into());
        }
    }
    for c in &cuts_a {
        match hit_a.get(c).copied().unwrap_or(0) {
            1 => {}
            0 => fail(compose(c).render(nm), false, "admissible cut missing from the identity".into()),
            k => fail(compose(c).render(nm), false, format!("cut appears {k} times")),
        }
    }
    relations.push(RelationCheck {
        f: e.iter().copied().collect(),
        omitted: None,
        cuts: cuts_a.len(),
        matched: cuts_a.iter().filter(|c| hit_a.get(c) == Some(&1)).count(),
        cancelling: 0,
    });

    let rel: BTreeMap<usize, BTreeSet<AdmissibleCut>> =
        e.iter().map(|&j| (j, admissible_cuts(n, &without(e, j)).into_iter().collect())).collect();
    let mut hit: BTreeMap<(usize, &AdmissibleCut), usize> = BTreeMap::new();
    for t in terms.iter().filter(|t| t.eps) {
        let j = t.omitted.expect("ε-term without an omitted slot");
        *hit.entry((j, &t.cut)).or_default() += 1;
        if !rel[&j].contains(&t.cut) {
            fail(t.node().render(nm), true, format!("not an admissible cut of F minus slot {j}"));
        }
    }
    let mut missing: BTreeMap<&AdmissibleCut, Vec<usize>> = BTreeMap::new();
    for (&j, cuts) in &rel {
        for c in cuts {
            match hit.get(&(j, c)).copied().unwrap_or(0) {
                0 => missing.entry(c).or_default().push(j),
                1 => {}
                k => fail(compose(c).render(nm), true, format!("cut appears {k} times")),
            }
        }
    }
    for (c, js) in &missing {
        if js.len() != 2 {
            fail(
                compose(c).render(nm),
                true,
                format!("cut absent from the identity and shared by {} relations", js.len()),
            );
        }
    }
    for (&j, cuts) in &rel {
        relations.push(RelationCheck {
            f: without(e, j).into_iter().collect(),
            omitted: Some(j),
            cuts: cuts.len(),
            matched: cuts.iter().filter(|c| hit.get(&(j, *c)) == Some(&1)).count(),
            cancelling: cuts.iter().filter(|c| missing.get(c).is_some_and(|v| v.len() == 2)).count(),
        });
    }
    Structure { relations, failure }
}

/// Looks for one sign ρ_j per relation with coef = Σ_j ρ_j·ref_j. Returns
/// the first key that disagrees under the best choice.
fn fit(coef: &BTreeMap<AdmissibleCut, i64>, refs: &[BTreeMap<AdmissibleCut, i64>]) -> Option<AdmissibleCut> {
    let keys: BTreeSet<&AdmissibleCut> = coef.keys().chain(refs.iter().flat_map(|r| r.keys())).collect();
    let mut best: Option<(usize, AdmissibleCut)> = None;
    for mask in 0u32..(1 << refs.len()) {
        let rho = |j: usize| if mask & (1 << j) != 0 { -1 } else { 1 };
        let bad: Vec<&&AdmissibleCut> = keys
            .iter()
            .filter(|k| {
                let want: i64 = refs.iter().enumerate().map(|(j, r)| rho(j) * r.get(**k).copied().unwrap_or(0)).sum();
                coef.get(**k).copied().unwrap_or(0) != want
            })
            .collect();
        if bad.is_empty() {
            return None;
        }
        if best.as_ref().is_none_or(|(b, _)| bad.len() < *b) {
            best = Some((bad.len(), (**bad[0]).clone()));
        }
    }
    best.map(|(_, k)| k)
}

fn coefficients<'a>(terms: impl Iterator<Item = &'a IdentityTerm>) -> BTreeMap<AdmissibleCut, i64> {
    let mut m = BTreeMap::new();
    for t in terms {
        *m.entry(t.cut.clone()).or_insert(0) += t.sign();
    }
    m
}

fn clubsuit_ref(n: usize, f: &BTreeSet<usize>, degrees: &[i64]) -> BTreeMap<AdmissibleCut, i64> {
    admissible_cuts(n, f)
        .into_iter()
        .map(|c| {
            let s = clubsuit_sign(&c, f, degrees).expect("admissible");
            (c, sgn(s))
        })
        .collect()
}

/// Expands Σ ±M_{n₁}(…, M_{n₂}(…), …) for n inputs with ε on `eps` and
/// checks it against the admissible-cut relations. Signs are checked for
/// every parity pattern of the inputs; `degrees` (default: slot k has
/// degree k) feed the degree audit only.
pub fn verify_ainfty(
    n: usize,
    eps: &BTreeSet<usize>,
    gamma: &Grading,
    degrees: Option<&[Grading]>,
) -> Result<VerificationReport, AinftyError> {
    check_slots(n, eps)?;
    let audit: Vec<Grading> = match degrees {
        Some(d) if d.len() != n => return Err(AinftyError::Degrees { expected: n, got: d.len() }),
        Some(d) => d.to_vec(),
        None => (1..=n as i64).map(Grading::int).collect(),
    };

    let inputs = generators(n, eps, &audit);
    let terms = identity_terms(&inputs, gamma);
    let expected = inputs
        .iter()
        .fold(Grading { degree: int(3 - n as i64), parity: ((3 + n) % 2) as u8 }, |acc, g| acc.add(&g.degree(gamma)));
    let degree_ok = terms.iter().all(|t| t.degree == expected);
    let nm = names(&inputs);
    let mut unmatched = None;
    if let Some(t) = terms.iter().find(|t| t.degree != expected) {
        unmatched = Some(UnmatchedTerm {
            term: t.node().render(&nm),
            eps: t.eps,
            reason: format!("degree {} instead of {}", t.degree.degree, expected.degree),
            parities: vec![],
        });
    }

    let st = structure(n, eps, &terms, &nm);
    let structure_ok = st.failure.is_none();
    if unmatched.is_none() {
        unmatched = st.failure;
    }

    let mut sign_verbatim = true;
    let mut sign_selfconsistent = true;
    let mut classical = eps.is_empty().then_some(true);
    let patterns = 1usize << n;
    for mask in 0..patterns {
        let bits: Vec<u8> = (0..n).map(|k| ((mask >> k) & 1) as u8).collect();
        let g: Vec<Grading> = bits.iter().map(|&b| Grading::int(b as i64)).collect();
        let d: Vec<i64> = g.iter().map(sign_degree).collect();
        let t = identity_terms(&generators(n, eps, &g), gamma);
        let ca = coefficients(t.iter().filter(|t| !t.eps));
        let cb = coefficients(t.iter().filter(|t| t.eps));
        let mut witness = |cut: AdmissibleCut, eps_part: bool, reason: &str| {
            if unmatched.is_none() {
                unmatched = Some(UnmatchedTerm {
                    term: compose(&cut).render(&nm),
                    eps: eps_part,
                    reason: reason.into(),
                    parities: bits.clone(),
                });
            }
        };

        let mut ok = true;
        if let Some(k) = fit(&ca, &[clubsuit_ref(n, eps, &d)]) {
            ok = false;
            witness(k, false, "sign disagrees with the clubsuit exponent");
        }
        let verbatim_refs: Vec<_> = eps.iter().map(|&j| clubsuit_ref(n, &without(eps, j), &d)).collect();
        if let Some(k) = fit(&cb, &verbatim_refs) {
            ok = false;
            witness(k, true, "ε-component disagrees with the clubsuit relations");
        }
        sign_verbatim &= ok;

        let self_refs: Vec<_> = eps
            .iter()
            .map(|&j| {
                let tj = identity_terms(&generators(n, &without(eps, j), &g), gamma);
                coefficients(tj.iter().filter(|t| !t.eps))
            })
            .collect();
        if let Some(k) = fit(&cb, &self_refs) {
            sign_selfconsistent = false;
            witness(k, true, "ε-component is not a signed sum of the F̂ʲ a-identities");
        }

        if let Some(c) = classical.as_mut() {
            let r: BTreeMap<_, _> = admissible_cuts(n, eps)
                .into_iter()
                .map(|k| {
                    let s = sgn(clubsuit_classical(&k, &d));
                    (k, s)
                })
                .collect();
            *c &= fit(&ca, &[r]).is_none();
        }
    }

    let passes = structure_ok && degree_ok && sign_verbatim;
    Ok(VerificationReport {
        n,
        eps_slots: eps.iter().copied().collect(),
        deg_gamma: gamma.clone(),
        a_terms: terms.iter().filter(|t| !t.eps).count(),
        eps_terms: terms.iter().filter(|t| t.eps).count(),
        relations: st.relations,
        structure_ok,
        degree_ok,
        sign_verbatim,
        sign_selfconsistent,
        sign_classical_form: classical,
        parity_patterns: patterns,
        unmatched,
        passes,
    })
}

/// The terms of the A∞-identity without and with ε, rendered with the
/// inputs' own names and without signs.
pub fn leibniz_terms(inputs: &[FormalGenerator], gamma: &Grading) -> (Vec<String>, Vec<String>) {
    let nm = names(inputs);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in identity_terms(inputs, gamma) {
        let s = t.node().render(&nm);
        if t.eps {
            b.push(s);
        } else {
            a.push(s);
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    fn sorted(mut v: Vec<String>) -> Vec<String> {
        v.sort();
        v
    }

    fn strings(v: &[&str]) -> Vec<String> {
        sorted(v.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn leibniz_a_eps_b() {
        let g = [FormalGenerator::plain("a", Grading::int(0)), FormalGenerator::eps("b", Grading::int(0))];
        let (a, b) = leibniz_terms(&g, &Grading::int(0));
        assert_eq!(
            sorted(a),
            strings(&[
                "P_{2,{2}}(m_1(a),b)",
                "P_{2,{2}}(a,m_1(b))",
                "m_2(a,P_{1,{1}}(b))",
                "P_{1,{1}}(m_2(a,b))",
                "m_1(P_{2,{2}}(a,b))",
            ])
        );
        assert_eq!(sorted(b), strings(&["m_1(m_2(a,b))", "m_2(m_1(a),b)", "m_2(a,m_1(b))"]));
    }

    #[test]
    fn leibniz_eps_b_eps_b() {
        let g = [FormalGenerator::eps("b1", Grading::int(0)), FormalGenerator::eps("b2", Grading::int(0))];
        let (a, b) = leibniz_terms(&g, &Grading::int(0));
        assert_eq!(
            sorted(a),
            strings(&[
                "m_1(P_{2,{1,2}}(b1,b2))",
                "P_{1,{1}}(P_{2,{2}}(b1,b2))",
                "P_{1,{1}}(P_{2,{1}}(b1,b2))",
                "P_{2,{2}}(P_{1,{1}}(b1),b2)",
                "P_{2,{1,2}}(m_1(b1),b2)",
                "P_{2,{1}}(b1,P_{1,{1}}(b2))",
                "P_{2,{1,2}}(b1,m_1(b2))",
            ])
        );
        assert_eq!(
            sorted(b),
            strings(&[
                "m_1(P_{2,{2}}(b1,b2))",
                "m_1(P_{2,{1}}(b1,b2))",
                "m_2(P_{1,{1}}(b1),b2)",
                "P_{2,{2}}(m_1(b1),b2)",
                "P_{2,{1}}(m_1(b1),b2)",
                "m_2(b1,P_{1,{1}}(b2))",
                "P_{2,{2}}(b1,m_1(b2))",
                "P_{2,{1}}(b1,m_1(b2))",
            ])
        );
    }

    #[test]
    fn structure_and_degrees_hold_for_small_arity() {
        let gamma = Grading::new(rat(7, 3), 1).unwrap();
        let degrees: Vec<Grading> = [rat(1, 2), rat(-3, 4), int(2), rat(5, 7)]
            .into_iter()
            .zip([0, 1, 0, 1])
            .map(|(d, p)| Grading::new(d, p).unwrap())
            .collect();
        for n in 1..=4 {
            for mask in 0u32..(1 << n) {
                let e: BTreeSet<usize> = (1..=n).filter(|k| mask & (1 << (k - 1)) != 0).collect();
                if e.len() > 2 {
                    continue;
                }
                let r = verify_ainfty(n, &e, &gamma, Some(&degrees[..n])).unwrap();
                assert!(r.structure_ok, "{n} {e:?} {:?}", r.unmatched);
                assert!(r.degree_ok);
                assert_eq!(r.relations[0].cuts, r.a_terms);
                if e.is_empty() {
                    assert_eq!(r.sign_classical_form, Some(true));
                }
            }
        }
    }

    #[test]
    fn witnesses_name_a_term() {
        let r = verify_ainfty(2, &[2].into(), &Grading::int(0), None).unwrap();
        assert!(!r.passes);
        let w = r.unmatched.unwrap();
        assert!(w.term.contains("P_") || w.term.contains("m_"));
    }

    #[test]
    fn bad_input() {
        assert!(verify_ainfty(0, &BTreeSet::new(), &Grading::int(0), None).is_err());
        assert!(verify_ainfty(2, &[3].into(), &Grading::int(0), None).is_err());
        assert!(Grading::new(int(2), 1).is_err());
    }
}
