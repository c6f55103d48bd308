use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::enumerate::{codim1_strata, induced_positions};
use super::model::{Disc, DiscChild, Flavor, TreeModel};
use super::PopsicleError;

/// (n₁, n₂, i, F₁, F₂) splitting P_{n,F} into P_{n₁,F₁} with P_{n₂,F₂}
/// plugged into input i. All positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdmissibleCut {
    pub n1: usize,
    pub n2: usize,
    pub i: usize,
    pub f1: BTreeSet<usize>,
    pub f2: BTreeSet<usize>,
}

impl AdmissibleCut {
    /// Where each element of F₁ and F₂ lands in {1..n}. The label i ∈ F₁
    /// takes the single element of F not covered by the others.
    pub fn placement(&self, f: &BTreeSet<usize>) -> Option<(BTreeMap<usize, usize>, BTreeMap<usize, usize>)> {
        let n2 = self.n2;
        let i = self.i;
        let mut outer = BTreeMap::new();
        let mut inner = BTreeMap::new();
        let mut covered = BTreeSet::new();
        for &k in &self.f1 {
            if k < i {
                outer.insert(k, k);
                covered.insert(k);
            } else if k > i {
                outer.insert(k, k + n2 - 1);
                covered.insert(k + n2 - 1);
            }
        }
        for &k in &self.f2 {
            inner.insert(k, k + i - 1);
            covered.insert(k + i - 1);
        }
        if !covered.is_subset(f) || self.f1.len() + self.f2.len() != f.len() {
            return None;
        }
        let rest: Vec<usize> = f.difference(&covered).copied().collect();
        if self.f1.contains(&i) {
            if rest.len() != 1 || rest[0] < i || rest[0] > i + n2 - 1 {
                return None;
            }
            outer.insert(i, rest[0]);
        } else if !rest.is_empty() {
            return None;
        }
        let images: BTreeSet<usize> = outer.values().chain(inner.values()).copied().collect();
        (images.len() == f.len()).then_some((outer, inner))
    }
}

/// Every admissible cut of F ⊆ {1..n}, in lexicographic order of (n₁, i, F₁, F₂).
pub fn admissible_cuts(n: usize, f: &BTreeSet<usize>) -> Vec<AdmissibleCut> {
    let mut out = Vec::new();
    let subsets = |m: usize| -> Vec<BTreeSet<usize>> {
        (0u32..(1 << m)).map(|mask| (1..=m).filter(|k| mask & (1 << (k - 1)) != 0).collect()).collect()
    };
    for n1 in 1..=n {
        let n2 = n + 1 - n1;
        for i in 1..=n1 {
            for f1 in subsets(n1) {
                for f2 in subsets(n2) {
                    let c = AdmissibleCut { n1, n2, i, f1: f1.clone(), f2 };
                    if c.placement(f).is_some() {
                        out.push(c);
                    }
                }
            }
        }
    }
    out
}

fn positions(flavor: &Flavor) -> BTreeSet<usize> {
    flavor.phi.iter().copied().collect()
}

/// Two-disc model realising a cut of an injective flavor.
pub fn cut_to_model(flavor: &Flavor, cut: &AdmissibleCut) -> Result<TreeModel, PopsicleError> {
    if !flavor.is_injective() {
        return Err(PopsicleError::NonInjective);
    }
    let f = positions(flavor);
    let (outer, inner) =
        cut.placement(&f).ok_or_else(|| PopsicleError::BijectionFailure(format!("{cut:?} is not admissible")))?;
    let label = |p: usize| flavor.phi.iter().position(|&x| x == p).expect("in image") + 1;
    let (n2, i) = (cut.n2, cut.i);
    let mut root = Vec::new();
    for k in 1..=cut.n1 {
        if k < i {
            root.push(DiscChild::Leaf(k));
        } else if k == i {
            root.push(DiscChild::Disc(1));
        } else {
            root.push(DiscChild::Leaf(k + n2 - 1));
        }
    }
    Ok(TreeModel {
        flavor: flavor.clone(),
        discs: vec![
            Disc { children: root, sprinkles: outer.values().map(|&p| label(p)).collect() },
            Disc {
                children: (i..i + n2).map(DiscChild::Leaf).collect(),
                sprinkles: inner.values().map(|&p| label(p)).collect(),
            },
        ],
        spheres: vec![],
    })
}

/// Reads the cut off a two-disc model without spheres.
pub fn model_to_cut(m: &TreeModel) -> Option<AdmissibleCut> {
    if m.discs.len() != 2 || !m.spheres.is_empty() {
        return None;
    }
    let i = m.discs[0].children.iter().position(|c| *c == DiscChild::Disc(1))? + 1;
    let f1: BTreeSet<usize> = induced_positions(m, 0).into_iter().collect();
    let f2: BTreeSet<usize> = induced_positions(m, 1).into_iter().collect();
    if f1.len() != m.discs[0].sprinkles.len() || f2.len() != m.discs[1].sprinkles.len() {
        return None;
    }
    Some(AdmissibleCut { n1: m.discs[0].children.len(), n2: m.discs[1].children.len(), i, f1, f2 })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutMatch {
    pub cut: AdmissibleCut,
    pub stratum: TreeModel,
    /// True when one side is a bare strip (an m₁ term).
    pub breaking: bool,
}

/// Pairs admissible cuts with the codimension-one two-disc strata (stable
/// cut strata together with the strip breakings), failing on any unmatched
/// element of either side.
pub fn cut_stratum_bijection(flavor: &Flavor) -> Result<Vec<CutMatch>, PopsicleError> {
    if !flavor.is_injective() {
        return Err(PopsicleError::NonInjective);
    }
    let strata = codim1_strata(flavor)?;
    let cuts = admissible_cuts(flavor.n, &positions(flavor));
    let mut by_key: BTreeMap<String, (TreeModel, bool)> = BTreeMap::new();
    for m in &strata.cut_strata {
        by_key.insert(m.encoding(), (m.clone(), false));
    }
    for m in &strata.breaking_strata {
        by_key.insert(m.encoding(), (m.clone(), true));
    }
    let mut out = Vec::new();
    let mut used = BTreeSet::new();
    for c in cuts {
        let m = cut_to_model(flavor, &c)?;
        let key = m.encoding();
        let Some((stratum, breaking)) = by_key.get(&key) else {
            return Err(PopsicleError::BijectionFailure(format!("cut {c:?} has no stratum")));
        };
        if model_to_cut(stratum).as_ref() != Some(&c) {
            return Err(PopsicleError::BijectionFailure(format!("cut {c:?} does not round-trip")));
        }
        if !used.insert(key) {
            return Err(PopsicleError::BijectionFailure(format!("cut {c:?} hits a stratum twice")));
        }
        out.push(CutMatch { cut: c, stratum: stratum.clone(), breaking: *breaking });
    }
    if let Some((k, _)) = by_key.iter().find(|(k, _)| !used.contains(*k)) {
        return Err(PopsicleError::BijectionFailure(format!("stratum {k} has no cut")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn cut_counts() {
        assert_eq!(admissible_cuts(2, &set(&[])).len(), 3);
        assert_eq!(admissible_cuts(2, &set(&[1, 2])).len(), 7);
        assert_eq!(admissible_cuts(1, &set(&[1])).len(), 2);
    }
}
