use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_algebra::rational::{frac, serde_rat, Rational};
use crate::exact_algebra::{smith_normal_form, IntMatrix, Polynomial};

use super::LgError;

/// Largest group whose elements or subgroups we are willing to list.
pub const ENUMERATION_CAP: u64 = 1 << 16;

/// Diagonal element exp(2πiθ) with each phase reduced into [0,1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    #[serde(with = "serde_rat::vec")]
    pub phases: Vec<Rational>,
}

impl GroupElement {
    pub fn new(phases: Vec<Rational>) -> Self {
        GroupElement { phases: phases.iter().map(frac).collect() }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { phases: vec![Rational::zero(); n] }
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn compose(&self, other: &Self) -> Self {
        GroupElement::new(self.phases.iter().zip(&other.phases).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Self {
        GroupElement::new(self.phases.iter().map(|a| -a.clone()).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        let k = Rational::from_integer(k.into());
        GroupElement::new(self.phases.iter().map(|a| a * &k).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(|p| p.is_zero())
    }

    /// age(g) = Σ θ_{g,i}
    pub fn age(&self) -> Rational {
        self.phases.iter().sum()
    }

    /// Order in (ℚ/ℤ)ⁿ: lcm of the phase denominators.
    pub fn order(&self) -> BigInt {
        self.phases.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }

    /// Whether aₖ·θ ∈ ℤ for every row.
    pub fn fixes_rows(&self, rows: &[Vec<BigInt>]) -> bool {
        rows.iter().all(|r| {
            r.iter()
                .zip(&self.phases)
                .map(|(a, t)| Rational::from_integer(a.clone()) * t)
                .sum::<Rational>()
                .is_integer()
        })
    }
}

/// Finite group {θ : aₖ·θ ∈ ℤ} attached to an exponent matrix, with its
/// invariant-factor structure read off a Smith normal form U·A·V = D.
/// Generators are gₖ = V·eₖ/dₖ and coordinates cₖ = dₖ·(V⁻¹θ)ₖ mod dₖ.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagonalGroup {
    pub n: usize,
    #[serde(skip)]
    rows: Vec<Vec<BigInt>>,
    #[serde(with = "crate::exact_algebra::rational::serde_num")]
    pub order: BigInt,
    #[serde(with = "crate::exact_algebra::rational::serde_num::vec")]
    pub invariant_factors: Vec<BigInt>,
    pub generators: Vec<GroupElement>,
    #[serde(skip)]
    factor_rows: Vec<usize>,
    #[serde(skip)]
    v_inv: Option<IntMatrix>,
}

impl DiagonalGroup {
    pub fn from_exponent_rows(rows: &[Vec<BigInt>], n: usize) -> Result<Self, LgError> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(LgError::Shape("exponent row length differs from variable count".into()));
        }
        let a = if rows.is_empty() { IntMatrix::zeros(0, n) } else { IntMatrix::from_rows(rows.to_vec()) };
        let snf = smith_normal_form(&a);
        let diag = &snf.diagonal;
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        if rank < n {
            return Err(LgError::InfiniteGroup { rank, n });
        }
        let mut generators = Vec::new();
        let mut invariant_factors = Vec::new();
        let mut factor_rows = Vec::new();
        for (k, d) in diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let col: Vec<Rational> = (0..n).map(|i| Rational::new(snf.v.get(i, k).clone(), d.clone())).collect();
            generators.push(GroupElement::new(col));
            invariant_factors.push(d.clone());
            factor_rows.push(k);
        }
        let order = invariant_factors.iter().product();
        Ok(DiagonalGroup {
            n,
            rows: rows.to_vec(),
            order,
            invariant_factors,
            generators,
            factor_rows,
            v_inv: Some(snf.v_inv),
        })
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.n() == self.n && g.fixes_rows(&self.rows)
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Coordinates of g against the invariant-factor generators.
    pub fn coordinates(&self, g: &GroupElement) -> Result<Vec<BigInt>, LgError> {
        if !self.contains(g) {
            return Err(LgError::NotInGroup);
        }
        let vi = self.v_inv.as_ref().expect("coordinate data");
        let phi = vi.apply_rational(&g.phases);
        Ok(self
            .factor_rows
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&k, d)| {
                let c = &phi[k] * Rational::from_integer(d.clone());
                debug_assert!(c.is_integer());
                c.to_integer().mod_floor(d)
            })
            .collect())
    }

    pub fn element(&self, coords: &[BigInt]) -> GroupElement {
        let mut phases = vec![Rational::zero(); self.n];
        for (c, g) in coords.iter().zip(&self.generators) {
            for (p, q) in phases.iter_mut().zip(&g.phases) {
                *p += q * Rational::from_integer(c.clone());
            }
        }
        GroupElement::new(phases)
    }

    fn small_order(&self) -> Result<u64, LgError> {
        match self.order.to_u64() {
            Some(o) if o <= ENUMERATION_CAP => Ok(o),
            _ => Err(LgError::TooLarge(self.order.clone())),
        }
    }

    /// All elements, sorted by phase vector.
    pub fn elements(&self) -> Result<Vec<GroupElement>, LgError> {
        self.small_order()?;
        let mut out = vec![GroupElement::identity(self.n)];
        for g in &self.generators {
            let d = g.order().to_u64().expect("small");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..d {
                    next.push(cur.clone());
                    cur = cur.compose(g);
                }
            }
            out = next;
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn full_subgroup(&self) -> Result<Subgroup, LgError> {
        Ok(Subgroup { n: self.n, generators: self.generators.clone(), elements: self.elements()? })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::trivial(self.n)
    }

    /// Every subgroup, built as joins of cyclic subgroups.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, LgError> {
        let elems = self.elements()?;
        let mut seen: BTreeSet<Vec<GroupElement>> = BTreeSet::new();
        let mut found: Vec<Subgroup> = Vec::new();
        let mut queue: VecDeque<Subgroup> = VecDeque::new();
        for g in &elems {
            let s = Subgroup::generated_by(self.n, std::slice::from_ref(g))?;
            if seen.insert(s.elements.clone()) {
                queue.push_back(s.clone());
                found.push(s);
            }
        }
        let cyclic: Vec<Subgroup> = found.clone();
        while let Some(s) = queue.pop_front() {
            for c in &cyclic {
                if c.elements.iter().all(|x| s.contains(x)) {
                    continue;
                }
                let mut gens = s.generators.clone();
                gens.extend(c.generators.iter().cloned());
                let j = Subgroup::generated_by(self.n, &gens)?;
                if seen.insert(j.elements.clone()) {
                    queue.push_back(j.clone());
                    found.push(j);
                }
            }
        }
        found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(found)
    }
}

/// Subgroup of a diagonal group, stored with its full element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub n: usize,
    pub generators: Vec<GroupElement>,
    pub elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn trivial(n: usize) -> Self {
        Subgroup { n, generators: vec![], elements: vec![GroupElement::identity(n)] }
    }

    pub fn generated_by(n: usize, gens: &[GroupElement]) -> Result<Self, LgError> {
        let mut set: BTreeSet<GroupElement> = BTreeSet::new();
        let id = GroupElement::identity(n);
        set.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                if g.n() != n {
                    return Err(LgError::Shape("generator dimension".into()));
                }
                let y = x.compose(g);
                if set.insert(y.clone()) {
                    if set.len() as u64 > ENUMERATION_CAP {
                        return Err(LgError::TooLarge(BigInt::from(set.len())));
                    }
                    queue.push_back(y);
                }
            }
        }
        let gens: Vec<GroupElement> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        Ok(Subgroup { n, generators: gens, elements: set.into_iter().collect() })
    }

    /// Subgroup with the given (closed) element set; generators picked greedily.
    pub fn from_elements(n: usize, mut elements: Vec<GroupElement>) -> Self {
        elements.sort();
        elements.dedup();
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut span = Subgroup::trivial(n);
        for e in &elements {
            if !span.contains(e) {
                gens.push(e.clone());
                span = Subgroup::generated_by(n, &gens).expect("inside a finite group");
            }
        }
        Subgroup { n, generators: gens, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, g: &DiagonalGroup) -> bool {
        self.elements.iter().all(|x| g.contains(x))
    }
}

/// Character of a diagonal group, given by its phases on the
/// invariant-factor generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Character {
    pub group: DiagonalGroup,
    #[serde(with = "serde_rat::vec")]
    pub values: Vec<Rational>,
}

impl Character {
    pub fn new(group: DiagonalGroup, values: Vec<Rational>) -> Result<Self, LgError> {
        if values.len() != group.generators.len() {
            return Err(LgError::InvalidCharacter("one value per generator".into()));
        }
        for (v, d) in values.iter().zip(&group.invariant_factors) {
            if !(v * Rational::from_integer(d.clone())).is_integer() {
                return Err(LgError::InvalidCharacter(format!("value {v} is not a {d}-th root of unity phase")));
            }
        }
        let values = values.iter().map(frac).collect();
        Ok(Character { group, values })
    }

    pub fn trivial(group: DiagonalGroup) -> Self {
        let values = vec![Rational::zero(); group.generators.len()];
        Character { group, values }
    }

    /// χ(g) as a phase in [0,1).
    pub fn eval(&self, g: &GroupElement) -> Result<Rational, LgError> {
        let c = self.group.coordinates(g)?;
        let s: Rational = c.iter().zip(&self.values).map(|(k, v)| Rational::from_integer(k.clone()) * v).sum();
        Ok(frac(&s))
    }
}

pub fn max_symmetry_group(w: &Polynomial) -> Result<DiagonalGroup, LgError> {
    let rows: Vec<Vec<BigInt>> =
        w.exponent_rows().iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    DiagonalGroup::from_exponent_rows(&rows, w.nvars())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::rat;

    fn g(s: &str) -> DiagonalGroup {
        max_symmetry_group(&Polynomial::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn quadric_group_is_klein() {
        let gw = g("x^2 + y^2");
        assert_eq!(gw.order, BigInt::from(4));
        assert_eq!(gw.invariant_factors, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(gw.elements().unwrap().len(), 4);
    }

    #[test]
    fn chain_group_is_cyclic_of_order_eight() {
        let gw = g("x^2*y + y^4");
        assert_eq!(gw.order, BigInt::from(8));
        assert!(gw.is_cyclic());
        let j = GroupElement::new(vec![rat(3, 8), rat(1, 4)]);
        assert!(gw.contains(&j));
        assert_eq!(j.order(), BigInt::from(8));
    }

    #[test]
    fn linear_monomial_gives_trivial_group() {
        let gw = g("x1");
        assert_eq!(gw.order, BigInt::one());
        assert_eq!(gw.elements().unwrap(), vec![GroupElement::identity(1)]);
    }

    #[test]
    fn degenerate_polynomial_has_infinite_group() {
        let w = Polynomial::parse("x^2*y^2").unwrap();
        assert!(matches!(max_symmetry_group(&w), Err(LgError::InfiniteGroup { .. })));
    }

    #[test]
    fn coordinates_round_trip() {
        let gw = g("x^3*y + y^3*z + z^5 + w^2");
        for e in gw.elements().unwrap() {
            let c = gw.coordinates(&e).unwrap();
            assert_eq!(gw.element(&c), e);
        }
    }
}
