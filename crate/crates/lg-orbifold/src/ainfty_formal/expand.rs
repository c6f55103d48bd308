use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::signs::{sign_exponents, star_prefix, vanish_noninjective};
use super::{FormalGenerator, Grading, Operator};
use crate::popsicle_moduli::{AdmissibleCut, Flavor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    /// 0-based input slot.
    Input(usize),
    Apply {
        op: Operator,
        args: Vec<Node>,
    },
}

impl Node {
    pub fn render(&self, names: &[String]) -> String {
        match self {
            Node::Input(k) => names[*k].clone(),
            Node::Apply { op, args } => {
                let a: Vec<String> = args.iter().map(|x| x.render(names)).collect();
                format!("{op}({})", a.join(","))
            }
        }
    }

    pub fn operators(&self) -> Vec<&Operator> {
        match self {
            Node::Input(_) => vec![],
            Node::Apply { op, args } => {
                let mut v = vec![op];
                for a in args {
                    v.extend(a.operators());
                }
                v
            }
        }
    }
}

/// One signed summand. `exponent` is the sign exponent and `provenance`
/// lists the pieces it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponent: i64,
    pub eps: bool,
    pub node: Node,
    pub provenance: Vec<(String, i64)>,
}

impl Term {
    pub fn sign(&self) -> i64 {
        if self.exponent.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalExpression {
    pub inputs: Vec<FormalGenerator>,
    pub terms: Vec<Term>,
}

impl FormalExpression {
    pub fn names(&self) -> Vec<String> {
        self.inputs.iter().map(|g| g.name.clone()).collect()
    }

    pub fn render_term(&self, t: &Term) -> String {
        let body = t.node.render(&self.names());
        let s = if t.sign() > 0 { "+" } else { "-" };
        if t.eps {
            format!("{s} ε·{body}")
        } else {
            format!("{s} {body}")
        }
    }
}

impl fmt::Display for FormalExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| self.render_term(t)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Integer degree used in signs: the degree itself when integral, else
/// its ℤ/2 lift.
pub(crate) fn sign_degree(g: &Grading) -> i64 {
    if g.degree.is_integer() {
        i64::try_from(g.degree.numer()).unwrap_or(g.parity as i64)
    } else {
        g.parity as i64
    }
}

pub(crate) struct Part {
    pub exponent: i64,
    pub eps: bool,
    pub f: BTreeSet<usize>,
    /// The ε-slot dropped from F in the ε-component.
    pub dropped: Option<usize>,
    pub provenance: Vec<(String, i64)>,
}

/// M_n with ε-slots `eps` as a list of P-operators:
/// M^a = ±P_{n,F}, M^b = Σ_j ±P_{n,F̂ʲ} with prefix ⋆ taken through slot i_j − 1.
pub(crate) fn parts(eps: &BTreeSet<usize>, degrees: &[i64]) -> Vec<Part> {
    let n = degrees.len();
    let e = sign_exponents(n, eps, degrees);
    let mut out = vec![Part {
        exponent: e.star_a,
        eps: false,
        f: eps.clone(),
        dropped: None,
        provenance: vec![("star_a".into(), e.star_a)],
    }];
    for &ij in eps {
        let mut fh = eps.clone();
        fh.remove(&ij);
        let pre = star_prefix(degrees, ij - 1);
        let sb = e.star_b[&ij];
        out.push(Part {
            exponent: pre + sb,
            eps: true,
            f: fh,
            dropped: Some(ij),
            provenance: vec![(format!("star_{}", ij - 1), pre), (format!("star_b[{ij}]"), sb)],
        });
    }
    out.retain(|p| {
        let phi: Vec<usize> = p.f.iter().copied().collect();
        Flavor::new(n, phi).is_ok_and(|fl| !vanish_noninjective(&fl))
    });
    out
}

fn eps_slots(inputs: &[FormalGenerator]) -> BTreeSet<usize> {
    inputs.iter().enumerate().filter(|(_, g)| g.eps).map(|(k, _)| k + 1).collect()
}

/// M_n(c_1, …, c_n) in P-symbols. F is read off from the ε-decorated slots.
pub fn expand_mn(inputs: &[FormalGenerator]) -> FormalExpression {
    let degrees: Vec<i64> = inputs.iter().map(|g| sign_degree(&g.base)).collect();
    let n = inputs.len();
    let terms = parts(&eps_slots(inputs), &degrees)
        .into_iter()
        .map(|p| Term {
            exponent: p.exponent,
            eps: p.eps,
            node: Node::Apply { op: Operator::new(n, p.f), args: (0..n).map(Node::Input).collect() },
            provenance: p.provenance,
        })
        .collect();
    FormalExpression { inputs: inputs.to_vec(), terms }
}

/// P_{n₁,F₁}(x_1, …, P_{n₂,F₂}(x_i, …), …) for a cut.
pub fn compose(cut: &AdmissibleCut) -> Node {
    let inner = Node::Apply {
        op: Operator::new(cut.n2, cut.f2.clone()),
        args: (cut.i - 1..cut.i - 1 + cut.n2).map(Node::Input).collect(),
    };
    let mut args: Vec<Node> = (0..cut.i - 1).map(Node::Input).collect();
    args.push(inner);
    args.extend((cut.i - 1 + cut.n2..cut.n1 + cut.n2 - 1).map(Node::Input));
    Node::Apply { op: Operator::new(cut.n1, cut.f1.clone()), args }
}

/// A summand of Σ ±M_{n₁}(c_1, …, M_{n₂}(c_i, …), …) after both
/// M's are expanded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTerm {
    pub exponent: i64,
    pub eps: bool,
    pub cut: AdmissibleCut,
    /// For ε-terms: the original ε-slot that no longer carries a sprinkle.
    pub omitted: Option<usize>,
    pub degree: Grading,
    pub provenance: Vec<(String, i64)>,
}

impl IdentityTerm {
    pub fn node(&self) -> Node {
        compose(&self.cut)
    }

    pub fn sign(&self) -> i64 {
        if self.exponent.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Every summand of the A∞-identity for the given inputs, in the order
/// (n₁, i, inner term, outer term). The prefix sign is Σ_{j<i}(|c_j| − 1).
pub fn identity_terms(inputs: &[FormalGenerator], gamma: &Grading) -> Vec<IdentityTerm> {
    let n = inputs.len();
    let e = eps_slots(inputs);
    let eps_deg = Grading::epsilon(gamma);
    let cdeg: Vec<Grading> = inputs.iter().map(|g| g.degree(gamma)).collect();
    let mut out = Vec::new();
    for n1 in 1..=n {
        let n2 = n + 1 - n1;
        for i in 1..=n1 {
            let pre: i64 = (0..i - 1).map(|j| sign_degree(&cdeg[j]) - 1).sum();
            let inner = &inputs[i - 1..i - 1 + n2];
            let ein = eps_slots(inner);
            let ideg: Vec<i64> = inner.iter().map(|g| sign_degree(&g.base)).collect();
            let inner_base = inner.iter().fold(Grading::int(0), |acc, g| acc.add(&g.base));
            for pin in parts(&ein, &ideg) {
                let op2 = Operator::new(n2, pin.f.clone());
                let out_base = op2.degree(gamma).add(&inner_base);
                let mut obase: Vec<Grading> = inputs[..i - 1].iter().map(|g| g.base.clone()).collect();
                obase.push(out_base);
                obase.extend(inputs[i - 1 + n2..].iter().map(|g| g.base.clone()));
                let odeg: Vec<i64> = obase.iter().map(sign_degree).collect();
                let mut eout: BTreeSet<usize> = e.iter().filter(|&&k| k < i).copied().collect();
                eout.extend(e.iter().filter(|&&k| k > i + n2 - 1).map(|&k| k + 1 - n2));
                if pin.eps {
                    eout.insert(i);
                }
                for pout in parts(&eout, &odeg) {
                    let op1 = Operator::new(n1, pout.f.clone());
                    let omitted = pout.dropped.map(|d| match d.cmp(&i) {
                        std::cmp::Ordering::Less => d,
                        std::cmp::Ordering::Greater => d + n2 - 1,
                        std::cmp::Ordering::Equal => pin.dropped.expect("ε output without a dropped slot") + i - 1,
                    });
                    let mut degree = op1.degree(gamma).add(&op2.degree(gamma));
                    for g in inputs {
                        degree = degree.add(&g.base);
                    }
                    if pout.eps {
                        degree = degree.add(&eps_deg);
                    }
                    let mut provenance = vec![("prefix".to_string(), pre)];
                    provenance.extend(pin.provenance.iter().map(|(k, v)| (format!("inner.{k}"), *v)));
                    provenance.extend(pout.provenance.iter().map(|(k, v)| (format!("outer.{k}"), *v)));
                    out.push(IdentityTerm {
                        exponent: pre + pin.exponent + pout.exponent,
                        eps: pout.eps,
                        cut: AdmissibleCut { n1, n2, i, f1: pout.f, f2: pin.f.clone() },
                        omitted,
                        degree,
                        provenance,
                    });
                }
            }
        }
    }
    out
}
