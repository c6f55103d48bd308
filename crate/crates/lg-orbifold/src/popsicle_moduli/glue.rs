use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::auxiliary::{auxiliary_model, forget, AuxModel, AuxOrigin, AuxParent};
use super::model::{DiscChild, TreeModel};
use super::validate::check;
use super::PopsicleError;

/// Gluing parameter: ε_v smooths the node between v and its parent,
/// ε_{e,k} merges the k-th semi-stable disc on the edge e into v with the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlueParam {
    Vertex(usize),
    Edge { disc: usize, k: usize },
}

impl fmt::Display for GlueParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlueParam::Vertex(v) => write!(f, "eps_v{v}"),
            GlueParam::Edge { disc, k } => write!(f, "eps_e{disc}_{k}"),
        }
    }
}

impl FromStr for GlueParam {
    type Err = PopsicleError;

    /// Accepts eps_v3, ε_v3, eps_e3_1 and ε_e3_1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || PopsicleError::UnknownParameter(s.to_string());
        let body = s.trim().strip_prefix("eps_").or_else(|| s.trim().strip_prefix("ε_")).ok_or_else(unknown)?;
        if let Some(v) = body.strip_prefix('v') {
            return v.parse().map(GlueParam::Vertex).map_err(|_| unknown());
        }
        if let Some(e) = body.strip_prefix('e') {
            let (d, k) = e.split_once('_').ok_or_else(unknown)?;
            return Ok(GlueParam::Edge {
                disc: d.parse().map_err(|_| unknown())?,
                k: k.parse().map_err(|_| unknown())?,
            });
        }
        Err(unknown())
    }
}

/// The codimension-many parameters of a valid model.
pub fn gluing_parameters(m: &TreeModel) -> Vec<GlueParam> {
    let me = m.m_e();
    let mut out = Vec::new();
    for v in 1..m.discs.len() {
        out.push(GlueParam::Vertex(v));
        for k in 1..=me.get(&v).copied().unwrap_or(0) {
            out.push(GlueParam::Edge { disc: v, k });
        }
    }
    out
}

fn find(aux: &AuxModel, o: AuxOrigin) -> Option<usize> {
    aux.discs.iter().position(|d| d.origin == o)
}

/// Glues ★ along one parameter: contracts the matching node of the
/// auxiliary model and forgets semi-stable components again.
pub fn glue(m: &TreeModel, p: GlueParam) -> Result<TreeModel, PopsicleError> {
    if !gluing_parameters(m).contains(&p) {
        return Err(PopsicleError::UnknownParameter(p.to_string()));
    }
    let codim = m.raw_codimension();
    let mut aux = auxiliary_model(m)?;
    let parents = aux.parents();
    let me = m.m_e();
    let (upper, lower) = match p {
        GlueParam::Vertex(v) => {
            let c = if me.get(&v).copied().unwrap_or(0) > 0 {
                find(&aux, AuxOrigin::Edge { disc: v, k: 1 })
            } else {
                find(&aux, AuxOrigin::Stable(v))
            }
            .expect("aux disc");
            (parents[c].expect("non-root"), c)
        }
        GlueParam::Edge { disc, k } => {
            let a = find(&aux, AuxOrigin::Edge { disc, k }).expect("aux disc");
            let b = if k == me[&disc] {
                find(&aux, AuxOrigin::Stable(disc))
            } else {
                find(&aux, AuxOrigin::Edge { disc, k: k + 1 })
            }
            .expect("aux disc");
            (a, b)
        }
    };
    contract(&mut aux, upper, lower)?;
    let out = forget(&aux).map_err(|e| PopsicleError::GlueFailure(e.to_string()))?;
    check(&out, true).map_err(PopsicleError::GlueFailure)?;
    if out.raw_codimension() + 1 != codim {
        return Err(PopsicleError::GlueFailure(format!("codimension went from {codim} to {}", out.raw_codimension())));
    }
    Ok(out)
}

/// Merges disc c into its parent p in the auxiliary model.
fn contract(aux: &mut AuxModel, p: usize, c: usize) -> Result<(), PopsicleError> {
    let pos = aux.discs[p]
        .children
        .iter()
        .position(|x| *x == DiscChild::Disc(c))
        .ok_or_else(|| PopsicleError::GlueFailure(format!("{c} is not a child of {p}")))?;
    let kids = aux.discs[c].children.clone();
    aux.discs[p].children.splice(pos..=pos, kids);
    let spr = std::mem::take(&mut aux.discs[c].sprinkles);
    aux.discs[p].sprinkles.extend(spr);
    aux.discs[c].alive = false;
    aux.discs[p].origin = AuxOrigin::Glued;
    for s in aux.spheres.iter_mut().filter(|s| s.alive && s.parent == AuxParent::Disc(c)) {
        s.parent = AuxParent::Disc(p);
    }
    let at_c: Vec<usize> =
        (0..aux.spheres.len()).filter(|&s| aux.spheres[s].alive && aux.spheres[s].aligned == c).collect();
    for s in at_c {
        let into = aux.spheres[s].parent;
        match into {
            AuxParent::Sphere(q) if aux.spheres[q].aligned == p => {
                let leaves = std::mem::take(&mut aux.spheres[s].leaves);
                aux.spheres[q].leaves.extend(leaves);
            }
            AuxParent::Disc(d) if d == p => {
                let leaves = std::mem::take(&mut aux.spheres[s].leaves);
                aux.discs[p].sprinkles.extend(leaves);
            }
            _ => return Err(PopsicleError::GlueFailure(format!("sphere {s} is not local to the glued node"))),
        }
        aux.spheres[s].alive = false;
        for t in aux.spheres.iter_mut().filter(|t| t.alive && t.parent == AuxParent::Sphere(s)) {
            t.parent = into;
        }
    }
    for s in aux.spheres.iter_mut().filter(|s| s.alive && s.aligned == c) {
        s.aligned = p;
    }
    Ok(())
}
