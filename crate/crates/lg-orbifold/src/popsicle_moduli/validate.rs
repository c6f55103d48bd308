use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::model::{DiscChild, Element, SphereParent, Target, TreeModel};
use super::PopsicleError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// First violated condition, if any.
    pub violation: Option<String>,
}

impl ValidationReport {
    fn fail(msg: String) -> Self {
        ValidationReport { valid: false, violation: Some(msg) }
    }
}

pub fn validate(m: &TreeModel) -> ValidationReport {
    match check(m, true) {
        Ok(()) => ValidationReport { valid: true, violation: None },
        Err(e) => ValidationReport::fail(e),
    }
}

/// Same checks with disc stability optional; breaking strata (a strip with
/// one input and nothing else) are combinatorially well formed but unstable.
pub(crate) fn check(m: &TreeModel, stability: bool) -> Result<(), String> {
    let nd = m.discs.len();
    if nd == 0 {
        return Err("no disc vertices".into());
    }
    // planar preorder, leaves 1..n left to right
    let mut order = Vec::new();
    let mut leaves = Vec::new();
    let mut stack = vec![0usize];
    let mut seen = vec![false; nd];
    while let Some(v) = stack.pop() {
        if v >= nd || seen[v] {
            return Err(format!("disc {v} is repeated or out of range"));
        }
        seen[v] = true;
        order.push(v);
        if m.discs[v].children.is_empty() {
            return Err(format!("disc {v} has no inputs"));
        }
        for c in m.discs[v].children.iter().rev() {
            if let DiscChild::Disc(u) = *c {
                stack.push(u);
            }
        }
    }
    if order != (0..nd).collect::<Vec<_>>() {
        return Err("discs are not numbered in planar preorder from the root".into());
    }
    fn collect(m: &TreeModel, v: usize, out: &mut Vec<usize>) {
        for c in &m.discs[v].children {
            match *c {
                DiscChild::Leaf(k) => out.push(k),
                DiscChild::Disc(u) => collect(m, u, out),
            }
        }
    }
    collect(m, 0, &mut leaves);
    if leaves != (1..=m.flavor.n).collect::<Vec<_>>() {
        return Err(format!("leaves read {leaves:?}, expected 1..{}", m.flavor.n));
    }
    let parents = m.parents();
    let dc = m.disc_colors();
    let ns = m.spheres.len();

    // sphere forest must be acyclic with valid references
    for (s, sp) in m.spheres.iter().enumerate() {
        match sp.parent {
            SphereParent::Disc { disc, line } => {
                if disc >= nd || line == 0 || line > m.discs[disc].children.len() {
                    return Err(format!("sphere {s} attached to missing line {line} of disc {disc}"));
                }
            }
            SphereParent::Sphere(p) => {
                if p >= ns || p == s {
                    return Err(format!("sphere {s} has invalid parent {p}"));
                }
            }
        }
        if sp.target.disc() >= nd {
            return Err(format!("sphere {s} aligned to a missing disc"));
        }
        if let Target::Edge { disc, psi } = sp.target {
            if disc == 0 {
                return Err(format!("sphere {s} aligned to the root half-edge; only internal edges carry alignment"));
            }
            if psi == 0 {
                return Err(format!("sphere {s} has Ψ = 0"));
            }
        }
    }
    let mut root_of = vec![usize::MAX; ns];
    for s in 0..ns {
        let mut cur = s;
        let mut steps = 0;
        while let SphereParent::Sphere(p) = m.spheres[cur].parent {
            cur = p;
            steps += 1;
            if steps > ns {
                return Err(format!("sphere {s} lies on a cycle"));
            }
        }
        root_of[s] = cur;
    }

    // each label exactly once
    let mut count = vec![0usize; m.flavor.labels() + 1];
    for d in &m.discs {
        for &f in &d.sprinkles {
            if f == 0 || f > m.flavor.labels() {
                return Err(format!("unknown label {f}"));
            }
            count[f] += 1;
        }
    }
    for sp in &m.spheres {
        for &f in &sp.leaves {
            if f == 0 || f > m.flavor.labels() {
                return Err(format!("unknown label {f}"));
            }
            count[f] += 1;
        }
    }
    if let Some(f) = (1..count.len()).find(|&f| count[f] != 1) {
        return Err(format!("label {f} appears {} times", count[f]));
    }

    // decomposition conditions
    for (v, d) in m.discs.iter().enumerate() {
        for &f in &d.sprinkles {
            if !dc[v].contains(&m.flavor.color(f)) {
                return Err(format!("sprinkle {f} on disc {v}: φ(f) not in C(e_{{v,0}})"));
            }
        }
    }
    let sc = m.sphere_colors();
    let kids = m.sphere_children();
    for (s, sp) in m.spheres.iter().enumerate() {
        if let SphereParent::Disc { disc, line } = sp.parent {
            if !sc[s].is_subset(&m.line_colors_with(&dc, disc, line)) {
                return Err(format!("sphere tree {s} at disc {disc} line {line}: colors outside C(e_{{v,i}})"));
            }
        }
    }

    // stability
    for (s, sp) in m.spheres.iter().enumerate() {
        if sp.leaves.len() + kids[s].len() < 2 {
            return Err(format!("sphere {s} has fewer than two inputs"));
        }
    }
    if stability {
        for (v, d) in m.discs.iter().enumerate() {
            let special = d.children.len() + d.sprinkles.len() + m.attached_at(v).count();
            if special < 2 {
                return Err(format!("disc {v} is unstable"));
            }
        }
    }

    // alignment data
    for s in 0..ns {
        if m.layers_with(&dc, &sc, &kids, s).is_none() {
            return Err(format!("sphere {s} is not alignable with {:?}", m.spheres[s].target));
        }
        let r = root_of[s];
        let SphereParent::Disc { disc: v, line } = m.spheres[r].parent else { unreachable!() };
        let t = m.spheres[s].target.disc();
        let via = match m.discs[v].children[line - 1] {
            DiscChild::Disc(u) => u,
            DiscChild::Leaf(_) => return Err(format!("sphere {s} is aligned but its tree sits on a leaf line")),
        };
        if !TreeModel::descends(&parents, t, via) {
            return Err(format!("sphere {s}: Φ is not strictly after its attachment disc {v} on line {line}"));
        }
    }
    for s in 0..ns {
        let es = TreeModel::element_of(&m.spheres[s].target);
        let mut cur = s;
        while let SphereParent::Sphere(p) = m.spheres[cur].parent {
            let ep = TreeModel::element_of(&m.spheres[p].target);
            let both_vertex = matches!((ep, es), (Element::Vertex(_), Element::Vertex(_)));
            let ok = if both_vertex { TreeModel::lt(&parents, ep, es) } else { TreeModel::le(&parents, ep, es) };
            if !ok {
                return Err(format!("Φ order violation between sphere {p} and its descendant {s}"));
            }
            if let (Target::Edge { disc: a, psi: pa }, Target::Edge { disc: b, psi: pb }) =
                (m.spheres[p].target, m.spheres[s].target)
            {
                if a == b && pa >= pb {
                    return Err(format!("Ψ not strictly increasing from sphere {p} to {s}"));
                }
            }
            cur = p;
        }
    }
    let mut psis: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for sp in &m.spheres {
        if let Target::Edge { disc, psi } = sp.target {
            psis.entry(disc).or_default().insert(psi);
        }
    }
    for (e, vals) in psis {
        let me = *vals.iter().max().unwrap();
        if vals.len() != me {
            return Err(format!("Ψ on the edge into disc {e} is not onto 1..{me}"));
        }
    }
    Ok(())
}

pub fn codimension(m: &TreeModel) -> Result<usize, PopsicleError> {
    match check(m, true) {
        Ok(()) => Ok(m.raw_codimension()),
        Err(e) => Err(PopsicleError::InvalidModel(e)),
    }
}

/// n − 2 + |F|
pub fn dim_open(n: usize, f: usize) -> Result<usize, PopsicleError> {
    if n + f < 2 {
        return Err(PopsicleError::Unstable);
    }
    Ok(n + f - 2)
}

/// Whether a sphere with the given layer color sets can be aligned with a
/// disc whose outgoing color sets are `outgoing` (vertex case): each layer
/// must sit inside C(e_{v,i_k}) with i₁ < i₂ < …. Returns the sequence.
pub fn alignable_vertex(layers: &[BTreeSet<usize>], outgoing: &[BTreeSet<usize>]) -> Option<Vec<usize>> {
    let mut seq = Vec::new();
    for l in layers {
        let hits: Vec<usize> = (0..outgoing.len()).filter(|&i| !l.is_empty() && l.is_subset(&outgoing[i])).collect();
        if hits.len() != 1 {
            return None;
        }
        let i = hits[0] + 1;
        if seq.last().is_some_and(|&p| p >= i) {
            return None;
        }
        seq.push(i);
    }
    Some(seq)
}

/// Edge case: a single layer inside C(e).
pub fn alignable_edge(layers: &[BTreeSet<usize>], edge_colors: &BTreeSet<usize>) -> bool {
    layers.len() == 1 && layers[0].is_subset(edge_colors)
}
