use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::model::{Disc, DiscChild, Flavor, Sphere, SphereParent, Target, TreeModel};
use super::validate::check;
use super::PopsicleError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxOrigin {
    /// A disc of the stable model (by its id there).
    Stable(usize),
    /// k-th semi-stable disc on the edge into a stable disc, counted from the root side.
    Edge { disc: usize, k: usize },
    /// Produced by gluing.
    Glued,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxDisc {
    pub children: Vec<DiscChild>,
    pub sprinkles: BTreeSet<usize>,
    pub origin: AuxOrigin,
    pub alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxParent {
    Disc(usize),
    Sphere(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSphere {
    pub parent: AuxParent,
    pub leaves: BTreeSet<usize>,
    /// The disc component this sphere is aligned with.
    pub aligned: usize,
    pub semistable: bool,
    pub alive: bool,
}

/// A tree model with the semi-stable discs and spheres that make every
/// alignment local: each sphere is aligned with one disc, a root sphere with
/// a child of the disc it is attached to, a child sphere with a child of its
/// parent's disc, and every sphere label sits on a sphere aligned with the
/// disc carrying that input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxModel {
    pub flavor: Flavor,
    pub root: usize,
    pub discs: Vec<AuxDisc>,
    pub spheres: Vec<AuxSphere>,
}

impl AuxModel {
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.discs.len()];
        for (v, d) in self.discs.iter().enumerate() {
            if !d.alive {
                continue;
            }
            for c in &d.children {
                if let DiscChild::Disc(u) = *c {
                    p[u] = Some(v);
                }
            }
        }
        p
    }

    fn path_down(&self, parents: &[Option<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parents[cur]?;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// The disc with leaf k among its children.
    pub fn leaf_disc(&self, k: usize) -> Option<usize> {
        (0..self.discs.len()).find(|&d| self.discs[d].alive && self.discs[d].children.contains(&DiscChild::Leaf(k)))
    }

    pub fn sphere_child_count(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.spheres.iter().map(|s| s.leaves.len()).collect();
        for s in &self.spheres {
            if let (true, AuxParent::Sphere(p)) = (s.alive, s.parent) {
                c[p] += 1;
            }
        }
        c
    }

    /// Checks the locality conditions listed on the type.
    pub fn check_local(&self) -> Result<(), String> {
        let parents = self.parents();
        for (s, sp) in self.spheres.iter().enumerate().filter(|(_, s)| s.alive) {
            let base = match sp.parent {
                AuxParent::Disc(d) => d,
                AuxParent::Sphere(p) => self.spheres[p].aligned,
            };
            if parents[sp.aligned] != Some(base) {
                return Err(format!("aux sphere {s} is not aligned with a child of {base}"));
            }
            for &f in &sp.leaves {
                if self.leaf_disc(self.flavor.color(f)) != Some(sp.aligned) {
                    return Err(format!("label {f} on aux sphere {s} is not at its input disc"));
                }
            }
        }
        Ok(())
    }
}

pub fn auxiliary_model(m: &TreeModel) -> Result<AuxModel, PopsicleError> {
    check(m, true).map_err(PopsicleError::InvalidModel)?;
    let me = m.m_e();
    let mut discs: Vec<AuxDisc> = m
        .discs
        .iter()
        .enumerate()
        .map(|(v, d)| AuxDisc {
            children: d.children.clone(),
            sprinkles: d.sprinkles.clone(),
            origin: AuxOrigin::Stable(v),
            alive: true,
        })
        .collect();
    // edge_disc[(v, k)] = aux id of the k-th semi-stable disc above v
    let mut edge_disc = std::collections::BTreeMap::new();
    for (&v, &mv) in &me {
        let ids: Vec<usize> = (1..=mv)
            .map(|k| {
                discs.push(AuxDisc {
                    children: vec![],
                    sprinkles: BTreeSet::new(),
                    origin: AuxOrigin::Edge { disc: v, k },
                    alive: true,
                });
                edge_disc.insert((v, k), discs.len() - 1);
                discs.len() - 1
            })
            .collect();
        for k in 0..mv {
            discs[ids[k]].children = vec![DiscChild::Disc(if k + 1 < mv { ids[k + 1] } else { v })];
        }
        let p = m.parents()[v].expect("edge target is not the root");
        for c in discs[p].children.iter_mut() {
            if *c == DiscChild::Disc(v) {
                *c = DiscChild::Disc(ids[0]);
            }
        }
    }
    let aligned_of = |t: Target| match t {
        Target::Vertex(v) => v,
        Target::Edge { disc, psi } => edge_disc[&(disc, psi)],
    };
    let mut aux = AuxModel { flavor: m.flavor.clone(), root: 0, discs, spheres: vec![] };
    for sp in &m.spheres {
        aux.spheres.push(AuxSphere {
            parent: match sp.parent {
                SphereParent::Disc { disc, .. } => AuxParent::Disc(disc),
                SphereParent::Sphere(p) => AuxParent::Sphere(p),
            },
            leaves: sp.leaves.clone(),
            aligned: aligned_of(sp.target),
            semistable: false,
            alive: true,
        });
    }
    let parents = aux.parents();
    let bad = |s: &str| PopsicleError::InvalidModel(s.to_string());
    // semi-stable sphere chains between a sphere and whatever it hangs from
    for s in 0..m.spheres.len() {
        let base = match aux.spheres[s].parent {
            AuxParent::Disc(d) => d,
            AuxParent::Sphere(p) => aux.spheres[p].aligned,
        };
        let path = aux
            .path_down(&parents, base, aux.spheres[s].aligned)
            .ok_or_else(|| bad("alignment is not below its base"))?;
        let mut parent = aux.spheres[s].parent;
        for &d in &path[1..path.len() - 1] {
            aux.spheres.push(AuxSphere { parent, leaves: BTreeSet::new(), aligned: d, semistable: true, alive: true });
            parent = AuxParent::Sphere(aux.spheres.len() - 1);
        }
        aux.spheres[s].parent = parent;
    }
    // semi-stable spheres carrying each label down to its input disc
    for s in 0..m.spheres.len() {
        let leaves: Vec<usize> = aux.spheres[s].leaves.iter().copied().collect();
        for f in leaves {
            let target = aux.leaf_disc(m.flavor.color(f)).ok_or_else(|| bad("missing input"))?;
            let path = aux
                .path_down(&parents, aux.spheres[s].aligned, target)
                .ok_or_else(|| bad("label outside alignment"))?;
            if path.len() == 1 {
                continue;
            }
            aux.spheres[s].leaves.remove(&f);
            let mut parent = AuxParent::Sphere(s);
            for &d in &path[1..] {
                aux.spheres.push(AuxSphere {
                    parent,
                    leaves: BTreeSet::new(),
                    aligned: d,
                    semistable: true,
                    alive: true,
                });
                parent = AuxParent::Sphere(aux.spheres.len() - 1);
            }
            let last = aux.spheres.len() - 1;
            aux.spheres[last].leaves.insert(f);
        }
    }
    aux.check_local().map_err(PopsicleError::InvalidModel)?;
    Ok(aux)
}

/// Drops semi-stable components and reads off the stable tree model.
pub fn forget(aux: &AuxModel) -> Result<TreeModel, PopsicleError> {
    let mut a = aux.clone();
    let bad = |s: String| PopsicleError::InvalidModel(s);
    // spheres with a single input
    loop {
        let counts = a.sphere_child_count();
        let Some(s) = (0..a.spheres.len()).find(|&s| a.spheres[s].alive && counts[s] <= 1) else { break };
        if counts[s] == 0 {
            return Err(bad(format!("aux sphere {s} has no inputs")));
        }
        let parent = a.spheres[s].parent;
        a.spheres[s].alive = false;
        if let Some(&f) = a.spheres[s].leaves.iter().next() {
            match parent {
                AuxParent::Sphere(p) => {
                    a.spheres[p].leaves.insert(f);
                }
                AuxParent::Disc(d) => {
                    a.discs[d].sprinkles.insert(f);
                }
            }
        } else {
            let c = (0..a.spheres.len())
                .find(|&c| a.spheres[c].alive && a.spheres[c].parent == AuxParent::Sphere(s))
                .expect("one child");
            a.spheres[c].parent = parent;
        }
    }
    let attached = |a: &AuxModel, d: usize| a.spheres.iter().any(|s| s.alive && s.parent == AuxParent::Disc(d));
    let keep: Vec<bool> = (0..a.discs.len())
        .map(|d| {
            a.discs[d].alive
                && (d == a.root
                    || a.discs[d].children.len() >= 2
                    || !a.discs[d].sprinkles.is_empty()
                    || attached(&a, d))
        })
        .collect();
    // preorder over kept discs; removed ones become edge positions
    let mut id = vec![usize::MAX; a.discs.len()];
    let mut edge_pos: Vec<Option<(usize, usize)>> = vec![None; a.discs.len()];
    let mut out: Vec<Disc> = Vec::new();
    fn build(
        a: &AuxModel,
        keep: &[bool],
        d: usize,
        id: &mut Vec<usize>,
        edge_pos: &mut Vec<Option<(usize, usize)>>,
        out: &mut Vec<Disc>,
    ) -> Result<usize, PopsicleError> {
        let me = out.len();
        id[d] = me;
        out.push(Disc { children: vec![], sprinkles: a.discs[d].sprinkles.clone() });
        let mut ch = Vec::new();
        for c in &a.discs[d].children {
            match *c {
                DiscChild::Leaf(k) => ch.push(DiscChild::Leaf(k)),
                DiscChild::Disc(u) => {
                    let mut chain = Vec::new();
                    let mut cur = u;
                    while !keep[cur] {
                        match a.discs[cur].children.as_slice() {
                            [DiscChild::Disc(next)] => {
                                chain.push(cur);
                                cur = *next;
                            }
                            _ => return Err(PopsicleError::InvalidModel(format!("aux disc {cur} is unstable"))),
                        }
                    }
                    let v = build(a, keep, cur, id, edge_pos, out)?;
                    for (k, &c) in chain.iter().enumerate() {
                        edge_pos[c] = Some((v, k + 1));
                    }
                    ch.push(DiscChild::Disc(v));
                }
            }
        }
        out[me].children = ch;
        Ok(me)
    }
    build(&a, &keep, a.root, &mut id, &mut edge_pos, &mut out)?;
    let live: Vec<usize> = (0..a.spheres.len()).filter(|&s| a.spheres[s].alive).collect();
    let mut sid = vec![usize::MAX; a.spheres.len()];
    for (k, &s) in live.iter().enumerate() {
        sid[s] = k;
    }
    let mut m = TreeModel { flavor: a.flavor.clone(), discs: out, spheres: vec![] };
    let parents = m.parents();
    let target_of = |d: usize| -> Result<Target, PopsicleError> {
        if id[d] != usize::MAX {
            Ok(Target::Vertex(id[d]))
        } else if let Some((v, psi)) = edge_pos[d] {
            Ok(Target::Edge { disc: v, psi })
        } else {
            Err(PopsicleError::InvalidModel(format!("sphere aligned with detached disc {d}")))
        }
    };
    for &s in &live {
        let sp = &a.spheres[s];
        let target = target_of(sp.aligned)?;
        let parent = match sp.parent {
            AuxParent::Sphere(p) => SphereParent::Sphere(sid[p]),
            AuxParent::Disc(d) => {
                let x = id[d];
                let t = target.disc();
                let line = m.discs[x]
                    .children
                    .iter()
                    .position(|c| matches!(*c, DiscChild::Disc(u) if TreeModel::descends(&parents, t, u)))
                    .ok_or_else(|| bad(format!("sphere {s} aligned outside its disc")))?;
                SphereParent::Disc { disc: x, line: line + 1 }
            }
        };
        m.spheres.push(Sphere { parent, leaves: sp.leaves.clone(), target });
    }
    m.canonicalize();
    Ok(m)
}
