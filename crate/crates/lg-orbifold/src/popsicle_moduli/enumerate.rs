use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{Disc, DiscChild, Flavor, Sphere, SphereParent, Target, TreeModel};
use super::validate::{check, dim_open};
use super::PopsicleError;

#[derive(Clone, Debug)]
enum Shape {
    Leaf(usize),
    Node(Vec<Shape>),
}

impl Shape {
    fn nodes(&self) -> usize {
        match self {
            Shape::Leaf(_) => 0,
            Shape::Node(c) => 1 + c.iter().map(Shape::nodes).sum::<usize>(),
        }
    }
}

// Planar node shapes over leaves a..=b with at most `budget` nodes.
fn node_shapes(a: usize, b: usize, budget: usize) -> Vec<Shape> {
    if budget == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    // compositions of a..=b into consecutive blocks
    let len = b - a + 1;
    for mask in 0u32..(1 << (len - 1)) {
        let mut blocks = Vec::new();
        let mut start = a;
        for k in 0..len - 1 {
            if mask & (1 << k) != 0 {
                blocks.push((start, a + k));
                start = a + k + 1;
            }
        }
        blocks.push((start, b));
        let mut partial: Vec<(Vec<Shape>, usize)> = vec![(vec![], 1)];
        for &(x, y) in &blocks {
            let mut next = Vec::new();
            for (kids, used) in &partial {
                if x == y {
                    let mut k = kids.clone();
                    k.push(Shape::Leaf(x));
                    next.push((k, *used));
                }
                for s in node_shapes(x, y, budget - used) {
                    let n = s.nodes();
                    let mut k = kids.clone();
                    k.push(s);
                    next.push((k, used + n));
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(|(k, _)| Shape::Node(k)));
    }
    out
}

fn flatten(s: &Shape) -> Vec<Disc> {
    fn go(s: &Shape, out: &mut Vec<Disc>) -> usize {
        let Shape::Node(kids) = s else { unreachable!() };
        let id = out.len();
        out.push(Disc { children: vec![], sprinkles: BTreeSet::new() });
        let mut ch = Vec::new();
        for k in kids {
            match k {
                Shape::Leaf(x) => ch.push(DiscChild::Leaf(*x)),
                Shape::Node(_) => ch.push(DiscChild::Disc(go(k, out))),
            }
        }
        out[id].children = ch;
        id
    }
    let mut out = Vec::new();
    go(s, &mut out);
    out
}

/// Set partitions of `items`.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = Vec::new();
    for mut p in set_partitions(&items[1..]) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        p.insert(0, vec![first]);
        out.push(p);
    }
    out
}

#[derive(Clone, Debug)]
struct SphereShape {
    leaves: BTreeSet<usize>,
    children: Vec<SphereShape>,
}

fn sphere_shapes(labels: &[usize]) -> Vec<SphereShape> {
    let mut out = Vec::new();
    for part in set_partitions(labels) {
        if part.len() < 2 {
            continue;
        }
        let mut partial = vec![SphereShape { leaves: BTreeSet::new(), children: vec![] }];
        for block in &part {
            let mut next = Vec::new();
            for s in &partial {
                if block.len() == 1 {
                    let mut t = s.clone();
                    t.leaves.insert(block[0]);
                    next.push(t);
                } else {
                    for c in sphere_shapes(block) {
                        let mut t = s.clone();
                        t.children.push(c);
                        next.push(t);
                    }
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

fn sphere_forests(labels: &[usize]) -> Vec<Vec<SphereShape>> {
    let mut out = Vec::new();
    for part in set_partitions(labels) {
        if part.iter().any(|b| b.len() < 2) {
            continue;
        }
        let mut partial: Vec<Vec<SphereShape>> = vec![vec![]];
        for block in &part {
            let shapes = sphere_shapes(block);
            partial = partial
                .into_iter()
                .flat_map(|f| {
                    shapes.iter().map(move |s| {
                        let mut g = f.clone();
                        g.push(s.clone());
                        g
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![vec![]];
    for l in lists {
        out = out
            .into_iter()
            .flat_map(|p| {
                l.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// All valid stable tree models of flavor φ with codimension ≤ max_codim,
/// up to isomorphism, sorted by (codimension, canonical encoding).
pub fn enumerate_tree_models(flavor: &Flavor, max_codim: usize) -> Result<Vec<TreeModel>, PopsicleError> {
    dim_open(flavor.n, flavor.labels())?;
    let skeletons: Vec<Vec<Disc>> = node_shapes(1, flavor.n, max_codim + 1).iter().map(flatten).collect();
    let found: Vec<BTreeMap<String, TreeModel>> =
        skeletons.par_iter().map(|sk| models_on_skeleton(flavor, sk, max_codim)).collect();
    let mut all = BTreeMap::new();
    for f in found {
        all.extend(f);
    }
    let mut out: Vec<TreeModel> = all.into_values().collect();
    out.sort_by_cached_key(|m| (m.raw_codimension(), m.encoding()));
    Ok(out)
}

fn models_on_skeleton(flavor: &Flavor, discs: &[Disc], max_codim: usize) -> BTreeMap<String, TreeModel> {
    let mut out = BTreeMap::new();
    let nd = discs.len();
    let base = TreeModel { flavor: flavor.clone(), discs: discs.to_vec(), spheres: vec![] };
    let dc = base.disc_colors();
    let parents = base.parents();
    let psi_budget = max_codim - (nd - 1);
    // None = goes into a sphere
    let placements: Vec<Vec<Option<usize>>> = (1..=flavor.labels())
        .map(|f| {
            let mut v: Vec<Option<usize>> = (0..nd).filter(|&d| dc[d].contains(&flavor.color(f))).map(Some).collect();
            v.push(None);
            v
        })
        .collect();
    for choice in product(&placements) {
        let sphere_labels: Vec<usize> = (1..=flavor.labels()).filter(|&f| choice[f - 1].is_none()).collect();
        let mut with_sprinkles = base.clone();
        for (f, c) in choice.iter().enumerate() {
            if let Some(d) = c {
                with_sprinkles.discs[*d].sprinkles.insert(f + 1);
            }
        }
        for forest in sphere_forests(&sphere_labels) {
            // flatten sphere trees; record per-sphere colors and tree index
            let mut flat: Vec<(Option<usize>, BTreeSet<usize>, usize)> = Vec::new();
            fn push(
                s: &SphereShape,
                parent: Option<usize>,
                tree: usize,
                flat: &mut Vec<(Option<usize>, BTreeSet<usize>, usize)>,
            ) {
                let id = flat.len();
                flat.push((parent, s.leaves.clone(), tree));
                for c in &s.children {
                    push(c, Some(id), tree, flat);
                }
            }
            for (t, s) in forest.iter().enumerate() {
                push(s, None, t, &mut flat);
            }
            let mut skel = with_sprinkles.clone();
            skel.spheres = flat
                .iter()
                .map(|(p, leaves, _)| Sphere {
                    parent: match p {
                        Some(p) => SphereParent::Sphere(*p),
                        None => SphereParent::Disc { disc: 0, line: 1 },
                    },
                    leaves: leaves.clone(),
                    target: Target::Vertex(0),
                })
                .collect();
            let sc = skel.sphere_colors();
            let roots: Vec<usize> = (0..flat.len()).filter(|&s| flat[s].0.is_none()).collect();
            // attachments (v, line) through a disc child containing the colors
            let attach: Vec<Vec<(usize, usize, usize)>> = roots
                .iter()
                .map(|&r| {
                    let mut a = Vec::new();
                    for v in 0..nd {
                        for (i, c) in discs[v].children.iter().enumerate() {
                            if let DiscChild::Disc(u) = *c {
                                if sc[r].is_subset(&dc[u]) {
                                    a.push((v, i + 1, u));
                                }
                            }
                        }
                    }
                    a
                })
                .collect();
            for att in product(&attach) {
                let mut m = skel.clone();
                let mut via = vec![0usize; flat.len()];
                for (k, &r) in roots.iter().enumerate() {
                    let (v, line, u) = att[k];
                    m.spheres[r].parent = SphereParent::Disc { disc: v, line };
                    via[r] = u;
                }
                for s in 0..flat.len() {
                    via[s] = via[roots[flat[s].2]];
                }
                let kids = m.sphere_children();
                let targets: Vec<Vec<Target>> = (0..flat.len())
                    .map(|s| {
                        let mut t = Vec::new();
                        for u in 0..nd {
                            if !TreeModel::descends(&parents, u, via[s]) {
                                continue;
                            }
                            let mut probe = m.clone();
                            probe.spheres[s].target = Target::Vertex(u);
                            if probe.layers_with(&dc, &sc, &kids, s).is_some() {
                                t.push(Target::Vertex(u));
                            }
                            if u != 0 && sc[s].is_subset(&dc[u]) {
                                for psi in 1..=psi_budget {
                                    t.push(Target::Edge { disc: u, psi });
                                }
                            }
                        }
                        t
                    })
                    .collect();
                for tg in product(&targets) {
                    let mut cand = m.clone();
                    for (s, t) in tg.into_iter().enumerate() {
                        cand.spheres[s].target = t;
                    }
                    if cand.raw_codimension() > max_codim || check(&cand, true).is_err() {
                        continue;
                    }
                    let key = cand.encoding();
                    out.entry(key).or_insert_with(|| {
                        cand.canonicalize();
                        cand
                    });
                }
            }
        }
    }
    out
}

/// Position of φ(f) among the outgoing edges of disc v, for each sprinkle on v.
pub fn induced_positions(m: &TreeModel, v: usize) -> Vec<usize> {
    let dc = m.disc_colors();
    m.discs[v]
        .sprinkles
        .iter()
        .map(|&f| {
            let c = m.flavor.color(f);
            (1..=m.discs[v].children.len()).find(|&i| m.line_colors_with(&dc, v, i).contains(&c)).expect("valid model")
        })
        .collect()
}

fn induced_injective(m: &TreeModel) -> bool {
    (0..m.discs.len()).all(|v| {
        let p = induced_positions(m, v);
        p.windows(2).all(|w| w[0] != w[1])
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Codim1Strata {
    /// Two stable discs, no spheres, injective induced flavors.
    pub cut_strata: Vec<TreeModel>,
    /// Two discs, spheres attached to the root disc and aligned to the other.
    pub sphere_strata: Vec<TreeModel>,
    /// A strip (one input, nothing else) next to a disc carrying the rest:
    /// the m₁ terms of the quadratic relation. Unstable, so built directly.
    pub breaking_strata: Vec<TreeModel>,
    /// Two discs with a non-injective induced flavor; these operations vanish.
    pub vanishing_strata: Vec<TreeModel>,
    /// Codimension-one models fitting none of the classes above (expected empty).
    pub unclassified: Vec<TreeModel>,
}

pub fn codim1_strata(flavor: &Flavor) -> Result<Codim1Strata, PopsicleError> {
    let all = enumerate_tree_models(flavor, 1)?;
    let mut r = Codim1Strata {
        cut_strata: vec![],
        sphere_strata: vec![],
        breaking_strata: breaking_strata(flavor),
        vanishing_strata: vec![],
        unclassified: vec![],
    };
    for m in all.into_iter().filter(|m| m.raw_codimension() == 1) {
        let two = m.discs.len() == 2 && m.m_e().is_empty();
        if two && m.spheres.is_empty() {
            if induced_injective(&m) {
                r.cut_strata.push(m);
            } else {
                r.vanishing_strata.push(m);
            }
        } else if two
            && m.spheres.iter().all(|s| {
                s.target == Target::Vertex(1)
                    && matches!(s.parent, SphereParent::Disc { disc: 0, .. } | SphereParent::Sphere(_))
            })
        {
            r.sphere_strata.push(m);
        } else {
            r.unclassified.push(m);
        }
    }
    Ok(r)
}

/// Two-disc configurations in which one disc is a bare strip.
fn breaking_strata(flavor: &Flavor) -> Vec<TreeModel> {
    let n = flavor.n;
    let all: BTreeSet<usize> = (1..=flavor.labels()).collect();
    let mut out = Vec::new();
    // strip at the output
    out.push(TreeModel {
        flavor: flavor.clone(),
        discs: vec![
            Disc { children: vec![DiscChild::Disc(1)], sprinkles: BTreeSet::new() },
            Disc { children: (1..=n).map(DiscChild::Leaf).collect(), sprinkles: all.clone() },
        ],
        spheres: vec![],
    });
    // strip at input k
    for k in 1..=n {
        let children = (1..=n).map(|j| if j == k { DiscChild::Disc(1) } else { DiscChild::Leaf(j) }).collect();
        let m = TreeModel {
            flavor: flavor.clone(),
            discs: vec![
                Disc { children, sprinkles: all.clone() },
                Disc { children: vec![DiscChild::Leaf(k)], sprinkles: BTreeSet::new() },
            ],
            spheres: vec![],
        };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out.retain(|m| check(m, false).is_ok());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_count_bell_numbers() {
        assert_eq!(set_partitions(&[1, 2, 3]).len(), 5);
        assert_eq!(set_partitions(&[1, 2, 3, 4]).len(), 15);
    }

    #[test]
    fn planar_trees_with_few_nodes() {
        // binary-and-higher planar trees on 3 leaves with ≤ 2 nodes, no unary nodes
        let shapes = node_shapes(1, 3, 2);
        let no_unary = shapes
            .iter()
            .filter(|s| {
                fn ok(s: &Shape) -> bool {
                    match s {
                        Shape::Leaf(_) => true,
                        Shape::Node(c) => c.len() >= 2 && c.iter().all(ok),
                    }
                }
                ok(s)
            })
            .count();
        assert_eq!(no_unary, 3);
    }
}
