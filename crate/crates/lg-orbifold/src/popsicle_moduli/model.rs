use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::PopsicleError;

/// (n, F, φ) with F = {1..|F|} and φ non-decreasing into {1..n}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flavor {
    pub n: usize,
    pub phi: Vec<usize>,
}

impl Flavor {
    pub fn new(n: usize, phi: Vec<usize>) -> Result<Self, PopsicleError> {
        if n == 0 {
            return Err(PopsicleError::InvalidFlavor("arity must be positive".into()));
        }
        if phi.iter().any(|&x| x == 0 || x > n) {
            return Err(PopsicleError::InvalidFlavor(format!("φ values must lie in 1..{n}")));
        }
        if phi.windows(2).any(|w| w[0] > w[1]) {
            return Err(PopsicleError::InvalidFlavor("φ must be non-decreasing".into()));
        }
        Ok(Flavor { n, phi })
    }

    /// Parses "1,2" as φ = (1,2); the empty string is F = ∅.
    pub fn parse(n: usize, s: &str) -> Result<Self, PopsicleError> {
        let phi = s
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<usize>().map_err(|_| PopsicleError::InvalidFlavor(format!("bad entry {x:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Flavor::new(n, phi)
    }

    pub fn labels(&self) -> usize {
        self.phi.len()
    }

    /// φ(f) for a 1-based label f.
    pub fn color(&self, f: usize) -> usize {
        self.phi[f - 1]
    }

    pub fn is_injective(&self) -> bool {
        self.phi.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscChild {
    Leaf(usize),
    Disc(usize),
}

/// Disc component. Discs are stored in planar preorder, the root first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Disc {
    pub children: Vec<DiscChild>,
    /// F_v, the sprinkles on this disc.
    pub sprinkles: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereParent {
    /// Root of a sphere tree on popsicle line `line` (1-based outgoing edge) of a disc.
    Disc {
        disc: usize,
        line: usize,
    },
    Sphere(usize),
}

/// Φ(w): a disc vertex, or the internal edge into `disc` with Ψ_e(w) = psi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Vertex(usize),
    Edge { disc: usize, psi: usize },
}

impl Target {
    pub fn disc(&self) -> usize {
        match *self {
            Target::Vertex(d) | Target::Edge { disc: d, .. } => d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sphere {
    pub parent: SphereParent,
    /// Labels of F carried directly by this sphere.
    pub leaves: BTreeSet<usize>,
    pub target: Target,
}

/// Combinatorial type of a stable popsicle with alignment data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeModel {
    pub flavor: Flavor,
    pub discs: Vec<Disc>,
    pub spheres: Vec<Sphere>,
}

/// Item hanging off a sphere: a label or a child sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereChild {
    Label(usize),
    Sphere(usize),
}

/// Poset element: the edge into a disc precedes the disc itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Element {
    Edge(usize),
    Vertex(usize),
}

impl TreeModel {
    /// Single disc carrying every input and every sprinkle.
    pub fn open_stratum(flavor: &Flavor) -> Self {
        TreeModel {
            flavor: flavor.clone(),
            discs: vec![Disc {
                children: (1..=flavor.n).map(DiscChild::Leaf).collect(),
                sprinkles: (1..=flavor.labels()).collect(),
            }],
            spheres: vec![],
        }
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.discs.len()];
        for (v, d) in self.discs.iter().enumerate() {
            for c in &d.children {
                if let DiscChild::Disc(u) = *c {
                    if u < p.len() {
                        p[u] = Some(v);
                    }
                }
            }
        }
        p
    }

    /// Input colors above each disc, i.e. C(e_{v,0}).
    pub fn disc_colors(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new(); self.discs.len()];
        for v in (0..self.discs.len()).rev() {
            let mut s = BTreeSet::new();
            for c in &self.discs[v].children {
                match *c {
                    DiscChild::Leaf(k) => {
                        s.insert(k);
                    }
                    DiscChild::Disc(u) if u > v && u < out.len() => s.extend(out[u].iter().copied()),
                    DiscChild::Disc(_) => {}
                }
            }
            out[v] = s;
        }
        out
    }

    /// C(e_{v,i}) for i ≥ 1; i = 0 gives the incoming edge.
    pub fn line_colors(&self, v: usize, i: usize) -> BTreeSet<usize> {
        let dc = self.disc_colors();
        self.line_colors_with(&dc, v, i)
    }

    pub(crate) fn line_colors_with(&self, dc: &[BTreeSet<usize>], v: usize, i: usize) -> BTreeSet<usize> {
        if i == 0 {
            return dc[v].clone();
        }
        match self.discs[v].children.get(i - 1) {
            Some(DiscChild::Leaf(k)) => BTreeSet::from([*k]),
            Some(DiscChild::Disc(u)) => dc[*u].clone(),
            None => BTreeSet::new(),
        }
    }

    pub fn sphere_children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.spheres.len()];
        for (s, sp) in self.spheres.iter().enumerate() {
            if let SphereParent::Sphere(p) = sp.parent {
                if p < out.len() {
                    out[p].push(s);
                }
            }
        }
        out
    }

    /// Colors φ(f) of every label in the subtree of each sphere.
    pub fn sphere_colors(&self) -> Vec<BTreeSet<usize>> {
        let kids = self.sphere_children();
        let mut memo: Vec<Option<BTreeSet<usize>>> = vec![None; self.spheres.len()];
        fn go(
            m: &TreeModel,
            kids: &[Vec<usize>],
            memo: &mut [Option<BTreeSet<usize>>],
            s: usize,
            depth: usize,
        ) -> BTreeSet<usize> {
            if let Some(c) = &memo[s] {
                return c.clone();
            }
            let mut c: BTreeSet<usize> = m.spheres[s]
                .leaves
                .iter()
                .filter(|&&f| f >= 1 && f <= m.flavor.labels())
                .map(|&f| m.flavor.color(f))
                .collect();
            if depth <= m.spheres.len() {
                for &k in &kids[s] {
                    c.extend(go(m, kids, memo, k, depth + 1));
                }
            }
            memo[s] = Some(c.clone());
            c
        }
        (0..self.spheres.len()).map(|s| go(self, &kids, &mut memo, s, 0)).collect()
    }

    pub fn m_e(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for s in &self.spheres {
            if let Target::Edge { disc, psi } = s.target {
                let e = m.entry(disc).or_insert(0);
                *e = (*e).max(psi);
            }
        }
        m
    }

    /// |Vertex(T)| − 1 + Σ_e m_e, without validation.
    pub fn raw_codimension(&self) -> usize {
        self.discs.len() - 1 + self.m_e().values().sum::<usize>()
    }

    /// Root spheres attached to a disc.
    pub fn attached_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.spheres
            .iter()
            .enumerate()
            .filter(move |(_, s)| matches!(s.parent, SphereParent::Disc { disc, .. } if disc == v))
            .map(|(i, _)| i)
    }

    pub fn element_of(t: &Target) -> Element {
        match *t {
            Target::Vertex(v) => Element::Vertex(v),
            Target::Edge { disc, .. } => Element::Edge(disc),
        }
    }

    /// Whether `a` is a descendant of `b` or equal to it.
    pub(crate) fn descends(parents: &[Option<usize>], a: usize, b: usize) -> bool {
        let mut cur = Some(a);
        let mut steps = 0;
        while let Some(x) = cur {
            if x == b {
                return true;
            }
            cur = parents[x];
            steps += 1;
            if steps > parents.len() {
                return false;
            }
        }
        false
    }

    /// x ≤ y in the partial order on vertices and edges of T.
    pub fn le(parents: &[Option<usize>], x: Element, y: Element) -> bool {
        let (ux, ex) = match x {
            Element::Edge(u) => (u, true),
            Element::Vertex(u) => (u, false),
        };
        let (uy, ey) = match y {
            Element::Edge(u) => (u, true),
            Element::Vertex(u) => (u, false),
        };
        if ux == uy {
            return ex || !ey;
        }
        Self::descends(parents, uy, ux)
    }

    pub fn lt(parents: &[Option<usize>], x: Element, y: Element) -> bool {
        x != y && Self::le(parents, x, y)
    }

    /// Layers E_{w,1} < … of a sphere, read off from its target: grouped by
    /// the outgoing edge of Φ(w) containing their colors when vertex-aligned,
    /// a single layer when edge-aligned. None if not alignable.
    pub fn layers(&self, s: usize) -> Option<Vec<(usize, Vec<SphereChild>)>> {
        let dc = self.disc_colors();
        let sc = self.sphere_colors();
        let kids = self.sphere_children();
        self.layers_with(&dc, &sc, &kids, s)
    }

    pub(crate) fn layers_with(
        &self,
        dc: &[BTreeSet<usize>],
        sc: &[BTreeSet<usize>],
        kids: &[Vec<usize>],
        s: usize,
    ) -> Option<Vec<(usize, Vec<SphereChild>)>> {
        let sp = &self.spheres[s];
        let mut items: Vec<(SphereChild, BTreeSet<usize>)> =
            sp.leaves.iter().map(|&f| (SphereChild::Label(f), BTreeSet::from([self.flavor.color(f)]))).collect();
        items.extend(kids[s].iter().map(|&c| (SphereChild::Sphere(c), sc[c].clone())));
        match sp.target {
            Target::Edge { disc, .. } => {
                if disc == 0 || disc >= self.discs.len() || !sc[s].is_subset(&dc[disc]) {
                    return None;
                }
                Some(vec![(0, items.into_iter().map(|x| x.0).collect())])
            }
            Target::Vertex(v) => {
                if v >= self.discs.len() {
                    return None;
                }
                let mut groups: BTreeMap<usize, Vec<SphereChild>> = BTreeMap::new();
                for (it, cols) in items {
                    let i = (1..=self.discs[v].children.len())
                        .find(|&i| !cols.is_empty() && cols.is_subset(&self.line_colors_with(dc, v, i)))?;
                    groups.entry(i).or_default().push(it);
                }
                Some(groups.into_iter().collect())
            }
        }
    }

    /// Puts spheres into canonical order: sphere trees sorted by attachment
    /// and recursive encoding, children following their parent in preorder.
    pub fn canonicalize(&mut self) {
        let kids = self.sphere_children();
        fn enc(m: &TreeModel, kids: &[Vec<usize>], s: usize) -> String {
            let mut ch: Vec<String> = kids[s].iter().map(|&c| enc(m, kids, c)).collect();
            ch.sort();
            let sp = &m.spheres[s];
            format!("{:?}{:?}[{}]", sp.target, sp.leaves, ch.join(","))
        }
        let codes: Vec<String> = (0..self.spheres.len()).map(|s| enc(self, &kids, s)).collect();
        let mut roots: Vec<usize> =
            (0..self.spheres.len()).filter(|&s| matches!(self.spheres[s].parent, SphereParent::Disc { .. })).collect();
        roots.sort_by(|&a, &b| {
            let key = |s: usize| match self.spheres[s].parent {
                SphereParent::Disc { disc, line } => (disc, line),
                SphereParent::Sphere(_) => unreachable!(),
            };
            key(a).cmp(&key(b)).then_with(|| codes[a].cmp(&codes[b]))
        });
        let mut order = Vec::with_capacity(self.spheres.len());
        fn walk(s: usize, kids: &[Vec<usize>], codes: &[String], order: &mut Vec<usize>) {
            order.push(s);
            let mut ch = kids[s].clone();
            ch.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
            for c in ch {
                walk(c, kids, codes, order);
            }
        }
        for r in roots {
            walk(r, &kids, &codes, &mut order);
        }
        if order.len() != self.spheres.len() {
            return; // cyclic parent pointers: leave for validation to reject
        }
        let mut newid = vec![0; self.spheres.len()];
        for (i, &s) in order.iter().enumerate() {
            newid[s] = i;
        }
        let old = std::mem::take(&mut self.spheres);
        self.spheres = order
            .iter()
            .map(|&s| {
                let mut sp = old[s].clone();
                if let SphereParent::Sphere(p) = sp.parent {
                    sp.parent = SphereParent::Sphere(newid[p]);
                }
                sp
            })
            .collect();
    }

    /// Canonical encoding; equal for isomorphic models once canonicalized.
    pub fn encoding(&self) -> String {
        let mut m = self.clone();
        m.canonicalize();
        serde_json::to_string(&(&m.flavor, &m.discs, &m.spheres)).expect("serializable")
    }
}
