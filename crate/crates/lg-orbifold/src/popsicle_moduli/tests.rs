use std::collections::BTreeSet;

use super::*;

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

fn leaves(r: std::ops::RangeInclusive<usize>) -> Vec<DiscChild> {
    r.map(DiscChild::Leaf).collect()
}

/// Two discs, both sprinkles on a sphere hanging off the root.
pub(super) fn popdeg(target: Target) -> TreeModel {
    TreeModel {
        flavor: Flavor::new(2, vec![1, 2]).unwrap(),
        discs: vec![
            Disc { children: vec![DiscChild::Disc(1)], sprinkles: set(&[]) },
            Disc { children: leaves(1..=2), sprinkles: set(&[]) },
        ],
        spheres: vec![Sphere { parent: SphereParent::Disc { disc: 0, line: 1 }, leaves: set(&[1, 2]), target }],
    }
}

/// Σ₀ → Σ₁ → Σ₂ with z₁,z₂,z₃ on Σ₂, sprinkle 3 on Σ₁, sphere {1,2} on Σ₀.
pub(super) fn three_disc(target: Target) -> TreeModel {
    TreeModel {
        flavor: Flavor::new(3, vec![1, 2, 3]).unwrap(),
        discs: vec![
            Disc { children: vec![DiscChild::Disc(1)], sprinkles: set(&[]) },
            Disc { children: vec![DiscChild::Disc(2)], sprinkles: set(&[3]) },
            Disc { children: leaves(1..=3), sprinkles: set(&[]) },
        ],
        spheres: vec![Sphere { parent: SphereParent::Disc { disc: 0, line: 1 }, leaves: set(&[1, 2]), target }],
    }
}

#[test]
fn worked_codimensions() {
    assert_eq!(codimension(&popdeg(Target::Vertex(1))).unwrap(), 1);
    assert_eq!(codimension(&popdeg(Target::Edge { disc: 1, psi: 1 })).unwrap(), 2);
    let c: Vec<usize> = [Target::Vertex(1), Target::Edge { disc: 1, psi: 1 }, Target::Edge { disc: 2, psi: 1 }]
        .into_iter()
        .map(|t| codimension(&three_disc(t)).unwrap())
        .collect();
    assert_eq!(c, vec![2, 3, 3]);
    // the one-layer sphere cannot sit on Σ₂, but the two-layer one can
    let m = three_disc(Target::Vertex(2));
    assert!(validate(&m).valid);
    assert_eq!(m.layers(0).unwrap().len(), 2);
    assert_eq!(three_disc(Target::Vertex(1)).layers(0).unwrap().len(), 1);
}

#[test]
fn invalid_models_are_reported() {
    let m = popdeg(Target::Vertex(0));
    let r = validate(&m);
    assert!(!r.valid);
    assert!(r.violation.unwrap().contains("strictly after"));
    let mut m = popdeg(Target::Vertex(1));
    m.spheres[0].leaves = set(&[1]);
    m.discs[1].sprinkles = set(&[2]);
    assert!(!validate(&m).valid);
    assert!(validate(&TreeModel::open_stratum(&Flavor::new(2, vec![1, 2]).unwrap())).valid);
}

#[test]
fn alignability_examples() {
    let out = vec![set(&[1, 2]), set(&[3]), set(&[4]), set(&[5, 6, 7])];
    let layers = vec![set(&[1, 2]), set(&[3]), set(&[5, 7])];
    assert_eq!(alignable_vertex(&layers, &out), Some(vec![1, 2, 4]));
    assert_eq!(alignable_vertex(&[set(&[3]), set(&[1])], &out), None);
    assert!(alignable_edge(&[set(&[1, 2])], &set(&[1, 2, 3])));
}

#[test]
fn open_dimensions() {
    assert_eq!(dim_open(2, 2).unwrap(), 2);
    assert_eq!(dim_open(3, 0).unwrap(), 1);
    assert_eq!(dim_open(1, 1).unwrap(), 0);
    assert!(dim_open(1, 0).is_err());
}

#[test]
fn small_enumerations() {
    let f = Flavor::new(2, vec![]).unwrap();
    let all = enumerate_tree_models(&f, 1).unwrap();
    assert_eq!(all.len(), 1);
    let f = Flavor::new(3, vec![]).unwrap();
    let c1: Vec<_> = enumerate_tree_models(&f, 1).unwrap().into_iter().filter(|m| m.raw_codimension() == 1).collect();
    assert_eq!(c1.len(), 2);
}

#[test]
fn codim_one_of_two_sprinkles() {
    let f = Flavor::new(2, vec![1, 2]).unwrap();
    let s = codim1_strata(&f).unwrap();
    assert_eq!(s.cut_strata.len(), 4);
    assert_eq!(s.sphere_strata.len(), 1);
    assert_eq!(s.vanishing_strata.len(), 1);
    assert_eq!(s.breaking_strata.len(), 3);
    assert!(s.unclassified.is_empty());
    assert_eq!(s.sphere_strata[0].encoding(), popdeg(Target::Vertex(1)).encoding());
    assert_eq!(cut_stratum_bijection(&f).unwrap().len(), 7);
}

#[test]
fn gluing_worked_examples() {
    let m2 = popdeg(Target::Edge { disc: 1, psi: 1 });
    let g = glue(&m2, GlueParam::Edge { disc: 1, k: 1 }).unwrap();
    assert_eq!(g.encoding(), popdeg(Target::Vertex(1)).encoding());
    let g = glue(&m2, GlueParam::Vertex(1)).unwrap();
    assert!(g.spheres.is_empty());
    assert_eq!(g.discs[0].sprinkles, set(&[1, 2]));

    let g = glue(&three_disc(Target::Edge { disc: 1, psi: 1 }), GlueParam::Edge { disc: 1, k: 1 }).unwrap();
    assert_eq!(g.encoding(), three_disc(Target::Vertex(1)).encoding());
    let g = glue(&three_disc(Target::Edge { disc: 2, psi: 1 }), GlueParam::Edge { disc: 2, k: 1 }).unwrap();
    assert_eq!(g.encoding(), three_disc(Target::Vertex(2)).encoding());

    let open = TreeModel::open_stratum(&Flavor::new(2, vec![1, 2]).unwrap());
    assert!(matches!(glue(&open, GlueParam::Vertex(1)), Err(PopsicleError::UnknownParameter(_))));
    assert_eq!("ε_v3".parse::<GlueParam>().unwrap(), GlueParam::Vertex(3));
    assert_eq!("eps_e2_1".parse::<GlueParam>().unwrap(), GlueParam::Edge { disc: 2, k: 1 });
}

#[test]
fn auxiliary_models() {
    let m2 = popdeg(Target::Edge { disc: 1, psi: 1 });
    let aux = auxiliary_model(&m2).unwrap();
    assert_eq!(aux.discs.len(), 3);
    assert_eq!(aux.spheres.iter().filter(|s| s.semistable).count(), 2);
    assert_eq!(forget(&aux).unwrap(), {
        let mut c = m2.clone();
        c.canonicalize();
        c
    });
    let open = TreeModel::open_stratum(&Flavor::new(2, vec![1, 2]).unwrap());
    let aux = auxiliary_model(&open).unwrap();
    assert_eq!(aux.discs.len(), 1);
    assert!(aux.spheres.is_empty());
    let m = three_disc(Target::Edge { disc: 2, psi: 1 });
    let aux = auxiliary_model(&m).unwrap();
    // chain through Σ₁ to the semi-stable disc at p₂, then down to Σ₂ for each label
    assert_eq!(aux.spheres.iter().filter(|s| s.semistable).count(), 3);
}
