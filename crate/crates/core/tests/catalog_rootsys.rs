mod common;

use std::collections::BTreeSet;

use common::*;
use gkm_core::catalog::*;
use gkm_core::graph::{all_faces, validate};
use gkm_core::lattice::class;
use gkm_core::rootsys::*;
use gkm_core::{Edge, GkmError, GkmGraph, Weight};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn labels(g: &GkmGraph) -> BTreeSet<Vec<i64>> {
    (0..g.edges().len()).map(|e| g.weight(e).unwrap().rep().coords().to_vec()).collect()
}

fn set(ws: &[&[i64]]) -> BTreeSet<Vec<i64>> {
    ws.iter().map(|w| class(w).rep().coords().to_vec()).collect()
}

#[test]
fn sphere_examples() {
    let s6 = build_sphere(&[class(&[1, 0, 0]), class(&[0, 1, 0]), class(&[0, 0, 1])]).unwrap();
    assert_eq!((s6.vertex_count(), s6.edges().len()), (2, 3));
    assert_eq!(build_sphere(&[class(&[1, 0])]).unwrap().edges().len(), 1);
    assert_eq!(build_sphere(&[class(&[1, 0]), class(&[1, 1])]).unwrap().edges().len(), 2);
    assert!(matches!(build_sphere(&[class(&[1, 0]), class(&[2, 0])]), Err(GkmError::Precondition(_))));
}

#[test]
fn cp_examples() {
    let cp3 = build_cp(&[Weight::zero(3), unit(3, 0), unit(3, 1), unit(3, 2)]).unwrap();
    assert_eq!(
        labels(&cp3),
        set(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, -1, 0], &[1, 0, -1], &[0, 1, -1]])
    );
    assert_eq!(labels(&build_cp(&[Weight::zero(1), unit(1, 0)]).unwrap()), set(&[&[1]]));
    let cp2 = build_cp(&[Weight::zero(2), Weight::new([1, 0]), Weight::new([1, 2])]).unwrap();
    assert_eq!(labels(&cp2), set(&[&[1, 0], &[1, 2], &[0, 2]]));
    let err = build_cp(&[Weight::zero(2), Weight::new([1, 0]), Weight::new([2, 0])]).unwrap_err();
    assert!(err.to_string().contains("triple") || err.to_string().contains("dependent"), "{err}");
}

#[test]
fn hp_examples() {
    let hp3 = build_hp(&(0..4).map(|i| unit(4, i)).collect::<Vec<_>>()).unwrap();
    assert_eq!((hp3.vertex_count(), hp3.edges().len()), (4, 12));
    assert_eq!(labels(&build_hp(&[unit(2, 0), unit(2, 1)]).unwrap()), set(&[&[1, -1], &[1, 1]]));
    let hp2 = build_hp(&(0..3).map(|i| unit(3, i)).collect::<Vec<_>>()).unwrap();
    assert_eq!(hp2.edges().len(), 6);
    assert_eq!(
        labels(&hp2),
        set(&[&[1, -1, 0], &[1, 1, 0], &[1, 0, -1], &[1, 0, 1], &[0, 1, -1], &[0, 1, 1]])
    );
}

#[test]
fn op2_bundles_and_k33_shapes() {
    let g = build_op2();
    let bundle = |a, b| -> BTreeSet<Vec<i64>> { g.bundle(a, b).iter().map(|&e| g.weight(e).unwrap().rep().coords().to_vec()).collect() };
    assert_eq!(bundle(1, 2), set(&[&[2, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 2, 0], &[0, 0, 0, 2]]));
    assert_eq!(bundle(0, 2), set(&[&[-1, 1, 1, 1], &[1, -1, 1, 1], &[1, 1, -1, 1], &[1, 1, 1, -1]]));
    assert!(validate(&g, 3).unwrap().pass);
    assert!(all_faces(&g).unwrap().iter().all(|f| f.is_biangle() || f.is_triangle()));
    for (m, e) in [(1, 9), (2, 18), (4, 36)] {
        let k = build_k33_family(m).unwrap();
        assert_eq!((k.vertex_count(), k.edges().len()), (6, e));
    }
    assert!(build_k33_family(3).is_err());
}

#[test]
fn catalog_passes_validation_and_face_purity() {
    for (name, g, _) in catalog() {
        assert!(validate(&g, 2).unwrap().pass, "{name}");
        assert!(validate(&g, 3).unwrap().pass, "{name}");
        let faces = all_faces(&g).unwrap();
        if name.starts_with("CP") {
            assert!(faces.iter().all(|f| f.is_triangle()), "{name}");
        }
        if name.starts_with('S') {
            assert!(faces.iter().all(|f| f.is_biangle()), "{name}");
        }
    }
}

#[test]
fn cp_normalization() {
    let alphas = [Weight::zero(3), Weight::new([1, 2, 0]), Weight::new([0, 1, 3]), Weight::new([2, 0, 1])];
    let g = build_cp(&alphas).unwrap();
    let n = normalize_cp(&g).unwrap();
    assert!(n.verify(&g));
    for i in 1..4 {
        assert_eq!(class(n.base_weights[i].coords()), class((&alphas[i] - &alphas[0]).coords()));
    }
    // a K4 whose v1v2 label is not ±γ01 ± γ02
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let e12 = edges.iter().position(|e| e.endpoints() == (1, 2)).unwrap();
    edges[e12].weight = Some(class(&[5, 1, 1]));
    let bad = GkmGraph::new(3, 3, true, g.vertices().to_vec(), edges, vec![]).unwrap();
    assert!(matches!(normalize_cp(&bad), Err(GkmError::NotCpNormalizable(_))));
}

#[test]
fn hp_normalization() {
    let alphas = [Weight::new([1, 0, 0]), Weight::new([0, 1, 0]), Weight::new([0, 0, 1])];
    let g = build_hp(&alphas).unwrap();
    let n = normalize_hp(&g).unwrap();
    assert!(n.verify(&g));
    let hp1 = build_hp(&alphas[..2].iter().map(|w| Weight::new(&w.0[..2])).collect::<Vec<_>>()).unwrap();
    assert!(normalize_hp(&hp1).unwrap().verify(&hp1));
    let mut rng = StdRng::seed_from_u64(5);
    let bad = generic_simplex(3, 2, 4, &mut rng);
    assert!(matches!(normalize_hp(&bad), Err(GkmError::NotHpNormalizable(_))));
}

#[test]
fn op2_normalization() {
    let g = build_op2();
    let base = normalize_op2(&g).unwrap();
    assert!(base.verify(&g));
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let h = scramble(&g, &mut rng);
        assert!(normalize_op2(&h).unwrap().verify(&h));
    }
    let mut edges = g.edges().to_vec();
    edges[0].weight = Some(class(&[3, 1, 4, 1]));
    let bad = GkmGraph::new(4, 8, true, g.vertices().to_vec(), edges, vec![]).unwrap().with_weight_scale(2);
    assert!(matches!(normalize_op2(&bad), Err(GkmError::NotOp2Normalizable(_))));
}

#[test]
fn reflections() {
    let e1 = unit(4, 0);
    assert_eq!(reflection(&e1).unwrap().apply_integral(&e1).unwrap(), -e1.clone());
    assert_eq!(reflection(&Weight::new([1, -1, 0, 0])).unwrap().apply_integral(&e1).unwrap(), unit(4, 1));
    // doubled coordinates: the image of 2e1 under the half-sum reflection
    let half = reflection(&Weight::new([1, 1, 1, 1])).unwrap();
    assert_eq!(half.apply_integral(&Weight::new([2, 0, 0, 0])).unwrap(), Weight::new([1, -1, -1, -1]));
}

fn integral_roots(rs: &RootSystem) -> Vec<Vec<i64>> {
    rs.roots().iter().map(|r| r.coords().to_vec()).collect()
}

#[test]
fn weyl_orders_match_permutation_oracle() {
    for (name, order) in [("A2", 6), ("B2", 8), ("C3", 48), ("D4", 192), ("F4", 1152), ("A1xA1", 4), ("B3", 48)] {
        let rs = RootSystem::parse(name).unwrap();
        let w = weyl_group(&rs, DEFAULT_WEYL_BOUND).unwrap();
        assert_eq!(w.len(), order, "{name}");
        assert_eq!(weyl_order_by_permutations(&integral_roots(&rs)), order, "{name}");
    }
    let c3 = RootSystem::parse("C3").unwrap();
    let sub = RootSystem::parse_subsystem("C1xC1xC1", &c3).unwrap();
    assert_eq!(weyl_group(&sub, DEFAULT_WEYL_BOUND).unwrap().len(), 8);
    assert!(matches!(weyl_group(&RootSystem::parse("F4").unwrap(), 100), Err(GkmError::WeylBoundExceeded(100))));
}

#[test]
fn weyl_group_is_closed() {
    let rs = RootSystem::parse("B3").unwrap();
    let w = weyl_group(&rs, DEFAULT_WEYL_BOUND).unwrap();
    for (i, a) in w.iter().enumerate().step_by(5) {
        let b = &w[(i * 7 + 3) % w.len()];
        assert!(w.contains(&a.compose(b)));
        assert!(w.contains(&a.inverse()));
    }
}

#[test]
fn homogeneous_graphs() {
    let build = |g: &str, k: &str| homogeneous_gkm(&RootSystemPair::parse(g, k).unwrap(), DEFAULT_WEYL_BOUND).unwrap();
    let op2 = build("F4", "B4");
    assert_eq!(op2.vertex_count(), 3);
    assert!(op2.bundles().values().all(|b| b.len() == 4));
    assert!(normalize_op2(&op2).unwrap().verify(&op2));
    for (g, k, m) in [("A2", "T", 3), ("C3", "C1xC1xC1", 6), ("F4", "D4", 12), ("F4", "B4", 8)] {
        let h = build(g, k);
        let pair = RootSystemPair::parse(g, k).unwrap();
        assert_eq!(pair.complement().len(), m);
        assert!((0..h.vertex_count()).all(|v| h.degree(v) == m), "{g}/{k}");
    }
    assert!(RootSystemPair::parse("C3", "B3").is_err());
    assert!(RootSystem::parse("E8").is_err());
}
