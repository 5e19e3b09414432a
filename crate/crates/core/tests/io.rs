mod common;

use common::*;
use gkm_core::catalog::{build_k33_family, build_op2, build_sphere};
use gkm_core::io::*;
use gkm_core::lattice::class;
use gkm_core::GkmError;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::json;

#[test]
fn catalog_round_trips() {
    let mut rng = StdRng::seed_from_u64(3);
    for (_, g, _) in catalog() {
        let text = to_json(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        let h = scramble(&g, &mut rng);
        assert_eq!(to_json(&parse_graph(&to_json(&h)).unwrap()), to_json(&h));
    }
}

#[test]
fn loop_edge_is_named() {
    let err = parse_graph(r#"{"rank":1,"half_dim":1,"vertices":["a","b"],"edges":[{"u":"a","v":"b","weight":[1]},{"u":"b","v":"b","weight":[1]}]}"#)
        .unwrap_err();
    match err {
        GkmError::Structure(p) => assert!(p.iter().any(|m| m.contains("edges[1]") && m.contains("loop")), "{p:?}"),
        e => panic!("{e}"),
    }
}

#[test]
fn rank_mismatch_names_the_weight() {
    let err = parse_graph(r#"{"rank":2,"half_dim":1,"vertices":["a","b"],"edges":[{"u":"a","v":"b","weight":[1,0,0]}]}"#)
        .unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("edges[0].weight") && msg.contains("(1, 0, 0)"), "{msg}");
}

#[test]
fn unknown_fields_and_vertices_rejected() {
    assert!(matches!(
        parse_graph(r#"{"rank":1,"half_dim":1,"vertices":["a"],"edges":[],"extra":1}"#),
        Err(GkmError::Parse { .. })
    ));
    let err = parse_graph(r#"{"rank":1,"half_dim":1,"vertices":["a"],"edges":[{"u":"a","v":"z","weight":[1]}]}"#).unwrap_err();
    assert!(err.to_string().contains("\"z\""));
}

#[test]
fn dot_export() {
    let s6 = build_sphere(&[class(&[1, 0, 0]), class(&[0, 1, 0]), class(&[0, 0, 1])]).unwrap();
    let dot = export_dot(&s6);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 3);
    assert_eq!(dot.lines().filter(|l| l.contains("label=")).count(), 3);
    assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("--")).count(), 2);

    assert_eq!(export_dot(&build_op2()).lines().filter(|l| l.contains(" -- ")).count(), 12);

    let k33 = export_dot(&build_k33_family(1).unwrap());
    assert!(k33.contains("// bipartite"));
    assert_eq!(k33.matches("rank=same").count(), 2);
    assert_eq!(export_dot(&build_k33_family(1).unwrap()), k33);
}

#[test]
fn report_round_trip() {
    let r = Report::new(Status::NotRealizable, vec!["verdict".into()], json!({"k": 3}));
    let back: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert!(r.to_json().contains("\"not_realizable\""));
    assert!(r.render_text().starts_with("status: NOT REALIZABLE"));
}

#[test]
fn weight_lists() {
    assert_eq!(parse_weights("[[1,0],[0,1]]").unwrap(), vec![unit(2, 0), unit(2, 1)]);
    assert!(matches!(parse_weights("[[1,\"a\"]]"), Err(GkmError::Parse { .. })));
}
