mod common;

use common::*;
use gkm_core::catalog::{build_cp, build_hp, build_op2, build_sphere};
use gkm_core::cohomology::*;
use gkm_core::lattice::class;
use gkm_core::poly::{MonomialBasis, Polynomial};
use gkm_core::{Edge, GkmError, GkmGraph, Rational, RationalPolynomial, StarEdge, Weight};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn sphere_dims_and_betti() {
    let s2 = build_sphere(&[class(&[1, 0])]).unwrap();
    assert_eq!(equivariant_dims(&s2, 2).unwrap().dims, vec![1, 3, 5]);
    assert_eq!((0..=2).map(|d| naive_dim(&s2, d)).collect::<Vec<_>>(), vec![1, 3, 5]);
    assert_eq!(betti_numbers(&s2, 1).unwrap().dims, vec![1, 1]);
}

#[test]
fn dims_match_naive_oracle() {
    let mut graphs: Vec<GkmGraph> = catalog()
        .into_iter()
        .filter(|(n, _, _)| !["OP^2", "HP^3", "S^8"].contains(&n.as_str()))
        .map(|(_, g, _)| g)
        .collect();
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..3 {
        graphs.push(generic_simplex(3, 1, 3, &mut rng));
        graphs.push(generic_simplex(3, 2, 3, &mut rng));
    }
    for g in graphs {
        let top = g.half_dim().min(4);
        let ours = equivariant_dims(&g, top).unwrap().dims;
        let oracle: Vec<usize> = (0..=top as u32).map(|d| naive_dim(&g, d)).collect();
        assert_eq!(ours, oracle);
    }
}

#[test]
fn connected_degree_zero() {
    for (_, g, _) in catalog() {
        assert_eq!(equivariant_dims(&g, 0).unwrap().dims, vec![1]);
    }
}

#[test]
fn betti_values() {
    let cp3 = build_cp(&[Weight::zero(3), unit(3, 0), unit(3, 1), unit(3, 2)]).unwrap();
    assert_eq!(betti_numbers(&cp3, 3).unwrap().dims, vec![1, 1, 1, 1]);
    let hp2 = build_hp(&[unit(3, 0), unit(3, 1), unit(3, 2)]).unwrap();
    assert_eq!(betti_numbers(&hp2, 4).unwrap().dims, vec![1, 0, 1, 0, 1]);
    assert_eq!(betti_numbers(&build_op2(), 8).unwrap().nonzero(), vec![(0, 1), (8, 1), (16, 1)]);
}

#[test]
fn non_formal_input_is_rejected() {
    let names: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
    let edges = vec![
        Edge::new(0, 1, class(&[1, 0]), 0),
        Edge::new(1, 2, class(&[0, 1]), 0),
        Edge::new(2, 3, class(&[1, 0]), 0),
        Edge::new(3, 0, class(&[0, 1]), 0),
    ];
    let square = GkmGraph::new(2, 2, true, names, edges, vec![]).unwrap();
    assert_eq!(betti_numbers(&square, 2).unwrap().dims, vec![1, 2, 1]);
    // a triangle on three independent weights: too much cohomology in degree 4
    let names = (0..3).map(|i| format!("v{i}")).collect();
    let edges = vec![
        Edge::new(0, 1, class(&[1, 0, 0]), 0),
        Edge::new(1, 2, class(&[0, 1, 0]), 0),
        Edge::new(2, 0, class(&[0, 0, 1]), 0),
    ];
    let triangle = GkmGraph::new(3, 2, true, names, edges, vec![]).unwrap();
    assert_eq!(equivariant_dims(&triangle, 2).unwrap().dims, vec![1, 3, 9]);
    assert!(matches!(betti_numbers(&triangle, 2), Err(GkmError::NotFormal(_))));
}

#[test]
fn star_edges_impose_nothing() {
    let rp = GkmGraph::new(2, 2, false, vec!["p".into()], vec![], vec![
        StarEdge { vertex: 0, weight: Some(class(&[1, 0])) },
        StarEdge { vertex: 0, weight: Some(class(&[0, 1])) },
    ])
    .unwrap();
    assert_eq!(equivariant_dims(&rp, 2).unwrap().dims, vec![1, 2, 3]);
    assert!(matches!(integer_precondition(&rp), Err(GkmError::NonOrientable)));
}

#[test]
fn dims_monotone_under_adding_edges() {
    let mut rng = StdRng::seed_from_u64(8);
    let names: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
    let pairs = [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)];
    let mut edges = Vec::new();
    let mut previous: Option<Vec<usize>> = None;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let w: Vec<i64> = loop {
            let w: Vec<i64> = (0..3).map(|_| rng.gen_range(-4..=4)).collect();
            if w.iter().any(|&x| x != 0) {
                break w;
            }
        };
        edges.push(Edge::new(a, b, class(&w), i as u32));
        let g = GkmGraph::new(3, 3, true, names.clone(), edges.clone(), vec![]).unwrap();
        let dims: Vec<usize> = (0..=3).map(|d| naive_dim(&g, d)).collect();
        if let Some(p) = &previous {
            assert!(dims.iter().zip(p).all(|(x, y)| x <= y));
        }
        previous = Some(dims);
    }
}

#[test]
fn dims_invariant_under_relabeling() {
    let mut rng = StdRng::seed_from_u64(9);
    for (name, g, _) in catalog() {
        if name == "OP^2" {
            continue;
        }
        let base = equivariant_dims(&g, 3).unwrap();
        for _ in 0..3 {
            assert_eq!(equivariant_dims(&scramble(&g, &mut rng), 3).unwrap(), base, "{name}");
        }
    }
}

fn lin(w: &[i64]) -> RationalPolynomial {
    Polynomial::linear(w)
}

#[test]
fn equivariant_pontryagin_examples() {
    let s2 = build_sphere(&[class(&[1, 0])]).unwrap();
    let p = equivariant_pontryagin(&s2, 1).unwrap();
    let a = lin(&[1, 0]);
    let expected = Polynomial::one(2).add(&a.mul(&a));
    assert!(p.components.iter().all(|c| *c == expected));

    let hp1 = build_hp(&[unit(2, 0), unit(2, 1)]).unwrap();
    let p = equivariant_pontryagin(&hp1, 2).unwrap();
    let (m, s) = (lin(&[1, -1]), lin(&[1, 1]));
    let (m2, s2) = (m.mul(&m), s.mul(&s));
    let expected = Polynomial::one(2).add(&m2).add(&s2).add(&m2.mul(&s2));
    assert!(p.components.iter().all(|c| *c == expected));
}

#[test]
fn pontryagin_satisfies_congruences_everywhere() {
    for (name, g, _) in catalog() {
        assert!(equivariant_pontryagin(&g, g.half_dim()).unwrap().satisfies_congruences(&g).unwrap(), "{name}");
    }
}

/// Tuple of the degree-`d` parts in monomial-major coordinates.
fn tuple(parts: &[RationalPolynomial], r: usize, d: u32) -> Vec<Rational> {
    let basis = MonomialBasis::new(r, d);
    let n = parts.len();
    let mut t = vec![Rational::zero(); basis.len() * n];
    for (v, p) in parts.iter().enumerate() {
        for (m, c) in p.homogeneous_part(d).terms() {
            t[basis.index_of(m).unwrap() * n + v] = c.clone();
        }
    }
    t
}

/// All degree-`d` congruence tuples of `g` by brute force: kernel of the
/// `f_u − f_v = α h` system, projected to the `f` part.
fn naive_kernel(g: &GkmGraph, d: u32) -> Vec<Vec<Rational>> {
    let r = g.rank();
    let n = g.vertex_count();
    let basis = MonomialBasis::new(r, d);
    // enumerate a spanning set: every tuple in a basis of the tuple space
    // that satisfies the congruences, found by solving for the kernel
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let cols = basis.len() * n;
    for (e, edge) in g.edges().iter().enumerate() {
        let alpha = g.weight(e).unwrap().clone();
        // restriction to ker α, one row per monomial of the restricted ring
        let target = MonomialBasis::new(r - 1, d);
        let mut block = vec![vec![Rational::zero(); cols]; target.len()];
        for (i, m) in basis.monomials().iter().enumerate() {
            let mut mono = Polynomial::zero(r);
            mono.add_term(m.clone(), Rational::one());
            let img = restrict_to_kernel(&mono, &alpha);
            for (mm, c) in img.terms() {
                let row = target.index_of(mm).unwrap();
                block[row][i * n + edge.u] += c.clone();
                block[row][i * n + edge.v] -= c.clone();
            }
        }
        rows.extend(block);
    }
    kernel(rows, cols)
}

fn kernel(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pv = rows[rank][c].clone();
        for j in 0..cols {
            rows[rank][j] = &rows[rank][j] / &pv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = &f * &rows[rank][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[i][fc].clone();
            }
            v
        })
        .collect()
}

fn times_variable(t: &[Rational], r: usize, d: u32, i: usize, n: usize) -> Vec<Rational> {
    let from = MonomialBasis::new(r, d);
    let to = MonomialBasis::new(r, d + 1);
    let mut out = vec![Rational::zero(); to.len() * n];
    for (k, m) in from.monomials().iter().enumerate() {
        let mut mm = m.clone();
        mm[i] += 1;
        let j = to.index_of(&mm).unwrap();
        for v in 0..n {
            out[j * n + v] = t[k * n + v].clone();
        }
    }
    out
}

/// `p_1(CP^2) = 3x²`: the equivariant difference `p_1^T − 3 f²` with
/// `f(v_i) = α_i` lies in the submodule `(x_1, …, x_r)·H^2_T`.
#[test]
fn cp2_first_pontryagin_class_is_three_x_squared() {
    let alphas = [Weight::zero(2), unit(2, 0), unit(2, 1)];
    let g = build_cp(&alphas).unwrap();
    let r = 2;
    let n = 3;
    let p = equivariant_pontryagin(&g, 1).unwrap();
    let f: Vec<RationalPolynomial> = alphas.iter().map(|a| lin(a.coords())).collect();
    let f2: Vec<RationalPolynomial> = f.iter().map(|x| x.mul(x).scale(&Rational::from_integer(3.into()))).collect();
    let diff: Vec<RationalPolynomial> = p.components.iter().zip(&f2).map(|(a, b)| a.sub(b)).collect();
    let target = tuple(&diff, r, 2);
    let k1 = naive_kernel(&g, 1);
    let mut sub: Vec<Vec<Rational>> = Vec::new();
    for t in &k1 {
        for i in 0..r {
            sub.push(times_variable(t, r, 1, i, n));
        }
    }
    let before = rank_q(sub.clone());
    let mut with = sub.clone();
    with.push(target);
    assert_eq!(rank_q(with), before);
    // and x² itself is nonzero in the quotient
    let mut with_x2 = sub;
    with_x2.push(tuple(&f.iter().map(|x| x.mul(x)).collect::<Vec<_>>(), r, 2));
    assert_eq!(rank_q(with_x2), before + 1);

    let ours = ordinary_pontryagin(&g).unwrap();
    assert_eq!(ours.ordinary[1].quotient_dim, 1);
    assert_ne!(ours.ordinary[1].coordinates, vec!["0".to_string()]);
}

#[test]
fn spheres_have_trivial_ordinary_class() {
    for n in 1..=4 {
        let ws: Vec<_> = (0..n).map(|i| class(unit(n, i).coords())).collect();
        let p = ordinary_pontryagin(&build_sphere(&ws).unwrap()).unwrap();
        assert_eq!(p.ordinary[0].coordinates, vec!["1".to_string()]);
        assert!(p.ordinary.iter().skip(1).all(|c| c.is_zero()));
    }
}

#[test]
fn ordinary_class_of_hp2() {
    // (1+u)^6 / (1+4u) = 1 + 2u + 7u^2 in the computed basis
    let hp2 = build_hp(&[unit(3, 0), unit(3, 1), unit(3, 2)]).unwrap();
    let p = ordinary_pontryagin(&hp2).unwrap();
    let dims: Vec<usize> = p.ordinary.iter().map(|c| c.quotient_dim).collect();
    assert_eq!(dims, vec![1, 1, 1]);
    assert!(p.ordinary.iter().all(|c| !c.is_zero()));
}

#[test]
fn integer_preconditions() {
    let op2 = build_op2();
    let r = integer_precondition(&op2).unwrap();
    assert!(r.pass && r.all_primitive);
    let s4 = build_sphere(&[class(&[1, 0]), class(&[0, 1])]).unwrap();
    assert!(integer_precondition(&s4).unwrap().pass);
    let bad = GkmGraph::new(2, 2, true, vec!["x".into(), "y".into()], vec![
        Edge::new(0, 1, class(&[2, 0]), 0),
        Edge::new(0, 1, class(&[2, 4]), 1),
    ], vec![])
    .unwrap();
    let r = integer_precondition(&bad).unwrap();
    assert!(!r.pass && !r.all_primitive && r.vertices.iter().all(|v| v.offending.len() == 1));
}
