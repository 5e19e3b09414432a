#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use gkm_core::catalog::{build_cp, build_hp, build_op2, build_sphere, CrossType};
use gkm_core::io::{to_json, GraphFile};
use gkm_core::lattice::class;
use gkm_core::{GkmGraph, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = BigRational;

pub fn q(x: i64) -> Q {
    BigRational::from_integer(BigInt::from(x))
}

pub fn unit(r: usize, i: usize) -> Weight {
    Weight::unit(r, i)
}

/// Catalog graphs with standard weights and their expected verdicts.
pub fn catalog() -> Vec<(String, GkmGraph, CrossType)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        let ws: Vec<_> = (0..n).map(|i| class(unit(n, i).coords())).collect();
        out.push((format!("S^{}", 2 * n), build_sphere(&ws).unwrap(), CrossType::Sphere(n)));
    }
    for n in 1..=3 {
        let ws: Vec<Weight> = std::iter::once(Weight::zero(n)).chain((0..n).map(|i| unit(n, i))).collect();
        out.push((format!("CP^{n}"), build_cp(&ws).unwrap(), CrossType::ComplexProjective(n)));
    }
    for n in 1..=3 {
        let ws: Vec<Weight> = (0..=n).map(|i| unit(n + 1, i)).collect();
        out.push((format!("HP^{n}"), build_hp(&ws).unwrap(), CrossType::QuaternionicProjective(n)));
    }
    out.push(("OP^2".into(), build_op2(), CrossType::CayleyPlane));
    out
}

/// Random vertex relabeling, edge reordering and per-edge sign flips,
/// applied through the interchange format.
pub fn scramble(g: &GkmGraph, rng: &mut StdRng) -> GkmGraph {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.shuffle(rng);
    let permuted = g.permuted(&order);
    let mut file = GraphFile::from(&permuted);
    file.edges.shuffle(rng);
    for e in &mut file.edges {
        if rng.gen_bool(0.5) {
            if let Some(w) = &e.weight {
                e.weight = Some(-w.clone());
            }
        }
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut e.u, &mut e.v);
        }
    }
    let g2 = file.into_graph().unwrap();
    assert_eq!(gkm_core::io::parse_graph(&to_json(&g2)).unwrap(), g2);
    g2
}

/// Rank by plain Gaussian elimination.
pub fn rank_q(mut rows: Vec<Vec<Q>>) -> usize {
    let Some(cols) = rows.first().map(|r| r.len()) else { return 0 };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..cols {
                    let t = &f * &rows[rank][j];
                    rows[i][j] -= t;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn monomials(vars: usize, d: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(vars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `dim` of degree-`d` congruence tuples via the encoding
/// `f_u − f_v = α_e · h_e` with unknown quotients `h_e`.
pub fn naive_dim(g: &GkmGraph, d: u32) -> usize {
    let r = g.rank();
    let n = g.vertex_count();
    let top = monomials(r, d);
    let low = if d == 0 { vec![] } else { monomials(r, d - 1) };
    let idx: BTreeMap<Vec<u32>, usize> = top.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let m_edges = g.edges().len();
    let cols = n * top.len() + m_edges * low.len();
    let mut rows = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let a = g.weight(e).unwrap().rep().coords().to_vec();
        let mut block = vec![vec![Q::zero(); cols]; top.len()];
        for t in 0..top.len() {
            block[t][edge.u * top.len() + t] += q(1);
            block[t][edge.v * top.len() + t] -= q(1);
        }
        for (h, m) in low.iter().enumerate() {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                let mut mm = m.clone();
                mm[i] += 1;
                block[idx[&mm]][n * top.len() + e * low.len() + h] -= q(ai);
            }
        }
        rows.extend(block);
    }
    cols - rank_q(rows)
}

pub fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

pub fn betti_from_dims(dims: &[usize], r: usize) -> Vec<i64> {
    (0..dims.len())
        .map(|d| (0..=d.min(r)).map(|i| (-1i64).pow(i as u32) * binom(r, i) * dims[d - i] as i64).sum())
        .collect()
}

/// Weyl group order as the permutation group of the (integral) root set
/// generated by the reflections in all roots.
pub fn weyl_order_by_permutations(roots: &[Vec<i64>]) -> usize {
    let index: BTreeMap<Vec<i64>, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let gens: Vec<Vec<usize>> = roots
        .iter()
        .map(|a| {
            roots
                .iter()
                .map(|b| {
                    let c = 2 * dot(a, b) / dot(a, a);
                    let img: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - c * y).collect();
                    index[&img]
                })
                .collect()
        })
        .collect();
    let id: Vec<usize> = (0..roots.len()).collect();
    let mut seen: HashSet<Vec<usize>> = [id.clone()].into_iter().collect();
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let next: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.len()
}

pub fn in_plane(w: &[i64], a: &[i64], b: &[i64]) -> bool {
    let rows = vec![
        a.iter().map(|&x| q(x)).collect(),
        b.iter().map(|&x| q(x)).collect(),
        w.iter().map(|&x| q(x)).collect(),
    ];
    rank_q(rows) == 2
}

/// Faces as connected components of the in-plane edges containing the two
/// generating edges; returns the sorted vertex sets of all faces.
pub fn naive_faces(g: &GkmGraph) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    let w = |e: usize| g.weight(e).unwrap().rep().coords().to_vec();
    for v in 0..g.vertex_count() {
        let inc = g.incident_edges(v);
        for (i, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[i + 1..] {
                let (a, b) = (w(e1), w(e2));
                let plane: Vec<usize> = (0..g.edges().len()).filter(|&e| in_plane(&w(e), &a, &b)).collect();
                let mut verts: BTreeSet<usize> = BTreeSet::new();
                for e in [e1, e2] {
                    verts.insert(g.edge(e).u);
                    verts.insert(g.edge(e).v);
                }
                loop {
                    let before = verts.len();
                    for &e in &plane {
                        let ed = g.edge(e);
                        if verts.contains(&ed.u) || verts.contains(&ed.v) {
                            verts.insert(ed.u);
                            verts.insert(ed.v);
                        }
                    }
                    if verts.len() == before {
                        break;
                    }
                }
                out.insert(verts);
            }
        }
    }
    out
}

/// All sign systems for bundle size `k` by plain enumeration of every
/// permutation tuple and every `ε` matrix.
pub fn naive_sign_systems(k: usize) -> Vec<(Vec<Vec<usize>>, Vec<Vec<i8>>)> {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut x = p.clone();
                x.insert(pos, k - 1);
                out.push(x);
            }
        }
        out
    }
    let all = perms(k);
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![vec![(0..k).collect()]];
    for _ in 1..k {
        tuples = tuples
            .into_iter()
            .flat_map(|t| all.iter().map(move |p| {
                let mut t = t.clone();
                t.push(p.clone());
                t
            }))
            .collect();
    }
    let inv = |p: &[usize]| {
        let mut x = vec![0; p.len()];
        for (i, &v) in p.iter().enumerate() {
            x[v] = i;
        }
        x
    };
    let mut out = Vec::new();
    for sigma in tuples {
        let ok = (0..k).all(|i| {
            (0..k).filter(|&j| j != i).all(|j| {
                let ij = inv(&sigma[j]);
                let p: Vec<usize> = (0..k).map(|l| ij[sigma[i][l]]).collect();
                (0..k).all(|l| p[l] != l && p[p[l]] == l)
            })
        });
        if !ok {
            continue;
        }
        let free = k * (k - 1);
        for mask in 0u64..(1u64 << free) {
            let mut eps = vec![vec![1i8; k]; k];
            for i in 0..k {
                for j in 1..k {
                    if (mask >> (i * (k - 1) + j - 1)) & 1 == 1 {
                        eps[i][j] = -1;
                    }
                }
            }
            let c1 = (0..k).all(|i| (1..k).all(|j| eps[sigma[j][i]][j] == eps[i][j]));
            let c2 = (0..k).all(|i| (2..k).all(|j| eps[sigma[j][i]][1] == -eps[i][1]));
            if c1 && c2 {
                out.push((sigma.clone(), eps));
            }
        }
    }
    out
}

pub fn one() -> Q {
    Q::one()
}

/// Complete graph on `n` vertices with every pair joined by `k` edges
/// carrying random labels, retried until 3-independent.
pub fn generic_simplex(n: usize, k: usize, rank: usize, rng: &mut StdRng) -> GkmGraph {
    use gkm_core::graph::validate;
    use gkm_core::Edge;
    loop {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for i in 0..k {
                    let w: Vec<i64> = (0..rank).map(|_| rng.gen_range(-9..=9)).collect();
                    if w.iter().all(|&x| x == 0) {
                        continue;
                    }
                    edges.push(Edge::new(a, b, class(&w), i as u32));
                }
            }
        }
        if edges.len() != n * (n - 1) / 2 * k {
            continue;
        }
        let names = (0..n).map(|i| format!("v{i}")).collect();
        let g = GkmGraph::new(rank, (n - 1) * k, true, names, edges, vec![]).unwrap();
        if validate(&g, 3).unwrap().pass {
            return g;
        }
    }
}
