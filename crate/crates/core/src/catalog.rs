//! Model GKM graphs of the compact rank one symmetric spaces, the `K_{3,3}`
//! family, and recognizers that recover the standard labels of a graph with
//! one of these shapes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GkmError, Result};
use crate::graph::{validate, Edge, GkmGraph};
use crate::lattice::{self, canonicalize, Weight, WeightClass, WeightLattice};

/// The classification targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum CrossType {
    /// `S^{2n}`.
    Sphere(usize),
    /// `CP^n`.
    ComplexProjective(usize),
    /// `HP^n`.
    QuaternionicProjective(usize),
    CayleyPlane,
    /// `RP^{2n}`.
    RealProjective(usize),
    NotRealizable,
}

impl CrossType {
    /// Same GKM graph shape: `CP^1 = S^2` and `HP^1 = S^4`.
    pub fn equivalent(&self, other: &CrossType) -> bool {
        self.normal_form() == other.normal_form()
    }

    fn normal_form(&self) -> CrossType {
        match *self {
            CrossType::ComplexProjective(1) => CrossType::Sphere(1),
            CrossType::QuaternionicProjective(1) => CrossType::Sphere(2),
            x => x,
        }
    }

    pub fn is_realizable(&self) -> bool {
        *self != CrossType::NotRealizable
    }

    /// Real dimension of the model space, when there is one.
    pub fn dimension(&self) -> Option<usize> {
        match *self {
            CrossType::Sphere(n) | CrossType::ComplexProjective(n) | CrossType::RealProjective(n) => Some(2 * n),
            CrossType::QuaternionicProjective(n) => Some(4 * n),
            CrossType::CayleyPlane => Some(16),
            CrossType::NotRealizable => None,
        }
    }
}

impl fmt::Display for CrossType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossType::Sphere(n) => write!(f, "S^{}", 2 * n),
            CrossType::ComplexProjective(n) => write!(f, "CP^{n}"),
            CrossType::QuaternionicProjective(n) => write!(f, "HP^{n}"),
            CrossType::CayleyPlane => write!(f, "OP^2"),
            CrossType::RealProjective(n) => write!(f, "RP^{}", 2 * n),
            CrossType::NotRealizable => write!(f, "not realizable"),
        }
    }
}

/// One edge label written in terms of the base weights:
/// `label = ± (Σ coefficients[i] · base[i]) / denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelExpr {
    pub edge: usize,
    pub coefficients: Vec<i64>,
}

/// Standard labels recovered from a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedLabels {
    /// Numerators of the base weights, in stored coordinates.
    pub base_weights: Vec<Weight>,
    /// The base weights are `base_weights[i] / base_denominator`.
    pub base_denominator: i64,
    /// Labels are `(Σ c_i · base_weights[i]) / denominator`.
    pub denominator: i64,
    pub derivation: Vec<LabelExpr>,
}

impl NormalizedLabels {
    /// Numerator vector of an expression.
    pub fn expand(&self, expr: &LabelExpr) -> Weight {
        let r = self.base_weights.first().map_or(0, Weight::rank);
        let mut out = vec![0i64; r];
        for (c, b) in expr.coefficients.iter().zip(&self.base_weights) {
            for (o, x) in out.iter_mut().zip(b.coords()) {
                *o += c * x;
            }
        }
        Weight(out)
    }

    /// `true` iff every derivation reproduces its edge's weight class and
    /// every edge of `g` is derived exactly once.
    pub fn verify(&self, g: &GkmGraph) -> bool {
        let mut seen = vec![false; g.edges().len()];
        for expr in &self.derivation {
            let Some(slot) = seen.get_mut(expr.edge) else {
                return false;
            };
            if *slot {
                return false;
            }
            *slot = true;
            let Ok(w) = g.weight(expr.edge) else {
                return false;
            };
            if !matches_scaled(&self.expand(expr), w, self.denominator) {
                return false;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `n == ± d · w` exactly.
fn matches_scaled(n: &Weight, w: &WeightClass, d: i64) -> bool {
    let scaled = w.rep() * d;
    *n == scaled || *n == -&scaled
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn common_rank(ws: &[&Weight]) -> Result<usize> {
    let r = ws.first().map(|w| w.rank()).ok_or_else(|| GkmError::Precondition("no weights given".into()))?;
    if let Some(bad) = ws.iter().find(|w| w.rank() != r) {
        return Err(GkmError::RankMismatch { weight: bad.to_string(), expected: r, found: bad.rank() });
    }
    Ok(r)
}

fn independent_pair(a: &Weight, b: &Weight) -> bool {
    lattice::rank(&[a, b]) == 2
}

/// `S^{2n}`: two vertices joined by `n` edges labeled by the given weights.
pub fn build_sphere(alphas: &[WeightClass]) -> Result<GkmGraph> {
    let reps: Vec<&Weight> = alphas.iter().map(|a| a.rep()).collect();
    let r = common_rank(&reps)?;
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            if !independent_pair(reps[i], reps[j]) {
                return Err(GkmError::Precondition(format!(
                    "weights {} and {} are linearly dependent",
                    alphas[i], alphas[j]
                )));
            }
        }
    }
    let edges = alphas.iter().enumerate().map(|(i, a)| Edge::new(0, 1, a.clone(), i as u32)).collect();
    GkmGraph::new(r, alphas.len(), true, names("v", 2), edges, vec![])
}

/// `CP^n` from `n+1` weights `α_0, …, α_n`: the complete graph with edge
/// `v_i v_j` labeled `α_i − α_j`.
pub fn build_cp(alphas: &[Weight]) -> Result<GkmGraph> {
    let refs: Vec<&Weight> = alphas.iter().collect();
    let r = common_rank(&refs)?;
    let count = alphas.len();
    if count < 2 {
        return Err(GkmError::Precondition("CP^n needs at least two weights".into()));
    }
    if count == 2 && alphas[0] == alphas[1] {
        return Err(GkmError::Precondition("the two weights must differ".into()));
    }
    if count > 2 {
        for i in 0..count {
            for j1 in 0..count {
                for j2 in j1 + 1..count {
                    if i == j1 || i == j2 {
                        continue;
                    }
                    let a = &alphas[j1] - &alphas[i];
                    let b = &alphas[j2] - &alphas[i];
                    if !independent_pair(&a, &b) {
                        return Err(GkmError::Precondition(format!(
                            "α{j1} − α{i} = {a} and α{j2} − α{i} = {b} are linearly dependent (triple {i}, {j1}, {j2})"
                        )));
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..count {
        for j in i + 1..count {
            edges.push(Edge::new(i, j, canonicalize(&(&alphas[i] - &alphas[j]))?, 0));
        }
    }
    GkmGraph::new(r, count - 1, true, names("v", count), edges, vec![])
}

/// `HP^n` from `n+1` weights: the complete graph with every edge doubled,
/// labeled `α_i − α_j` (index 0) and `α_i + α_j` (index 1).
pub fn build_hp(alphas: &[Weight]) -> Result<GkmGraph> {
    let refs: Vec<&Weight> = alphas.iter().collect();
    let r = common_rank(&refs)?;
    let count = alphas.len();
    if count < 2 {
        return Err(GkmError::Precondition("HP^n needs at least two weights".into()));
    }
    for i in 0..count {
        for j in i + 1..count {
            if !independent_pair(&(&alphas[i] - &alphas[j]), &(&alphas[i] + &alphas[j])) {
                return Err(GkmError::Precondition(format!("α{i} ± α{j} are linearly dependent")));
            }
        }
    }
    if count > 2 {
        for i in 0..count {
            for j1 in 0..count {
                for j2 in j1 + 1..count {
                    if i == j1 || i == j2 {
                        continue;
                    }
                    for s1 in [1, -1] {
                        for s2 in [1, -1] {
                            let a = &alphas[j1] + &(&alphas[i] * s1);
                            let b = &alphas[j2] + &(&alphas[i] * s2);
                            if !independent_pair(&a, &b) {
                                return Err(GkmError::Precondition(format!(
                                    "{a} and {b} are linearly dependent (triple {i}, {j1}, {j2})"
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut edges = Vec::new();
    for i in 0..count {
        for j in i + 1..count {
            edges.push(Edge::new(i, j, canonicalize(&(&alphas[i] - &alphas[j]))?, 0));
            edges.push(Edge::new(i, j, canonicalize(&(&alphas[i] + &alphas[j]))?, 1));
        }
    }
    GkmGraph::new(r, 2 * (count - 1), true, names("v", count), edges, vec![])
}

/// Lattice spanned by the `F_4` roots, in coordinates scaled by 2.
pub fn f4_lattice() -> WeightLattice {
    WeightLattice::new(vec![
        Weight::new([0, 2, -2, 0]),
        Weight::new([0, 0, 2, -2]),
        Weight::new([0, 0, 0, 2]),
        Weight::new([1, -1, -1, -1]),
    ])
    .expect("independent basis")
}

/// Labels of the `v0 v1` bundle of the Cayley plane, scaled by 2.
pub fn op2_labels_01() -> Vec<Weight> {
    vec![
        Weight::new([-1, -1, 1, 1]),
        Weight::new([-1, 1, -1, 1]),
        Weight::new([-1, 1, 1, -1]),
        Weight::new([1, 1, 1, 1]),
    ]
}

/// Labels of the `v0 v2` bundle, scaled by 2.
pub fn op2_labels_02() -> Vec<Weight> {
    (0..4)
        .map(|i| Weight((0..4).map(|j| if i == j { -1 } else { 1 }).collect()))
        .collect()
}

/// Labels of the `v1 v2` bundle, scaled by 2.
pub fn op2_labels_12() -> Vec<Weight> {
    (0..4).map(|i| &Weight::unit(4, i) * 2).collect()
}

/// The Cayley plane `F_4/Spin(9)` with a maximal torus of `Spin(9)`. Weights
/// are stored doubled so that they stay integral.
pub fn build_op2() -> GkmGraph {
    let mut edges = Vec::new();
    for (pair, labels) in [((0, 1), op2_labels_01()), ((0, 2), op2_labels_02()), ((1, 2), op2_labels_12())] {
        for (i, w) in labels.iter().enumerate() {
            edges.push(Edge::new(pair.0, pair.1, canonicalize(w).expect("nonzero"), i as u32));
        }
    }
    GkmGraph::new(4, 8, true, names("v", 3), edges, vec![])
        .expect("well-formed")
        .with_weight_scale(2)
        .with_lattice(f4_lattice())
        .expect("rank 4 lattice")
}

/// Vertex ids of the `K_{3,3}` family: `a0, a1, a2` on one side,
/// `b0, b1, b2` on the other.
pub fn k33_vertex_names() -> Vec<String> {
    ["a0", "a1", "a2", "b0", "b1", "b2"].iter().map(|s| s.to_string()).collect()
}

/// `K_{3,3}` with every edge replaced by `mult` parallel unlabeled edges.
pub fn build_k33_family(mult: usize) -> Result<GkmGraph> {
    if ![1, 2, 4].contains(&mult) {
        return Err(GkmError::Precondition(format!("multiplicity must be 1, 2 or 4, got {mult}")));
    }
    let mut edges = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            for i in 0..mult {
                edges.push(Edge::unlabeled(a, b, i as u32));
            }
        }
    }
    let rank = match mult {
        1 => 2,
        2 => 3,
        _ => 4,
    };
    GkmGraph::new(rank, 3 * mult, true, k33_vertex_names(), edges, vec![])
}

fn require_gkm3(g: &GkmGraph, err: fn(String) -> GkmError) -> Result<()> {
    let report = validate(g, 3)?;
    if report.pass {
        Ok(())
    } else {
        Err(err(format!("weights not 3-independent at {}", report.failing_vertices().join(", "))))
    }
}

/// Checks that `g` is a complete graph on its vertices with every bundle of
/// size `k`; returns the bundles.
fn simplex_bundles(g: &GkmGraph, k: usize, err: fn(String) -> GkmError) -> Result<BTreeMap<(usize, usize), Vec<usize>>> {
    let n = g.vertex_count();
    let bundles = g.bundles();
    for a in 0..n {
        for b in a + 1..n {
            let size = bundles.get(&(a, b)).map_or(0, Vec::len);
            if size != k {
                return Err(err(format!(
                    "{} and {} are joined by {size} edges, expected {k}",
                    g.vertex_name(a),
                    g.vertex_name(b)
                )));
            }
        }
    }
    Ok(bundles)
}

fn rep(g: &GkmGraph, e: usize) -> Result<Weight> {
    Ok(g.weight(e)?.rep().clone())
}

/// Finds the edge of `bundle` whose class matches `n / d`, returning the
/// edge index.
fn find_scaled(g: &GkmGraph, bundle: &[usize], n: &Weight, d: i64) -> Option<usize> {
    bundle.iter().copied().find(|&e| g.weight(e).map_or(false, |w| matches_scaled(n, w, d)))
}

/// Recovers `α_0 = 0, α_1, …, α_n` with every edge `v_i v_j` labeled
/// `±(α_i − α_j)`.
pub fn normalize_cp(g: &GkmGraph) -> Result<NormalizedLabels> {
    let err = GkmError::NotCpNormalizable;
    if g.vertex_count() < 2 {
        return Err(err("needs at least two vertices".into()));
    }
    require_gkm3(g, err)?;
    let bundles = simplex_bundles(g, 1, err)?;
    let n = g.vertex_count() - 1;
    let edge = |a: usize, b: usize| bundles[&(a.min(b), a.max(b))][0];
    let r = g.rank();
    // gamma[i] = chosen representative of the weight on v0 v_i
    let mut gamma: Vec<Weight> = vec![Weight::zero(r)];
    gamma.push(rep(g, edge(0, 1))?);
    for i in 2..=n {
        let g0i = rep(g, edge(0, i))?;
        let target = g.weight(edge(1, i))?;
        let sign = [1i64, -1].into_iter().find(|&s| matches_scaled(&(&gamma[1] - &(&g0i * s)), target, 1));
        match sign {
            Some(s) => gamma.push(&g0i * s),
            None => {
                return Err(err(format!(
                    "label {} on {}{} is not ±{} ± {}",
                    target,
                    g.vertex_name(1),
                    g.vertex_name(i),
                    gamma[1],
                    g0i
                )))
            }
        }
    }
    let mut derivation = Vec::new();
    for a in 0..=n {
        for b in a + 1..=n {
            let mut coefficients = vec![0; n + 1];
            coefficients[a] += 1;
            coefficients[b] -= 1;
            derivation.push(LabelExpr { edge: edge(a, b), coefficients });
        }
    }
    derivation.sort_by_key(|d| d.edge);
    let labels = NormalizedLabels { base_weights: gamma, base_denominator: 1, denominator: 1, derivation };
    if !labels.verify(g) {
        let bad = labels
            .derivation
            .iter()
            .find(|d| !matches_scaled(&labels.expand(d), g.weight(d.edge).expect("labeled"), 1))
            .expect("some derivation fails");
        let e = g.edge(bad.edge);
        return Err(err(format!(
            "label on {}{} is not the difference of the labels at {}",
            g.vertex_name(e.u),
            g.vertex_name(e.v),
            g.vertex_name(0)
        )));
    }
    Ok(labels)
}

/// Recovers `α_0, …, α_n` (as numerators over 2, reduced when possible) with
/// every bundle `v_i v_j` labeled `±(α_i + α_j)`, `±(α_i − α_j)`.
pub fn normalize_hp(g: &GkmGraph) -> Result<NormalizedLabels> {
    let err = GkmError::NotHpNormalizable;
    if g.vertex_count() < 2 {
        return Err(err("needs at least two vertices".into()));
    }
    require_gkm3(g, err)?;
    let bundles = simplex_bundles(g, 2, err)?;
    let n = g.vertex_count() - 1;
    let bundle = |a: usize, b: usize| bundles[&(a.min(b), a.max(b))].clone();
    let b01 = bundle(0, 1);
    let g01 = rep(g, b01[0])?;
    let g01p_abs = rep(g, b01[1])?;
    for s in [1i64, -1] {
        let g01p = &g01p_abs * s;
        // twice the base weights
        let mut two_alpha = vec![&g01 + &g01p, &g01 - &g01p];
        if search_hp(g, &bundle, n, &g01, &g01p, &mut two_alpha) {
            let labels = hp_labels(g, &bundle, n, two_alpha);
            if labels.verify(g) {
                return Ok(labels);
            }
        }
    }
    Err(err("the two labels of each bundle at v0 do not add up to a common sum for any sign choice".into()))
}

/// Depth-first choice of `γ_{0j}, γ'_{0j}` for `j = 2, …, n`, keeping the
/// constant-sum relation and checking every completed bundle.
fn search_hp(
    g: &GkmGraph,
    bundle: &dyn Fn(usize, usize) -> Vec<usize>,
    n: usize,
    g01: &Weight,
    g01p: &Weight,
    two_alpha: &mut Vec<Weight>,
) -> bool {
    let j = two_alpha.len();
    if j > n {
        return true;
    }
    let b0j = bundle(0, j);
    let b1j = bundle(1, j);
    for pick in 0..2 {
        let (Ok(p), Ok(q)) = (rep(g, b0j[pick]), rep(g, b0j[1 - pick])) else {
            return false;
        };
        for s in [1i64, -1] {
            let g0j = &p * s;
            // γ_{1j} = γ_{0j} − γ_{01},  γ'_{1j} = γ_{0j} − γ'_{01}
            let x = &g0j - g01;
            let y = &g0j - g01p;
            let hit_x = find_scaled(g, &b1j, &x, 1);
            let hit_y = find_scaled(g, &b1j, &y, 1);
            if hit_x.is_none() || hit_y.is_none() || hit_x == hit_y {
                continue;
            }
            // γ'_{0j} = γ_{01} + γ'_{01} − γ_{0j}
            let g0jp = &(g01 + g01p) - &g0j;
            if !(g0jp == q || g0jp == -&q) {
                continue;
            }
            two_alpha.push(&g0j - &g0jp);
            let consistent = (2..j).all(|i| {
                let bij = bundle(i, j);
                let plus = &two_alpha[i] + &two_alpha[j];
                let minus = &two_alpha[i] - &two_alpha[j];
                let a = find_scaled(g, &bij, &plus, 2);
                let b = find_scaled(g, &bij, &minus, 2);
                a.is_some() && b.is_some() && a != b
            });
            if consistent && search_hp(g, bundle, n, g01, g01p, two_alpha) {
                return true;
            }
            two_alpha.pop();
        }
    }
    false
}

fn hp_labels(g: &GkmGraph, bundle: &dyn Fn(usize, usize) -> Vec<usize>, n: usize, two_alpha: Vec<Weight>) -> NormalizedLabels {
    let mut derivation = Vec::new();
    for a in 0..=n {
        for b in a + 1..=n {
            let edges = bundle(a, b);
            let plus = &two_alpha[a] + &two_alpha[b];
            let e_plus = find_scaled(g, &edges, &plus, 2);
            let e_minus = edges.iter().copied().find(|&e| Some(e) != e_plus);
            for (e, sign) in [(e_plus, 1), (e_minus, -1)] {
                if let Some(e) = e {
                    let mut coefficients = vec![0; n + 1];
                    coefficients[a] += 1;
                    coefficients[b] += sign;
                    derivation.push(LabelExpr { edge: e, coefficients });
                }
            }
        }
    }
    derivation.sort_by_key(|d| d.edge);
    let all_even = two_alpha.iter().all(|w| w.coords().iter().all(|x| x % 2 == 0));
    if all_even {
        let base: Vec<Weight> = two_alpha.iter().map(|w| Weight(w.coords().iter().map(|x| x / 2).collect())).collect();
        NormalizedLabels { base_weights: base, base_denominator: 1, denominator: 1, derivation }
    } else {
        NormalizedLabels { base_weights: two_alpha, base_denominator: 2, denominator: 2, derivation }
    }
}

/// Recovers a basis `β_1, …, β_4` (the labels of one bundle) in which the
/// other two bundles are `α_1 = ½Σβ_j`, `α_i = ½(−β_1 − β_i + Σ_{j≠1,i} β_j)`
/// and `γ_i = ½(−β_i + Σ_{j≠i} β_j)`.
pub fn normalize_op2(g: &GkmGraph) -> Result<NormalizedLabels> {
    let err = GkmError::NotOp2Normalizable;
    if g.vertex_count() != 3 {
        return Err(err(format!("expected 3 vertices, found {}", g.vertex_count())));
    }
    require_gkm3(g, err)?;
    let bundles = simplex_bundles(g, 4, err)?;
    let bundle = |a: usize, b: usize| bundles[&(a.min(b), a.max(b))].clone();
    // (v0, v1, v2): β on v1 v2, α on v0 v1, γ on v0 v2
    for (v0, v1, v2) in [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (1, 0, 2), (2, 1, 0)] {
        let (ka, kb, kc) = (bundle(v0, v1), bundle(v1, v2), bundle(v0, v2));
        let beta_abs: Vec<Weight> = match kb.iter().map(|&e| rep(g, e)).collect::<Result<Vec<_>>>() {
            Ok(x) => x,
            Err(e) => return Err(e),
        };
        for signs in 0u32..16 {
            let beta: Vec<Weight> =
                (0..4).map(|i| if signs >> i & 1 == 1 { -&beta_abs[i] } else { beta_abs[i].clone() }).collect();
            for first in 0..4 {
                let order: Vec<usize> = std::iter::once(first).chain((0..4).filter(|&i| i != first)).collect();
                if let Some(labels) = op2_attempt(g, &ka, &kb, &kc, &beta, &order) {
                    return Ok(labels);
                }
            }
        }
    }
    Err(err("no sign and pairing assignment reproduces the half-sum pattern".into()))
}

fn op2_attempt(
    g: &GkmGraph,
    ka: &[usize],
    kb: &[usize],
    kc: &[usize],
    beta: &[Weight],
    order: &[usize],
) -> Option<NormalizedLabels> {
    // coefficient vectors over (β_order[0], …, β_order[3]) with denominator 2
    let mut exprs: Vec<(Vec<i64>, &[usize])> = Vec::new();
    for i in 0..4 {
        let mut c = vec![0; 4];
        c[i] = 2;
        exprs.push((c, kb));
    }
    exprs.push((vec![1, 1, 1, 1], ka));
    for i in 1..4 {
        let c = (0..4).map(|j| if j == 0 || j == i { -1 } else { 1 }).collect();
        exprs.push((c, ka));
    }
    for i in 0..4 {
        let c = (0..4).map(|j| if j == i { -1 } else { 1 }).collect();
        exprs.push((c, kc));
    }
    let base: Vec<Weight> = order.iter().map(|&i| beta[i].clone()).collect();
    let mut labels = NormalizedLabels { base_weights: base, base_denominator: 1, denominator: 2, derivation: Vec::new() };
    let mut used = Vec::new();
    for (coefficients, bundle) in exprs {
        let mut expr = LabelExpr { edge: usize::MAX, coefficients };
        let n = labels.expand(&expr);
        let e = bundle.iter().copied().find(|&e| !used.contains(&e) && g.weight(e).map_or(false, |w| matches_scaled(&n, w, 2)))?;
        used.push(e);
        expr.edge = e;
        labels.derivation.push(expr);
    }
    labels.derivation.sort_by_key(|d| d.edge);
    labels.verify(g).then_some(labels)
}
