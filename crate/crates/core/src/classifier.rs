use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::{normalize_cp, normalize_hp, normalize_op2, CrossType, NormalizedLabels};
use crate::error::{GkmError, Result};
use crate::graph::{all_faces, face_closure, validate, Face, GkmGraph};
use crate::lattice::{Weight, WeightClass};
use crate::linalg::{solve, Matrix};
use crate::scalar::{abs_ratio, fmt_rational, rat};
use crate::Rational;

/// Named combinatorial conditions checked by the classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    GkmCondition,
    FaceSize,
    UniformSimplex,
    MultiplicityPowerOfTwo,
    CayleyTriangle,
    NoBiangle,
    NonOrientableSingleVertex,
    Gkm4Dichotomy,
    SignSystem,
    CpLabels,
    HpLabels,
    Op2Labels,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.description())
    }
}

impl Lemma {
    pub fn description(&self) -> &'static str {
        match self {
            Lemma::GkmCondition => "3-independence of the weights at every vertex",
            Lemma::FaceSize => "every two-dimensional face has two or three vertices",
            Lemma::UniformSimplex => "the graph is a simplex with every edge replaced by k edges",
            Lemma::MultiplicityPowerOfTwo => "k=1,2,4",
            Lemma::CayleyTriangle => "k=4 forces a triangle with each edge replaced by four edges",
            Lemma::NoBiangle => "an almost complex structure leaves no biangle",
            Lemma::NonOrientableSingleVertex => "a non-orientable graph has only a single vertex",
            Lemma::Gkm4Dichotomy => "under 4-independence the graph is that of a sphere or a complex projective space",
            Lemma::SignSystem => "a triangle admits a consistent sign system",
            Lemma::CpLabels => "complex projective weight normalization",
            Lemma::HpLabels => "quaternionic projective weight normalization",
            Lemma::Op2Labels => "Cayley plane weight normalization",
        }
    }
}

/// The parallel edges between two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBundle {
    pub pair: (usize, usize),
    pub edges: Vec<usize>,
}

impl EdgeBundle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn edge_bundles(g: &GkmGraph) -> Vec<EdgeBundle> {
    g.bundles().into_iter().map(|(pair, edges)| EdgeBundle { pair, edges }).collect()
}

fn ser_vectors<S: serde::Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<Vec<String>> = v.iter().map(|x| x.iter().map(fmt_rational).collect()).collect();
    out.serialize(s)
}

/// Signs and permutations around a triangle `v1 v2 v3` with bundles of size
/// `k`, satisfying `γ_i = α_1 − β_i = ε_ij α_j + δ_ij β_{σ_j(i)}`.
///
/// `α` labels `v1 v2`, `β` labels `v1 v3`, `γ` labels `v2 v3`; indices are
/// zero-based, so `sigma[0]` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignSystem {
    pub vertices: [String; 3],
    pub k: usize,
    #[serde(serialize_with = "ser_vectors")]
    pub alpha: Vec<Vec<Rational>>,
    #[serde(serialize_with = "ser_vectors")]
    pub beta: Vec<Vec<Rational>>,
    #[serde(serialize_with = "ser_vectors")]
    pub gamma: Vec<Vec<Rational>>,
    /// `epsilon[i][j]`.
    pub epsilon: Vec<Vec<i8>>,
    /// `delta[i][j]`.
    pub delta: Vec<Vec<i8>>,
    /// `sigma[j][i] = σ_j(i)`.
    pub sigma: Vec<Vec<usize>>,
}

fn axpy(x: &[Rational], s: i8, y: &[Rational], t: i8) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a * rat(s as i64) + b * rat(t as i64)).collect()
}

impl SignSystem {
    /// Exact check of the defining relation for all `i`, `j`.
    pub fn verify_relation(&self) -> bool {
        (0..self.k).all(|i| {
            let lhs: Vec<Rational> = self.alpha[0].iter().zip(&self.beta[i]).map(|(a, b)| a - b).collect();
            lhs == self.gamma[i]
                && (0..self.k).all(|j| {
                    axpy(&self.alpha[j], self.epsilon[i][j], &self.beta[self.sigma[j][i]], self.delta[i][j]) == lhs
                })
        })
    }

    /// `σ_j^{-1} σ_i` is a fixed-point-free involution for all `i ≠ j`.
    pub fn products_are_free_involutions(&self) -> bool {
        let k = self.k;
        let inv: Vec<Vec<usize>> = self.sigma.iter().map(|s| invert(s)).collect();
        (0..k).all(|i| {
            (0..k).filter(|&j| j != i).all(|j| {
                let p: Vec<usize> = (0..k).map(|l| inv[j][self.sigma[i][l]]).collect();
                (0..k).all(|l| p[l] != l && p[p[l]] == l)
            })
        })
    }

    /// `δ_ij = 1` and `ε_{σ_j(i) j} = ε_ij` for `j > 1`.
    pub fn delta_and_epsilon_symmetric(&self) -> bool {
        (0..self.k).all(|i| {
            (1..self.k).all(|j| self.delta[i][j] == 1 && self.epsilon[self.sigma[j][i]][j] == self.epsilon[i][j])
        })
    }

    /// `ε_{σ_j(i) 2} = −ε_{i2}` for `j > 2`.
    pub fn second_column_alternates(&self) -> bool {
        (0..self.k).all(|i| (2..self.k).all(|j| self.epsilon[self.sigma[j][i]][1] == -self.epsilon[i][1]))
    }

    /// The group generated by the `σ_j` is elementary abelian and acts
    /// regularly on the `k` indices.
    pub fn group_is_regular_elementary_abelian(&self) -> bool {
        regular_elementary_abelian(&self.sigma)
    }
}

fn invert(s: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; s.len()];
    for (i, &x) in s.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn regular_elementary_abelian(perms: &[Vec<usize>]) -> bool {
    let k = perms.first().map_or(0, |p| p.len());
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..k).map(|i| a[b[i]]).collect() };
    let id: Vec<usize> = (0..k).collect();
    let mut group: BTreeSet<Vec<usize>> = [id.clone()].into_iter().collect();
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for p in perms {
            let y = compose(p, &x);
            if group.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let involutive = group.iter().all(|x| compose(x, x).iter().enumerate().all(|(i, &v)| i == v));
    let transitive = (0..k).all(|t| group.iter().any(|x| x[0] == t));
    involutive && transitive && group.len() == k
}

fn to_rational(w: &Weight) -> Vec<Rational> {
    w.coords().iter().map(|&x| rat(x)).collect()
}

/// Solves `c = x·a + y·b`.
fn decompose2(c: &[Rational], a: &[Rational], b: &[Rational]) -> Option<(Rational, Rational)> {
    let rows = a.iter().zip(b).map(|(x, y)| vec![x.clone(), y.clone()]).collect();
    let m = Matrix::from_rows(rows, 2);
    let sol = solve(&m, c)?;
    Some((sol[0].clone(), sol[1].clone()))
}

fn sign_of(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else {
        -1
    }
}

fn classes_of(g: &GkmGraph, edges: &[usize]) -> Result<Vec<WeightClass>> {
    let mut out: Vec<WeightClass> = edges.iter().map(|&e| g.weight(e).cloned()).collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// Chooses representatives of the three bundles of the triangle `tri` so the
/// defining relation holds with `σ_1 = id`, then checks the structural
/// consequences of 3-independence: δ_ij = 1 and ε symmetric for `j > 1`,
/// free involutive `σ_j^{-1}σ_i`, alternating second column.
///
/// Representatives are rescaled by rationals where the integral labels are
/// proportional to, rather than equal to, the ones in the relation.
pub fn extract_sign_system(g: &GkmGraph, tri: [usize; 3]) -> Result<SignSystem> {
    let [v1, v2, v3] = tri;
    let infeasible = |msg: String| GkmError::SignSystemInfeasible(msg);
    let a_edges = g.bundle(v1, v2);
    let b_edges = g.bundle(v1, v3);
    let c_edges = g.bundle(v2, v3);
    let k = a_edges.len();
    if k == 0 || b_edges.len() != k || c_edges.len() != k {
        return Err(GkmError::lemma(
            Lemma::UniformSimplex,
            format!(
                "bundles of sizes {}, {}, {} around {}{}{}",
                a_edges.len(),
                b_edges.len(),
                c_edges.len(),
                g.vertex_name(v1),
                g.vertex_name(v2),
                g.vertex_name(v3)
            ),
        ));
    }
    let a = classes_of(g, &a_edges)?;
    let b = classes_of(g, &b_edges)?;
    let c = classes_of(g, &c_edges)?;
    let alpha1 = to_rational(a[0].rep());
    // β_i: the multiple of the i-th β class with α_1 − β_i on a γ line
    let mut beta = Vec::with_capacity(k);
    let mut gamma = Vec::with_capacity(k);
    let mut used = vec![false; k];
    for bc in &b {
        let bv = to_rational(bc.rep());
        let hit = c.iter().enumerate().find_map(|(ci, cc)| {
            let cv = to_rational(cc.rep());
            decompose2(&alpha1, &bv, &cv).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, _)| (ci, x))
        });
        let Some((ci, x)) = hit else {
            return Err(infeasible(format!("α_1 − {bc} lies on no weight line of the third bundle")));
        };
        if used[ci] {
            return Err(GkmError::lemma(
                Lemma::UniformSimplex,
                format!("two β weights give the same third edge {}", c[ci]),
            ));
        }
        used[ci] = true;
        let bi: Vec<Rational> = bv.iter().map(|t| t * &x).collect();
        gamma.push(alpha1.iter().zip(&bi).map(|(p, q)| p - q).collect::<Vec<_>>());
        beta.push(bi);
    }
    let mut alpha = vec![alpha1.clone()];
    let mut epsilon = vec![vec![0i8; k]; k];
    let mut delta = vec![vec![0i8; k]; k];
    let mut sigma = vec![(0..k).collect::<Vec<_>>()];
    for i in 0..k {
        epsilon[i][0] = 1;
        delta[i][0] = -1;
    }
    for (j, aj) in a.iter().enumerate().skip(1) {
        let av = to_rational(aj.rep());
        let mut scale: Option<Rational> = None;
        let mut perm = vec![usize::MAX; k];
        for i in 0..k {
            let found = (0..k).find_map(|m| {
                decompose2(&gamma[i], &av, &beta[m])
                    .filter(|(x, y)| !x.is_zero() && (y.is_one() || (-y.clone()).is_one()))
                    .map(|(x, y)| (m, x, y))
            });
            let Some((m, x, y)) = found else {
                return Err(infeasible(format!("γ_{} is not ±α_{} ± β_m for any m", i + 1, j + 1)));
            };
            let s = scale.get_or_insert_with(|| abs_ratio(&x)).clone();
            if abs_ratio(&x) != s {
                return Err(infeasible(format!("α_{} enters the γ weights with different magnitudes", j + 1)));
            }
            perm[i] = m;
            epsilon[i][j] = sign_of(&x);
            delta[i][j] = sign_of(&y);
        }
        let s = scale.expect("k ≥ 1");
        let flip = epsilon[0][j];
        for row in epsilon.iter_mut() {
            row[j] *= flip;
        }
        alpha.push(av.iter().map(|t| t * &s * rat(flip as i64)).collect());
        if perm.iter().collect::<BTreeSet<_>>().len() != k {
            return Err(infeasible(format!("σ_{} is not a permutation", j + 1)));
        }
        sigma.push(perm);
    }
    let system = SignSystem {
        vertices: [v1, v2, v3].map(|v| g.vertex_name(v).to_string()),
        k,
        alpha,
        beta,
        gamma,
        epsilon,
        delta,
        sigma,
    };
    if !system.verify_relation() {
        return Err(GkmError::Internal("extracted sign system fails its own relation".into()));
    }
    if !system.products_are_free_involutions() {
        return Err(GkmError::lemma(Lemma::SignSystem, "some σ_j^{-1}σ_i is not a fixed-point-free involution"));
    }
    if !system.delta_and_epsilon_symmetric() {
        return Err(GkmError::lemma(Lemma::SignSystem, "δ_ij = 1 and ε_{σ_j(i)j} = ε_ij fail for some j > 1"));
    }
    if !system.second_column_alternates() {
        return Err(GkmError::lemma(Lemma::SignSystem, "ε_{σ_j(i)2} = −ε_{i2} fails for some j > 2"));
    }
    Ok(system)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceSummary {
    pub vertices: Vec<String>,
    pub edges: Vec<usize>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceSizeReport {
    pub pass: bool,
    pub biangles: usize,
    pub triangles: usize,
    pub faces: Vec<FaceSummary>,
    pub failures: Vec<FaceSummary>,
}

/// Every face has two or three vertices.
pub fn check_face_sizes(g: &GkmGraph) -> Result<FaceSizeReport> {
    let faces = all_faces(g)?;
    let summary = |f: &Face| FaceSummary {
        vertices: f.vertices.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
        edges: f.edges.iter().copied().collect(),
        size: f.vertex_count(),
    };
    let all: Vec<FaceSummary> = faces.iter().map(summary).collect();
    let failures: Vec<FaceSummary> = all.iter().filter(|f| f.size > 3).cloned().collect();
    Ok(FaceSizeReport {
        pass: failures.is_empty(),
        biangles: all.iter().filter(|f| f.size == 2).count(),
        triangles: all.iter().filter(|f| f.size == 3).count(),
        faces: all,
        failures,
    })
}

/// The common bundle size `k` of a graph with at least three vertices: every
/// pair joined by exactly `k` edges, `k ∈ {1, 2, 4}`, three vertices when
/// `k = 4`, and for every triangle and every `f ∈ K_13` the third-edge map
/// `K_12 → K_23` injective.
pub fn check_multiplicity(g: &GkmGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(GkmError::Precondition("needs at least three vertices".into()));
    }
    let bundles = g.bundles();
    let mut sizes = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            sizes.insert(bundles.get(&(a, b)).map_or(0, |x| x.len()));
        }
    }
    if sizes.len() != 1 || sizes.contains(&0) {
        return Err(GkmError::lemma(
            Lemma::UniformSimplex,
            format!("bundle sizes {:?}", sizes.into_iter().collect::<Vec<_>>()),
        ));
    }
    let k = *sizes.iter().next().expect("one size");
    if ![1, 2, 4].contains(&k) {
        return Err(GkmError::lemma(Lemma::MultiplicityPowerOfTwo, format!("bundle size {k}")));
    }
    if k == 4 && n != 3 {
        return Err(GkmError::lemma(Lemma::CayleyTriangle, format!("bundle size 4 on {n} vertices")));
    }
    for (v1, v2, v3) in triples(n) {
        for (x, y, z) in [(v1, v2, v3), (v2, v1, v3), (v3, v1, v2)] {
            check_third_edge_map(g, x, y, z)?;
        }
    }
    Ok(k)
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c))))
}

/// For each `f ∈ K_{v1 v3}`, `e ↦` the third edge of the face through `e`, `f`
/// is an injection `K_{v1 v2} → K_{v2 v3}`.
fn check_third_edge_map(g: &GkmGraph, v1: usize, v2: usize, v3: usize) -> Result<()> {
    let k12 = g.bundle(v1, v2);
    let k13 = g.bundle(v1, v3);
    let k23 = g.bundle(v2, v3);
    for &f in &k13 {
        let mut images = BTreeSet::new();
        for &e in &k12 {
            let face = face_closure(g, e, f)?;
            let third: Vec<usize> = face.edges.iter().copied().filter(|x| k23.contains(x)).collect();
            if third.len() != 1 || face.vertex_count() != 3 {
                return Err(GkmError::lemma(
                    Lemma::UniformSimplex,
                    format!(
                        "the face through edges {e} and {f} at {} is not a triangle on {}{}{}",
                        g.vertex_name(v1),
                        g.vertex_name(v1),
                        g.vertex_name(v2),
                        g.vertex_name(v3)
                    ),
                ));
            }
            if !images.insert(third[0]) {
                return Err(GkmError::lemma(
                    Lemma::UniformSimplex,
                    format!("two edges of K_{}{} share a third edge", g.vertex_name(v1), g.vertex_name(v2)),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyFlags {
    pub gkm4: bool,
    pub almost_complex: bool,
    /// `false` forces the non-orientable branch.
    pub orientable: bool,
}

impl ClassifyFlags {
    pub fn standard() -> Self {
        Self { gkm4: false, almost_complex: false, orientable: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub lemma: Lemma,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub cross: CrossType,
    pub normalization: Option<NormalizedLabels>,
    pub trace: Vec<TraceEntry>,
    pub violated: Option<Lemma>,
}

struct Trace(Vec<TraceEntry>);

impl Trace {
    fn pass(&mut self, lemma: Lemma, detail: impl Into<String>) {
        self.0.push(TraceEntry { lemma, passed: true, detail: detail.into() });
    }

    fn reject(mut self, lemma: Lemma, detail: impl Into<String>) -> ClassificationResult {
        self.0.push(TraceEntry { lemma, passed: false, detail: detail.into() });
        ClassificationResult { cross: CrossType::NotRealizable, normalization: None, trace: self.0, violated: Some(lemma) }
    }

    fn accept(self, cross: CrossType, normalization: Option<NormalizedLabels>) -> ClassificationResult {
        ClassificationResult { cross, normalization, trace: self.0, violated: None }
    }
}

/// Runs the combinatorial pipeline and names the model space whose GKM graph
/// this is, or the first condition that fails.
///
/// Malformed input (unlabeled edges, irregular degrees, an orientable
/// single vertex) is an error rather than a verdict.
pub fn classify(g: &GkmGraph, flags: ClassifyFlags) -> Result<ClassificationResult> {
    let mut trace = Trace(Vec::new());
    let n = g.vertex_count();
    if !flags.orientable || !g.orientable() {
        if n != 1 {
            return Ok(trace.reject(Lemma::NonOrientableSingleVertex, format!("{n} vertices")));
        }
        trace.pass(Lemma::NonOrientableSingleVertex, "single vertex");
        return Ok(trace.accept(CrossType::RealProjective(g.half_dim()), None));
    }
    if n == 1 {
        return Err(GkmError::Precondition("empty graph: an orientable graph needs at least two vertices".into()));
    }
    if !g.is_labeled() {
        let e = g.edges().iter().position(|e| e.weight.is_none()).unwrap_or(0);
        return Err(GkmError::Unlabeled(e));
    }
    let k_needed = if flags.gkm4 { 4 } else { 3 };
    let report = validate(g, k_needed)?;
    if !report.pass {
        return Ok(trace.reject(
            Lemma::GkmCondition,
            format!("{k_needed}-independence fails at {}", report.failing_vertices().join(", ")),
        ));
    }
    trace.pass(Lemma::GkmCondition, format!("{k_needed}-independent"));
    let faces = check_face_sizes(g)?;
    if !faces.pass {
        let f = &faces.failures[0];
        return Ok(trace.reject(Lemma::FaceSize, format!("face on {} has {} vertices", f.vertices.join(""), f.size)));
    }
    trace.pass(Lemma::FaceSize, format!("{} biangles, {} triangles", faces.biangles, faces.triangles));
    if flags.almost_complex && faces.biangles > 0 {
        return Ok(trace.reject(Lemma::NoBiangle, format!("{} biangles", faces.biangles)));
    }
    if n == 2 {
        let m = g.edges().len();
        if flags.almost_complex {
            trace.pass(Lemma::NoBiangle, "single edge");
            return Ok(trace.accept(CrossType::ComplexProjective(m), None));
        }
        return Ok(trace.accept(CrossType::Sphere(m), None));
    }
    let k = match check_multiplicity(g) {
        Ok(k) => k,
        Err(GkmError::Lemma { lemma, detail }) => return Ok(trace.reject(lemma, detail)),
        Err(e) => return Err(e),
    };
    trace.pass(Lemma::UniformSimplex, format!("every pair joined by {k} edges"));
    trace.pass(Lemma::MultiplicityPowerOfTwo, format!("k = {k}"));
    if k == 4 {
        trace.pass(Lemma::CayleyTriangle, "three vertices");
    }
    if flags.gkm4 {
        if k != 1 {
            return Ok(trace.reject(Lemma::Gkm4Dichotomy, format!("bundle size {k} on {n} vertices")));
        }
        trace.pass(Lemma::Gkm4Dichotomy, "single edges");
    }
    if flags.almost_complex {
        trace.pass(Lemma::NoBiangle, "no biangles");
    }
    if k >= 2 {
        for (a, b, c) in triples(n) {
            match extract_sign_system(g, [a, b, c]) {
                Ok(_) => {}
                Err(GkmError::Lemma { lemma, detail }) => return Ok(trace.reject(lemma, detail)),
                Err(GkmError::SignSystemInfeasible(detail)) => return Ok(trace.reject(Lemma::SignSystem, detail)),
                Err(e) => return Err(e),
            }
        }
        trace.pass(Lemma::SignSystem, "every triangle");
    }
    let (lemma, result) = match k {
        1 => (Lemma::CpLabels, normalize_cp(g).map(|l| (CrossType::ComplexProjective(n - 1), l))),
        2 => (Lemma::HpLabels, normalize_hp(g).map(|l| (CrossType::QuaternionicProjective(n - 1), l))),
        _ => (Lemma::Op2Labels, normalize_op2(g).map(|l| (CrossType::CayleyPlane, l))),
    };
    match result {
        Ok((cross, labels)) => {
            trace.pass(lemma, "standard labels recovered");
            Ok(trace.accept(cross, Some(labels)))
        }
        Err(GkmError::NotCpNormalizable(d) | GkmError::NotHpNormalizable(d) | GkmError::NotOp2Normalizable(d)) => {
            Ok(trace.reject(lemma, d))
        }
        Err(e) => Err(e),
    }
}

/// Outcome of enumerating abstract sign systems of bundle size `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub k: usize,
    /// Permutation tuples `(σ_2, …, σ_k)` examined.
    pub explored: u64,
    pub complete: bool,
    /// Number of `(σ, ε)` systems passing every constraint.
    pub survivor_count: u64,
    /// Distinct permutation tuples with at least one valid `ε`.
    pub sigma_systems: usize,
    /// Listed when `k ≤ 4`.
    pub survivors: Vec<AbstractSignSystem>,
    /// Every surviving permutation tuple generates a regular elementary
    /// abelian group.
    pub all_regular_elementary_abelian: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbstractSignSystem {
    pub sigma: Vec<Vec<usize>>,
    pub epsilon: Vec<Vec<i8>>,
}

/// Enumerates `σ_1 = id, σ_2, …, σ_k` and signs `ε` (with `ε_i1 = 1`,
/// `δ_i1 = −1`, `δ_ij = 1` for `j > 1`) subject to: free involutive
/// `σ_j^{-1}σ_i`, `ε_{σ_j(i)j} = ε_ij`, and `ε_{σ_j(i)2} = −ε_{i2}` for
/// `j > 2`. `budget` caps the permutation tuples examined.
pub fn brute_force_k_exclusion(k: usize, budget: u64) -> Result<ExclusionReport> {
    if k == 0 {
        return Err(GkmError::Precondition("bundle size must be positive".into()));
    }
    let involutions = free_involutions(k);
    let mut state = Search { k, budget, explored: 0, complete: true, tuples: Vec::new() };
    let mut chosen = vec![(0..k).collect::<Vec<_>>()];
    state.extend(&involutions, &mut chosen);
    let mut survivors = Vec::new();
    let mut survivor_count = 0u64;
    let mut sigma_systems = 0;
    let mut all_regular = true;
    for sigma in &state.tuples {
        let Some(solutions) = epsilon_solutions(sigma, k <= 4) else { continue };
        sigma_systems += 1;
        all_regular &= regular_elementary_abelian(sigma);
        survivor_count += solutions.0;
        survivors.extend(solutions.1.into_iter().map(|epsilon| AbstractSignSystem { sigma: sigma.clone(), epsilon }));
    }
    Ok(ExclusionReport {
        k,
        explored: state.explored,
        complete: state.complete,
        survivor_count,
        sigma_systems,
        survivors,
        all_regular_elementary_abelian: all_regular,
    })
}

fn free_involutions(k: usize) -> Vec<Vec<usize>> {
    fn rec(p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match p.iter().position(|&x| x == usize::MAX) {
            None => out.push(p.clone()),
            Some(i) => {
                for j in i + 1..p.len() {
                    if p[j] == usize::MAX {
                        p[i] = j;
                        p[j] = i;
                        rec(p, out);
                        p[i] = usize::MAX;
                        p[j] = usize::MAX;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    if k % 2 == 0 {
        rec(&mut vec![usize::MAX; k], &mut out);
    }
    out
}

struct Search {
    k: usize,
    budget: u64,
    explored: u64,
    complete: bool,
    tuples: Vec<Vec<Vec<usize>>>,
}

impl Search {
    fn extend(&mut self, involutions: &[Vec<usize>], chosen: &mut Vec<Vec<usize>>) {
        if chosen.len() == self.k {
            self.tuples.push(chosen.clone());
            return;
        }
        for s in involutions {
            if self.explored >= self.budget {
                self.complete = false;
                return;
            }
            self.explored += 1;
            // σ_j^{-1}σ_i with both σ involutions is σ_jσ_i
            let compatible = chosen.iter().skip(1).all(|t| {
                let p: Vec<usize> = (0..self.k).map(|l| s[t[l]]).collect();
                (0..self.k).all(|l| p[l] != l && p[p[l]] == l)
            });
            if compatible {
                chosen.push(s.clone());
                self.extend(involutions, chosen);
                chosen.pop();
            }
        }
    }
}

/// Parity union-find over the `ε_ij`, `j > 1`. Returns the number of valid
/// `ε` matrices and, if requested, all of them.
fn epsilon_solutions(sigma: &[Vec<usize>], list: bool) -> Option<(u64, Vec<Vec<Vec<i8>>>)> {
    let k = sigma.len();
    let var = |i: usize, j: usize| i * k + j;
    let mut parent: Vec<usize> = (0..k * k).collect();
    let mut parity = vec![0u8; k * k];
    fn find(parent: &mut [usize], parity: &mut [u8], x: usize) -> (usize, u8) {
        if parent[x] == x {
            return (x, 0);
        }
        let (r, p) = find(parent, parity, parent[x]);
        parent[x] = r;
        parity[x] ^= p;
        (r, parity[x])
    }
    let mut union = |a: usize, b: usize, odd: u8| -> bool {
        let (ra, pa) = find(&mut parent, &mut parity, a);
        let (rb, pb) = find(&mut parent, &mut parity, b);
        if ra == rb {
            return pa ^ pb == odd;
        }
        parent[ra] = rb;
        parity[ra] = pa ^ pb ^ odd;
        true
    };
    for j in 1..k {
        for i in 0..k {
            if !union(var(sigma[j][i], j), var(i, j), 0) {
                return None;
            }
            if j > 1 && k > 1 && !union(var(sigma[j][i], 1), var(i, 1), 1) {
                return None;
            }
        }
    }
    let vars: Vec<usize> = (0..k).flat_map(|i| (1..k).map(move |j| var(i, j))).collect();
    let mut roots: Vec<usize> = vars.iter().map(|&v| find(&mut parent, &mut parity, v).0).collect();
    roots.sort_unstable();
    roots.dedup();
    let count = 1u64 << roots.len();
    let mut all = Vec::new();
    if list {
        for mask in 0..count {
            let mut eps = vec![vec![1i8; k]; k];
            for &v in &vars {
                let (r, p) = find(&mut parent, &mut parity, v);
                let bit = ((mask >> roots.binary_search(&r).expect("root")) & 1) as u8 ^ p;
                eps[v / k][v % k] = if bit == 0 { 1 } else { -1 };
            }
            all.push(eps);
        }
    }
    Some((count, all))
}
