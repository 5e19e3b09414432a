//! Equivariant cohomology of a GKM graph as the ring of congruence tuples,
//! ordinary Betti numbers by dividing out `H^*(BT)`, Pontryagin classes, and
//! the coprimality preconditions for integer coefficients.
//!
//! Degrees are polynomial degrees: `dims[d]` is the dimension of the part of
//! cohomological degree `2d`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GkmError, Result};
use crate::graph::{validate, GkmGraph};
use crate::lattice::{WeightClass, WeightLattice};
use crate::linalg::EchelonBasis;
use crate::poly::{MonomialBasis, Polynomial};
use crate::scalar::{fmt_rational, rat};
use crate::{Rational, RationalPolynomial};

/// Graded dimensions; `dims[d]` belongs to cohomological degree `2d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub dims: Vec<usize>,
}

impl GradedDims {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Pairs `(cohomological degree, dimension)` with nonzero dimension.
    pub fn nonzero(&self) -> Vec<(usize, usize)> {
        self.dims.iter().enumerate().filter(|(_, &b)| b > 0).map(|(d, &b)| (2 * d, b)).collect()
    }
}

/// A tuple of polynomials indexed by the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    pub components: Vec<RationalPolynomial>,
}

impl EquivariantClass {
    /// `true` iff `f_u − f_v` is divisible by the weight of every edge `uv`.
    pub fn satisfies_congruences(&self, g: &GkmGraph) -> Result<bool> {
        for (i, e) in g.edges().iter().enumerate() {
            let diff = self.components[e.u].sub(&self.components[e.v]);
            if !restrict_to_kernel(&diff, g.weight(i)?).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Pullback of `p` along a parametrization of `ker α`: with `q` the first
/// coordinate where `α` is nonzero, `x_j = α_q y_j` for `j ≠ q` and
/// `x_q = −Σ_{j≠q} α_j y_j`. The result is zero iff `α` divides `p`.
pub fn restrict_to_kernel(p: &RationalPolynomial, alpha: &WeightClass) -> RationalPolynomial {
    let images = kernel_images(alpha);
    p.substitute(&images)
}

fn kernel_images(alpha: &WeightClass) -> Vec<RationalPolynomial> {
    let a = alpha.rep().coords();
    let r = a.len();
    let q = a.iter().position(|&x| x != 0).expect("nonzero weight");
    let target = r - 1;
    let y = |j: usize| if j < q { j } else { j - 1 };
    (0..r)
        .map(|j| {
            if j == q {
                let mut p = Polynomial::zero(target);
                for (k, &ak) in a.iter().enumerate() {
                    if k != q && ak != 0 {
                        let mut m = vec![0u32; target];
                        m[y(k)] = 1;
                        p.add_term(m, rat(-ak));
                    }
                }
                p
            } else {
                let mut m = vec![0u32; target];
                m[y(j)] = 1;
                let mut p = Polynomial::zero(target);
                p.add_term(m, rat(a[q]));
                p
            }
        })
        .collect()
}

/// Spanning forest in canonical vertex order, with the distinct weight
/// classes of every adjacent pair.
struct Forest {
    rank: usize,
    position: Vec<usize>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    /// BFS order of each component, roots first.
    bfs: Vec<usize>,
    components: usize,
    /// Distinct classes on the tree edge from each non-root to its parent.
    tree_classes: Vec<Vec<WeightClass>>,
    /// Adjacent pairs not joined by a tree edge.
    extra: Vec<(usize, usize, Vec<WeightClass>)>,
}

impl Forest {
    fn new(g: &GkmGraph) -> Result<Self> {
        let n = g.vertex_count();
        let order = g.canonical_vertex_order();
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut classes: BTreeMap<(usize, usize), Vec<WeightClass>> = BTreeMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            let w = g.weight(i)?.clone();
            let list = classes.entry(e.endpoints()).or_default();
            if !list.contains(&w) {
                list.push(w);
            }
        }
        for list in classes.values_mut() {
            list.sort();
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut bfs = Vec::with_capacity(n);
        let mut components = 0;
        for &root in &order {
            if seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            let start = bfs.len();
            bfs.push(root);
            let mut i = start;
            while i < bfs.len() {
                let x = bfs[i];
                let mut nbrs: Vec<usize> = g.neighbors(x).into_iter().collect();
                nbrs.sort_by_key(|&y| position[y]);
                for y in nbrs {
                    if !seen[y] {
                        seen[y] = true;
                        parent[y] = Some(x);
                        depth[y] = depth[x] + 1;
                        bfs.push(y);
                    }
                }
                i += 1;
            }
        }
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let tree_classes =
            (0..n).map(|v| parent[v].map_or_else(Vec::new, |p| classes[&key(p, v)].clone())).collect();
        let extra = classes
            .iter()
            .filter(|((a, b), _)| parent[*a] != Some(*b) && parent[*b] != Some(*a))
            .map(|((a, b), c)| (*a, *b, c.clone()))
            .collect();
        Ok(Self { rank: g.rank(), position, parent, depth, bfs, components, tree_classes, extra })
    }

    /// Tree vertices (identified with the edge to their parent) on the paths
    /// from `u` and from `v` up to their common ancestor.
    fn paths(&self, mut u: usize, mut v: usize) -> (Vec<usize>, Vec<usize>) {
        let (mut pu, mut pv) = (Vec::new(), Vec::new());
        while u != v {
            if self.depth[u] >= self.depth[v] {
                pu.push(u);
                u = self.parent[u].expect("same component");
            } else {
                pv.push(v);
                v = self.parent[v].expect("same component");
            }
        }
        (pu, pv)
    }
}

fn product(classes: &[WeightClass], r: usize) -> RationalPolynomial {
    classes.iter().fold(Polynomial::one(r), |acc, c| acc.mul(&Polynomial::linear(c.rep().coords())))
}

struct Block {
    vertex: usize,
    offset: usize,
    basis: MonomialBasis,
}

/// The congruence system in one degree, parametrized by the forest.
struct DegreeSystem {
    d: u32,
    blocks: Vec<Block>,
    params: usize,
    constraints: EchelonBasis<Rational>,
}

impl DegreeSystem {
    fn dim(&self, forest: &Forest) -> usize {
        forest.components * MonomialBasis::new(forest.rank, self.d).len() + self.params - self.constraints.rank()
    }
}

fn build_system(forest: &Forest, d: u32) -> DegreeSystem {
    let r = forest.rank;
    let mut blocks = Vec::new();
    let mut offset = 0;
    let mut block_of = HashMap::new();
    for &v in &forest.bfs {
        if forest.parent[v].is_none() {
            continue;
        }
        let t = forest.tree_classes[v].len() as u32;
        if d < t {
            continue;
        }
        let basis = MonomialBasis::new(r, d - t);
        block_of.insert(v, blocks.len());
        let len = basis.len();
        blocks.push(Block { vertex: v, offset, basis });
        offset += len;
    }
    let params = offset;
    let mut constraints = EchelonBasis::new(params);
    let target = MonomialBasis::new(r - 1, d);
    let mut restricted_products: HashMap<(usize, WeightClass), RationalPolynomial> = HashMap::new();
    for (u, v, classes) in &forest.extra {
        let (pu, pv) = forest.paths(*u, *v);
        for alpha in classes {
            let images = kernel_images(alpha);
            let mut rows = vec![vec![Rational::zero(); params]; target.len()];
            for (path, sign) in [(&pu, 1i64), (&pv, -1i64)] {
                for &c in path.iter() {
                    let Some(&bi) = block_of.get(&c) else { continue };
                    let rp = restricted_products
                        .entry((c, alpha.clone()))
                        .or_insert_with(|| product(&forest.tree_classes[c], r).substitute(&images))
                        .clone();
                    if rp.is_zero() {
                        continue;
                    }
                    let block = &blocks[bi];
                    for (i, m) in block.basis.monomials().iter().enumerate() {
                        let mut mono = Polynomial::zero(r);
                        mono.add_term(m.clone(), Rational::one());
                        let img = rp.mul(&mono.substitute(&images));
                        for (mm, coef) in img.terms() {
                            let row = target.index_of(mm).expect("homogeneous of degree d");
                            let col = block.offset + i;
                            rows[row][col] = rows[row][col].clone() + rat(sign) * coef.clone();
                        }
                    }
                }
            }
            for row in rows {
                if row.iter().any(|x| !x.is_zero()) {
                    constraints.insert(row);
                }
            }
        }
    }
    DegreeSystem { d, blocks, params, constraints }
}

fn check_gkm2(g: &GkmGraph) -> Result<()> {
    let report = validate(g, 2)?;
    if report.pass {
        Ok(())
    } else {
        Err(GkmError::Precondition(format!(
            "weights are not pairwise independent at {}",
            report.failing_vertices().join(", ")
        )))
    }
}

/// Dimensions of the degree-`d` parts of `H^*_T` for `d = 0..=cutoff`: the
/// vertex tuples of degree-`d` polynomials with `α | f_u − f_v` for every
/// edge `uv` of weight `α`. Star edges impose nothing.
pub fn equivariant_dims(g: &GkmGraph, cutoff: usize) -> Result<GradedDims> {
    check_gkm2(g)?;
    let forest = Forest::new(g)?;
    let dims = (0..=cutoff as u32).map(|d| build_system(&forest, d).dim(&forest)).collect();
    Ok(GradedDims { dims })
}

/// `b(t) = dims(t) · (1 − t)^r`, with `t` of cohomological degree 2.
pub fn series_quotient(dims: &[usize], r: usize) -> Vec<i64> {
    let binom = |n: usize, k: usize| -> i64 { (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64) };
    (0..dims.len())
        .map(|d| (0..=d.min(r)).map(|i| if i % 2 == 0 { 1 } else { -1 } * binom(r, i) * dims[d - i] as i64).sum())
        .collect()
}

/// Betti numbers `b[d] = dim H^{2d}(M)` for `d ≤ cutoff`, assuming
/// equivariant formality, with consistency checks: nonnegative, and for
/// `cutoff ≥ half_dim` vanishing above `half_dim` and summing to the number
/// of vertices.
pub fn betti_numbers(g: &GkmGraph, cutoff: usize) -> Result<GradedDims> {
    let dims = equivariant_dims(g, cutoff)?;
    let b = series_quotient(&dims.dims, g.rank());
    if let Some((d, x)) = b.iter().enumerate().find(|(_, &x)| x < 0) {
        return Err(GkmError::NotFormal(format!("coefficient {x} in degree {}", 2 * d)));
    }
    if cutoff >= g.half_dim() {
        if let Some((d, _)) = b.iter().enumerate().skip(g.half_dim() + 1).find(|(_, &x)| x != 0) {
            return Err(GkmError::NotFormal(format!("nonzero Betti number in degree {} above the dimension", 2 * d)));
        }
        let total: i64 = b.iter().sum();
        if total != g.vertex_count() as i64 {
            return Err(GkmError::NotFormal(format!("total Betti number {total}, expected {}", g.vertex_count())));
        }
    }
    Ok(GradedDims { dims: b.into_iter().map(|x| x as usize).collect() })
}

/// True weights (stored weights divided by the graph's scale) at `v`.
fn true_linear_forms(g: &GkmGraph, v: usize) -> Result<Vec<RationalPolynomial>> {
    let scale = rat(g.weight_scale());
    Ok(g
        .weights_at(v)?
        .iter()
        .map(|w| Polynomial::<Rational>::linear(w.rep().coords()).scale(&(Rational::one() / scale.clone())))
        .collect())
}

/// Per-vertex `∏_j (1 + α_j²)` over the isotropy weights, truncated to
/// polynomial degree `2·top`. Indexed by vertex.
pub fn equivariant_pontryagin(g: &GkmGraph, top: usize) -> Result<EquivariantClass> {
    let n_edges: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    if n_edges.iter().any(|&d| d != g.half_dim()) {
        return Err(GkmError::Precondition("graph is not regular of degree half_dim".into()));
    }
    if top > g.half_dim() {
        return Err(GkmError::Precondition(format!("top {top} exceeds half_dim {}", g.half_dim())));
    }
    let r = g.rank();
    let limit = 2 * top as u32;
    let components = (0..g.vertex_count())
        .map(|v| {
            Ok(true_linear_forms(g, v)?.iter().fold(Polynomial::one(r), |acc, a| {
                let factor = Polynomial::one(r).add(&a.mul(a));
                acc.mul_truncated(&factor, limit)
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivariantClass { components })
}

/// Coordinates of `p_j` in a basis of `H^{4j}(M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinaryComponent {
    pub j: usize,
    /// Cohomological degree `4j`.
    pub degree: usize,
    pub quotient_dim: usize,
    /// Rationals written as `"a"` or `"a/b"`.
    pub coordinates: Vec<String>,
}

impl OrdinaryComponent {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|c| c == "0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PontryaginClass {
    pub equivariant: EquivariantClass,
    pub ordinary: Vec<OrdinaryComponent>,
}

/// Basis of the degree-`d` congruence tuples, in the tuple coordinates
/// `monomial_index · n + canonical_position`.
fn tuple_basis(g: &GkmGraph, forest: &Forest, d: u32) -> Vec<Vec<Rational>> {
    let r = forest.rank;
    let n = g.vertex_count();
    let full = MonomialBasis::new(r, d);
    let mut sys = build_system(forest, d);
    let kernel = sys.constraints.kernel();
    let index = |mono: usize, v: usize| mono * n + forest.position[v];
    let mut out = Vec::new();
    // constants along each component, one per monomial
    for &root in forest.bfs.iter().filter(|&&v| forest.parent[v].is_none()) {
        for m in 0..full.len() {
            let mut t = vec![Rational::zero(); full.len() * n];
            for &v in &forest.bfs {
                let mut x = v;
                while let Some(p) = forest.parent[x] {
                    x = p;
                }
                if x == root {
                    t[index(m, v)] = Rational::one();
                }
            }
            out.push(t);
        }
    }
    let products: HashMap<usize, RationalPolynomial> =
        sys.blocks.iter().map(|b| (b.vertex, product(&forest.tree_classes[b.vertex], r))).collect();
    for h in kernel {
        let mut f: Vec<RationalPolynomial> = vec![Polynomial::zero(r); n];
        let mut own: HashMap<usize, RationalPolynomial> = HashMap::new();
        for b in &sys.blocks {
            let coords = &h[b.offset..b.offset + b.basis.len()];
            own.insert(b.vertex, products[&b.vertex].mul(&b.basis.polynomial(coords)));
        }
        for &v in &forest.bfs {
            if let Some(p) = forest.parent[v] {
                let mut fv = f[p].clone();
                if let Some(x) = own.get(&v) {
                    fv = fv.add(x);
                }
                f[v] = fv;
            }
        }
        let mut t = vec![Rational::zero(); full.len() * n];
        for v in 0..n {
            for (m, c) in f[v].terms() {
                t[index(full.index_of(m).expect("degree d"), v)] = c.clone();
            }
        }
        out.push(t);
    }
    sys.blocks.clear();
    out
}

fn multiply_by_variable(t: &[Rational], from: &MonomialBasis, to: &MonomialBasis, i: usize, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); to.len() * n];
    for (m, mono) in from.monomials().iter().enumerate() {
        let mut next = mono.clone();
        next[i] += 1;
        let target = to.index_of(&next).expect("degree d");
        for v in 0..n {
            let x = &t[m * n + v];
            if !x.is_zero() {
                out[target * n + v] = x.clone();
            }
        }
    }
    out
}

/// `p_j` in `H^{4j}(M) = K_{2j} / (x_1, …, x_r)·K_{2j−1}` for every
/// `4j ≤ 2·half_dim`. The quotient basis is the reduced echelon basis of the
/// complement of the submodule's pivot columns, so coordinates depend only on
/// the labeled graph.
pub fn ordinary_pontryagin(g: &GkmGraph) -> Result<PontryaginClass> {
    let m = g.half_dim();
    let top = m / 2;
    let betti = betti_numbers(g, m)?;
    let equivariant = equivariant_pontryagin(g, top)?;
    if !equivariant.satisfies_congruences(g)? {
        return Err(GkmError::Internal("equivariant Pontryagin class violates a congruence".into()));
    }
    let forest = Forest::new(g)?;
    let r = g.rank();
    let n = g.vertex_count();
    let mut ordinary = Vec::new();
    let mut previous: Option<Vec<Vec<Rational>>> = None;
    let mut prev_degree = 0u32;
    for j in 0..=top {
        let d = 2 * j as u32;
        let basis_d = MonomialBasis::new(r, d);
        let k_d = tuple_basis(g, &forest, d);
        let mut sub = EchelonBasis::new(basis_d.len() * n);
        if d > 0 {
            let lower_degree = d - 1;
            let lower = if prev_degree == lower_degree && previous.is_some() {
                previous.take().expect("checked")
            } else {
                tuple_basis(g, &forest, lower_degree)
            };
            let basis_lower = MonomialBasis::new(r, lower_degree);
            for t in &lower {
                for i in 0..r {
                    sub.insert(multiply_by_variable(t, &basis_lower, &basis_d, i, n));
                }
            }
        }
        sub.make_reduced();
        let mut complement = EchelonBasis::new(basis_d.len() * n);
        for t in &k_d {
            let mut v = t.clone();
            sub.reduce(&mut v);
            complement.insert(v);
        }
        complement.make_reduced();
        if complement.rank() != betti.dims[d as usize] {
            return Err(GkmError::Internal(format!(
                "quotient in degree {} has dimension {}, Betti number is {}",
                2 * d,
                complement.rank(),
                betti.dims[d as usize]
            )));
        }
        let mut p = vec![Rational::zero(); basis_d.len() * n];
        for (v, poly) in equivariant.components.iter().enumerate() {
            for (mono, c) in poly.homogeneous_part(d).terms() {
                p[basis_d.index_of(mono).expect("degree d") * n + forest.position[v]] = c.clone();
            }
        }
        sub.reduce(&mut p);
        let coords = complement.reduce_with_coefficients(&mut p);
        if p.iter().any(|x| !x.is_zero()) {
            return Err(GkmError::Internal(format!("p_{j} is not a congruence tuple")));
        }
        ordinary.push(OrdinaryComponent {
            j,
            degree: 4 * j,
            quotient_dim: complement.rank(),
            coordinates: coords.iter().map(fmt_rational).collect(),
        });
        if d + 1 <= 2 * top as u32 {
            previous = Some(tuple_basis(g, &forest, d + 1));
            prev_degree = d + 1;
        }
    }
    Ok(PontryaginClass { equivariant, ordinary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexIntegrality {
    pub vertex: String,
    pub coprime: bool,
    pub primitive: bool,
    /// Pairs of weights that are not coprime.
    pub offending: Vec<(WeightClass, WeightClass)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerReport {
    pub pass: bool,
    pub all_primitive: bool,
    pub vertices: Vec<VertexIntegrality>,
}

/// Pairwise coprimality of the weights at every vertex, and primitivity,
/// relative to the graph's weight lattice (`Z^r` unless one is attached).
pub fn integer_precondition(g: &GkmGraph) -> Result<IntegerReport> {
    if !g.orientable() {
        return Err(GkmError::NonOrientable);
    }
    let standard = WeightLattice::standard(g.rank());
    let lattice = g.lattice().unwrap_or(&standard);
    let mut vertices = Vec::new();
    for v in 0..g.vertex_count() {
        let ws = g.weights_at(v)?;
        let scales = ws.iter().map(|w| lattice.decompose(w).map(|d| d.scale)).collect::<Result<Vec<_>>>()?;
        let mut offending = Vec::new();
        for i in 0..ws.len() {
            for j in i + 1..ws.len() {
                if num_integer::gcd(scales[i], scales[j]) != 1 {
                    offending.push((ws[i].clone(), ws[j].clone()));
                }
            }
        }
        vertices.push(VertexIntegrality {
            vertex: g.vertex_name(v).to_string(),
            coprime: offending.is_empty(),
            primitive: scales.iter().all(|&s| s == 1),
            offending,
        });
    }
    Ok(IntegerReport {
        pass: vertices.iter().all(|v| v.coprime),
        all_primitive: vertices.iter().all(|v| v.primitive),
        vertices,
    })
}
