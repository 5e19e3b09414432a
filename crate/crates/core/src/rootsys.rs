//! Root systems of classical type and `F_4`, Weyl groups by reflection
//! closure, and GKM graphs of equal-rank homogeneous spaces `G/K`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_traits::{One, Zero};

use crate::catalog::f4_lattice;
use crate::error::{GkmError, Result};
use crate::graph::{Edge, GkmGraph};
use crate::lattice::{canonicalize, Weight, WeightClass};
use crate::scalar::{rat, to_integer};
use crate::{Rational, RationalMatrix};

/// Bound on Weyl group enumeration when none is given explicitly.
pub const DEFAULT_WEYL_BOUND: usize = 10_000;

/// Reads `GKM_MAX_WEYL`, falling back to [`DEFAULT_WEYL_BOUND`].
pub fn weyl_bound_from_env() -> usize {
    std::env::var("GKM_MAX_WEYL").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_WEYL_BOUND)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Block {
    /// Cartan type letter and rank.
    Simple(char, usize),
    /// Torus factor of the given dimension (no roots).
    Torus(usize),
}

impl Block {
    fn ambient(&self) -> usize {
        match *self {
            Block::Simple('A', n) => n + 1,
            Block::Simple(_, n) => n,
            Block::Torus(d) => d,
        }
    }

    fn rank(&self) -> usize {
        match *self {
            Block::Simple(_, n) => n,
            Block::Torus(d) => d,
        }
    }

    /// Roots in the block's own coordinates, before any global scaling.
    fn roots(&self) -> Vec<Vec<i64>> {
        let unit = |n: usize, i: usize, c: i64| {
            let mut v = vec![0; n];
            v[i] = c;
            v
        };
        let pm_pairs = |n: usize| {
            let mut out = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        for s in [1, -1] {
                            let mut v = vec![0; n];
                            v[i] = 1;
                            v[j] = s;
                            out.push(v.clone());
                            out.push(v.iter().map(|x| -x).collect());
                        }
                    }
                }
            }
            out
        };
        let mut out: Vec<Vec<i64>> = match *self {
            Block::Torus(_) => vec![],
            Block::Simple('A', n) => {
                let m = n + 1;
                let mut v = Vec::new();
                for i in 0..m {
                    for j in 0..m {
                        if i != j {
                            let mut x = vec![0; m];
                            x[i] = 1;
                            x[j] = -1;
                            v.push(x);
                        }
                    }
                }
                v
            }
            Block::Simple('B', n) => {
                let mut v = pm_pairs(n);
                for i in 0..n {
                    v.push(unit(n, i, 1));
                    v.push(unit(n, i, -1));
                }
                v
            }
            Block::Simple('C', n) => {
                let mut v = pm_pairs(n);
                for i in 0..n {
                    v.push(unit(n, i, 2));
                    v.push(unit(n, i, -2));
                }
                v
            }
            Block::Simple('D', n) => pm_pairs(n),
            Block::Simple('F', 4) => {
                // doubled coordinates
                let mut v: Vec<Vec<i64>> = pm_pairs(4).into_iter().map(|x| x.iter().map(|c| 2 * c).collect()).collect();
                for i in 0..4 {
                    v.push(unit(4, i, 2));
                    v.push(unit(4, i, -2));
                }
                for mask in 0u32..16 {
                    v.push((0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
                }
                v
            }
            Block::Simple(..) => unreachable!("validated at parse time"),
        };
        out.sort();
        out.dedup();
        out
    }

    fn scale(&self) -> i64 {
        if *self == Block::Simple('F', 4) {
            2
        } else {
            1
        }
    }
}

fn parse_blocks(name: &str) -> Result<Vec<Block>> {
    let trimmed = name.trim();
    if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("none") {
        return Ok(vec![]);
    }
    trimmed
        .split(['x', 'X', '*'])
        .map(|part| {
            let part = part.trim();
            let bad = || GkmError::RootSystem(format!("unknown root system {part:?} in {name:?}"));
            let mut chars = part.chars();
            let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
            let rest: String = chars.collect();
            if letter == 'T' {
                let d = if rest.is_empty() { 0 } else { rest.parse().map_err(|_| bad())? };
                return Ok(Block::Torus(d));
            }
            let n: usize = rest.parse().map_err(|_| bad())?;
            let ok = match letter {
                'A' | 'B' | 'C' => n >= 1,
                'D' => n >= 2,
                'F' => n == 4,
                _ => false,
            };
            if ok {
                Ok(Block::Simple(letter, n))
            } else {
                Err(bad())
            }
        })
        .collect()
}

/// A root system in an ambient integer lattice. Roots of `F_4` (and of any
/// subsystem taken inside it) are stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    name: String,
    ambient: usize,
    rank: usize,
    scale: i64,
    roots: Vec<Weight>,
    /// Linear map from ambient coordinates to torus weight coordinates.
    projection: Vec<Vec<i64>>,
}

impl RootSystem {
    /// Parses a Cartan type such as `A2`, `C3`, `F4` or a product such as
    /// `C1xC1xC1`. `T<d>` adds a torus factor; `T` alone or `none` is empty.
    pub fn parse(name: &str) -> Result<Self> {
        let blocks = parse_blocks(name)?;
        if blocks.is_empty() || blocks.iter().all(|b| matches!(b, Block::Torus(_))) {
            return Err(GkmError::RootSystem(format!("{name:?} has no roots")));
        }
        let scale = blocks.iter().map(Block::scale).max().unwrap_or(1);
        Self::assemble(name, &blocks, scale)
    }

    /// Parses `name` as a subsystem of `g`: same ambient space and scale. A
    /// bare `T` (or `none`) fills the remaining dimensions with a torus.
    pub fn parse_subsystem(name: &str, g: &RootSystem) -> Result<Self> {
        let mut blocks = parse_blocks(name)?;
        let used: usize = blocks.iter().map(Block::ambient).sum();
        if used > g.ambient {
            return Err(GkmError::RootSystem(format!("{name:?} does not fit in the ambient space of {}", g.name)));
        }
        let fill = g.ambient - used;
        if let Some(t) = blocks.iter_mut().find(|b| **b == Block::Torus(0)) {
            *t = Block::Torus(fill);
        } else if fill > 0 && blocks.is_empty() {
            blocks.push(Block::Torus(fill));
        }
        let total: usize = blocks.iter().map(Block::ambient).sum();
        if total != g.ambient {
            return Err(GkmError::RootSystem(format!(
                "{name:?} spans {total} ambient dimensions, {} has {}",
                g.name, g.ambient
            )));
        }
        let mut k = Self::assemble(name, &blocks, g.scale)?;
        k.projection = g.projection.clone();
        k.rank = g.rank;
        Ok(k)
    }

    fn assemble(name: &str, blocks: &[Block], scale: i64) -> Result<Self> {
        let ambient: usize = blocks.iter().map(Block::ambient).sum();
        let rank: usize = blocks.iter().map(Block::rank).sum();
        let mut roots = Vec::new();
        let mut projection = Vec::new();
        let mut offset = 0;
        for b in blocks {
            let m = b.ambient();
            let factor = scale / b.scale();
            for r in b.roots() {
                let mut v = vec![0; ambient];
                for (i, x) in r.iter().enumerate() {
                    v[offset + i] = x * factor;
                }
                roots.push(Weight(v));
            }
            match b {
                Block::Simple('A', n) => {
                    // characters of the maximal torus of SU(n+1): x ↦ (x_i − x_{n+1})
                    for i in 0..*n {
                        let mut row = vec![0; ambient];
                        row[offset + i] = 1;
                        row[offset + n] = -1;
                        projection.push(row);
                    }
                }
                _ => {
                    for i in 0..m {
                        let mut row = vec![0; ambient];
                        row[offset + i] = 1;
                        projection.push(row);
                    }
                }
            }
            offset += m;
        }
        roots.sort();
        Ok(Self { name: name.trim().to_string(), ambient, rank, scale, roots, projection })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension of the ambient coordinate space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Rank of the torus the weights live on.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Factor by which stored roots exceed the true ones.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.roots.binary_search(w).is_ok()
    }

    /// One root from each `±` pair: those whose first nonzero coordinate is
    /// positive.
    pub fn positive_roots(&self) -> Vec<Weight> {
        self.roots.iter().filter(|r| canonicalize(r).map_or(false, |c| c.rep() == *r)).cloned().collect()
    }

    /// Torus weight coordinates of an ambient vector.
    pub fn project(&self, w: &Weight) -> Weight {
        Weight(self.projection.iter().map(|row| row.iter().zip(w.coords()).map(|(a, b)| a * b).sum()).collect())
    }
}

/// An element of a Weyl group as an exact orthogonal matrix in ambient
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement(pub RationalMatrix);

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement(RationalMatrix::identity(n))
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement(self.0.mul(&other.0))
    }

    /// Orthogonal, so the inverse is the transpose.
    pub fn inverse(&self) -> WeylElement {
        WeylElement(self.0.transpose())
    }

    pub fn apply(&self, w: &Weight) -> Vec<Rational> {
        let v: Vec<Rational> = w.coords().iter().map(|&x| rat(x)).collect();
        self.0.apply(&v)
    }

    /// Image of an integer vector that is known to stay integral (roots).
    pub fn apply_integral(&self, w: &Weight) -> Result<Weight> {
        self.apply(w)
            .iter()
            .map(|q| to_integer(q).ok_or_else(|| GkmError::Internal(format!("image of {w} is not integral"))))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    pub fn is_identity(&self) -> bool {
        self.0 == RationalMatrix::identity(self.0.rows())
    }
}

/// `σ_α(x) = x − 2⟨x,α⟩/⟨α,α⟩ · α` for the standard inner product.
pub fn reflection(alpha: &Weight) -> Result<WeylElement> {
    if alpha.is_zero() {
        return Err(GkmError::ZeroWeight);
    }
    let n = alpha.rank();
    let norm = alpha.dot(alpha);
    let mut m = RationalMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { Rational::one() } else { Rational::zero() };
            let v = delta - Rational::new((2 * alpha.coords()[i] * alpha.coords()[j]).into(), norm.into());
            m.set(i, j, v);
        }
    }
    Ok(WeylElement(m))
}

/// Breadth-first closure of the reflections in the roots of `rs`, starting
/// from the identity. Errors once more than `bound` elements are found.
pub fn weyl_group(rs: &RootSystem, bound: usize) -> Result<Vec<WeylElement>> {
    let gens: Vec<WeylElement> = rs.positive_roots().iter().map(reflection).collect::<Result<_>>()?;
    closure(rs.ambient(), &gens, bound)
}

fn closure(n: usize, gens: &[WeylElement], bound: usize) -> Result<Vec<WeylElement>> {
    let id = WeylElement::identity(n);
    let mut seen: HashSet<WeylElement> = HashSet::new();
    seen.insert(id.clone());
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for s in gens {
            let next = s.compose(&w);
            if !seen.contains(&next) {
                if order.len() >= bound {
                    return Err(GkmError::WeylBoundExceeded(bound));
                }
                seen.insert(next.clone());
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// `(Δ_G, Δ_K)` for an equal-rank pair `K ⊂ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystemPair {
    g: RootSystem,
    k: RootSystem,
}

impl RootSystemPair {
    pub fn new(g: RootSystem, k: RootSystem) -> Result<Self> {
        if g.ambient != k.ambient || g.scale != k.scale {
            return Err(GkmError::RootSystem(format!("{} and {} live in different ambient spaces", g.name, k.name)));
        }
        if let Some(r) = k.roots.iter().find(|r| !g.contains(r)) {
            return Err(GkmError::RootSystem(format!("root {r} of {} is not a root of {}", k.name, g.name)));
        }
        if (g.roots.len() - k.roots.len()) % 2 != 0 {
            return Err(GkmError::RootSystem("complementary root count is odd".into()));
        }
        Ok(Self { g, k })
    }

    /// Parses `G` and `K` by name, `K` inside the ambient space of `G`.
    pub fn parse(g: &str, k: &str) -> Result<Self> {
        let g = RootSystem::parse(g)?;
        let k = RootSystem::parse_subsystem(k, &g)?;
        Self::new(g, k)
    }

    pub fn g(&self) -> &RootSystem {
        &self.g
    }

    pub fn k(&self) -> &RootSystem {
        &self.k
    }

    /// Positive representatives of `Δ_G \ Δ_K`.
    pub fn complement(&self) -> Vec<Weight> {
        self.g.positive_roots().into_iter().filter(|r| !self.k.contains(r)).collect()
    }
}

/// Cosets `wW_K` of `W_G`, each listed with its members; the first member is
/// the representative. Cosets are ordered by first appearance in `group`.
pub fn cosets(group: &[WeylElement], subgroup: &[WeylElement]) -> Vec<Vec<usize>> {
    let index: HashMap<&WeylElement, usize> = group.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut assigned = vec![false; group.len()];
    let mut out = Vec::new();
    for (i, w) in group.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let mut members: Vec<usize> = subgroup.iter().map(|k| index[&w.compose(k)]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            assigned[m] = true;
        }
        members.retain(|&m| m != i);
        members.insert(0, i);
        out.push(members);
    }
    out
}

/// GKM graph of `G/K` for a maximal torus of `K`: one vertex per coset
/// `wW_K`; at the coset of `w` the weights are `w(α)` for `α ∈ Δ_G \ Δ_K`,
/// and the edge with weight `w(α)` joins `wW_K` to `σ_{w(α)} w W_K`.
pub fn homogeneous_gkm(pair: &RootSystemPair, bound: usize) -> Result<GkmGraph> {
    let wg = weyl_group(pair.g(), bound)?;
    let k_gens: Vec<WeylElement> = pair.k().positive_roots().iter().map(reflection).collect::<Result<_>>()?;
    let wk = closure(pair.g().ambient(), &k_gens, bound)?;
    if wg.len() % wk.len() != 0 {
        return Err(GkmError::Internal("subgroup order does not divide group order".into()));
    }
    let cos = cosets(&wg, &wk);
    let mut coset_of = vec![0; wg.len()];
    for (c, members) in cos.iter().enumerate() {
        for &m in members {
            coset_of[m] = c;
        }
    }
    let index: HashMap<&WeylElement, usize> = wg.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let complement = pair.complement();
    let reflections: Vec<WeylElement> = complement.iter().map(reflection).collect::<Result<_>>()?;
    let mut found: BTreeMap<(usize, usize), Vec<WeightClass>> = BTreeMap::new();
    for (c, members) in cos.iter().enumerate() {
        let w = &wg[members[0]];
        for (alpha, s) in complement.iter().zip(&reflections) {
            let image = w.apply_integral(alpha)?;
            let cls = canonicalize(&pair.g().project(&image))?;
            let other = coset_of[index[&w.compose(s)]];
            if other == c {
                return Err(GkmError::Internal(format!("reflection in {alpha} fixes a coset")));
            }
            let key = (c.min(other), c.max(other));
            let list = found.entry(key).or_default();
            if c < other {
                list.push(cls);
            } else if !list.contains(&cls) {
                return Err(GkmError::Internal(format!("edge with weight {cls} is not seen from both ends")));
            }
        }
    }
    let mut edges = Vec::new();
    for ((a, b), classes) in found {
        for (i, cls) in classes.into_iter().enumerate() {
            edges.push(Edge::new(a, b, cls, i as u32));
        }
    }
    let names = (0..cos.len()).map(|i| format!("w{i}")).collect();
    let g = GkmGraph::new(pair.g().rank(), complement.len(), true, names, edges, vec![])?
        .with_weight_scale(pair.g().scale());
    if pair.g().name().eq_ignore_ascii_case("F4") {
        g.with_lattice(f4_lattice())
    } else {
        Ok(g)
    }
}
