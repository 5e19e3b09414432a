//! GKM graph data model, GKM_k validation and two-dimensional faces.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{GkmError, Result};
use crate::lattice::{self, WeightClass, WeightLattice};

/// An edge between two distinct vertices. Parallel edges are told apart by
/// `index`, never by weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// `None` for shape-only graphs.
    pub weight: Option<WeightClass>,
    pub index: u32,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: WeightClass, index: u32) -> Self {
        Self { u, v, weight: Some(weight), index }
    }

    pub fn unlabeled(u: usize, v: usize, index: u32) -> Self {
        Self { u, v, weight: None, index }
    }

    /// Endpoints in increasing order.
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    pub fn is_incident(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Marker for an `RP^2` stratum through a fixed point (non-orientable case).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarEdge {
    pub vertex: usize,
    pub weight: Option<WeightClass>,
}

/// A GKM graph: one vertex per fixed point, one labeled edge per invariant
/// two-sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    half_dim: usize,
    orientable: bool,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    star_edges: Vec<StarEdge>,
    weight_scale: i64,
    lattice: Option<WeightLattice>,
}

impl GkmGraph {
    /// Builds a graph and checks the invariants that every consumer relies
    /// on: distinct vertex ids, edges between existing distinct vertices,
    /// nonzero weights of the right rank, unique parallel-edge indices, and
    /// star edges only on non-orientable graphs. Degree regularity is left to
    /// [`validate`].
    pub fn new(
        rank: usize,
        half_dim: usize,
        orientable: bool,
        vertices: Vec<String>,
        edges: Vec<Edge>,
        star_edges: Vec<StarEdge>,
    ) -> Result<Self> {
        let mut problems = Vec::new();
        if rank == 0 {
            problems.push("rank must be at least 1".to_string());
        }
        let mut seen = BTreeSet::new();
        for name in &vertices {
            if !seen.insert(name.as_str()) {
                problems.push(format!("duplicate vertex id {name:?}"));
            }
        }
        let n = vertices.len();
        let mut slots = BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                problems.push(format!("edge {i} references a missing vertex"));
                continue;
            }
            if e.u == e.v {
                problems.push(format!("edge {i} is a loop at {}", vertices[e.u]));
            }
            if let Some(w) = &e.weight {
                if w.rank() != rank {
                    problems.push(format!("edge {i} weight {} has {} coordinates, expected {rank}", w.rep(), w.rank()));
                }
            }
            if !slots.insert((e.endpoints(), e.index)) {
                problems.push(format!(
                    "edge {i} repeats index {} between {} and {}",
                    e.index, vertices[e.u], vertices[e.v]
                ));
            }
        }
        for (i, s) in star_edges.iter().enumerate() {
            if s.vertex >= n {
                problems.push(format!("star edge {i} references a missing vertex"));
            }
            if let Some(w) = &s.weight {
                if w.rank() != rank {
                    problems.push(format!("star edge {i} weight {} has {} coordinates, expected {rank}", w.rep(), w.rank()));
                }
            }
        }
        if !star_edges.is_empty() && orientable {
            problems.push("star edges require orientable = false".to_string());
        }
        if !problems.is_empty() {
            return Err(GkmError::Structure(problems));
        }
        Ok(Self { rank, half_dim, orientable, vertices, edges, star_edges, weight_scale: 1, lattice: None })
    }

    /// Records that stored weights are `scale` times the true weights.
    pub fn with_weight_scale(mut self, scale: i64) -> Self {
        self.weight_scale = scale;
        self
    }

    /// Attaches the weight lattice (in stored coordinates) used by the integer
    /// checks. Without one, `Z^rank` is assumed.
    pub fn with_lattice(mut self, lattice: WeightLattice) -> Result<Self> {
        if lattice.basis().len() != self.rank {
            return Err(GkmError::structure("lattice basis has the wrong rank"));
        }
        self.lattice = Some(lattice);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn weight_scale(&self) -> i64 {
        self.weight_scale
    }

    pub fn lattice(&self) -> Option<&WeightLattice> {
        self.lattice.as_ref()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|x| x == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn star_edges(&self) -> &[StarEdge] {
        &self.star_edges
    }

    pub fn is_labeled(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_some()) && self.star_edges.iter().all(|s| s.weight.is_some())
    }

    pub fn weight(&self, e: usize) -> Result<&WeightClass> {
        self.edges[e].weight.as_ref().ok_or(GkmError::Unlabeled(e))
    }

    /// Indices of the ordinary edges at `v`.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_incident(v)).collect()
    }

    pub fn star_count(&self, v: usize) -> usize {
        self.star_edges.iter().filter(|s| s.vertex == v).count()
    }

    /// Ordinary edges plus star edges at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.incident_edges(v).len() + self.star_count(v)
    }

    /// All isotropy weights at `v`: ordinary edges first, then star edges.
    pub fn weights_at(&self, v: usize) -> Result<Vec<WeightClass>> {
        let mut out = Vec::new();
        for e in self.incident_edges(v) {
            out.push(self.weight(e)?.clone());
        }
        for (i, s) in self.star_edges.iter().enumerate() {
            if s.vertex == v {
                out.push(s.weight.clone().ok_or(GkmError::Unlabeled(self.edges.len() + i))?);
            }
        }
        Ok(out)
    }

    /// Edge bundles keyed by sorted endpoint pairs.
    pub fn bundles(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            map.entry(e.endpoints()).or_default().push(i);
        }
        map
    }

    /// Edges joining `a` and `b`, in edge-list order.
    pub fn bundle(&self, a: usize, b: usize) -> Vec<usize> {
        let key = (a.min(b), a.max(b));
        (0..self.edges.len()).filter(|&i| self.edges[i].endpoints() == key).collect()
    }

    /// Vertices sharing at least one edge with `v`.
    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.is_incident(v)).map(|e| e.other(v)).collect()
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                for y in self.neighbors(x) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// A copy with vertices reordered: new vertex `i` is old vertex `order[i]`.
    /// Names travel with their vertices.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.vertex_count());
        let mut new_of_old = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut g = self.clone();
        g.vertices = order.iter().map(|&o| self.vertices[o].clone()).collect();
        for e in &mut g.edges {
            e.u = new_of_old[e.u];
            e.v = new_of_old[e.v];
        }
        for s in &mut g.star_edges {
            s.vertex = new_of_old[s.vertex];
        }
        g
    }

    /// A copy with vertex ids replaced.
    pub fn renamed(&self, names: Vec<String>) -> Result<Self> {
        let mut g = self.clone();
        g.vertices = names;
        Self::new(g.rank, g.half_dim, g.orientable, g.vertices, g.edges, g.star_edges)
            .map(|x| x.with_weight_scale(self.weight_scale))
            .map(|mut x| {
                x.lattice = self.lattice.clone();
                x
            })
    }

    /// A copy with the edge list reordered: new edge `i` is old edge `order[i]`.
    pub fn with_edge_order(&self, order: &[usize]) -> Self {
        let mut g = self.clone();
        g.edges = order.iter().map(|&i| self.edges[i].clone()).collect();
        g
    }

    /// Vertex order that depends only on the labeled graph structure, not on
    /// ids or list positions (ties are broken by position). Colors start from
    /// the sorted incident weights and are refined by neighbor colors.
    pub fn canonical_vertex_order(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let weights_key = |v: usize| -> Vec<Vec<i64>> {
            let mut ws: Vec<Vec<i64>> = self
                .incident_edges(v)
                .into_iter()
                .map(|e| self.edges[e].weight.as_ref().map_or_else(Vec::new, |w| w.rep().0.clone()))
                .chain(
                    self.star_edges
                        .iter()
                        .filter(|s| s.vertex == v)
                        .map(|s| s.weight.as_ref().map_or_else(Vec::new, |w| w.rep().0.clone()))
                        .map(|mut w| {
                            w.push(i64::MAX);
                            w
                        }),
                )
                .collect();
            ws.sort();
            ws
        };
        let initial: Vec<Vec<Vec<i64>>> = (0..n).map(weights_key).collect();
        let mut color = rank_keys(&initial);
        for _ in 0..n {
            let keys: Vec<(usize, Vec<(Vec<i64>, usize)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(Vec<i64>, usize)> = self
                        .incident_edges(v)
                        .into_iter()
                        .map(|e| {
                            let w = self.edges[e].weight.as_ref().map_or_else(Vec::new, |w| w.rep().0.clone());
                            (w, color[self.edges[e].other(v)])
                        })
                        .collect();
                    nb.sort();
                    (color[v], nb)
                })
                .collect();
            let next = rank_keys(&keys);
            let stable = distinct(&next) == distinct(&color);
            color = next;
            if stable {
                break;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (color[v], v));
        order
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let sorted: BTreeSet<K> = keys.iter().cloned().collect();
    let index: BTreeMap<K, usize> = sorted.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| index[k]).collect()
}

fn distinct(colors: &[usize]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

/// Per-vertex outcome of a GKM_k check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCheck {
    pub vertex: String,
    pub degree: usize,
    pub independent: bool,
    /// A dependent subset of the incident weights, when one exists.
    pub dependent: Option<Vec<WeightClass>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub k: usize,
    pub pass: bool,
    pub vertices: Vec<VertexCheck>,
}

impl ValidationReport {
    pub fn failing_vertices(&self) -> Vec<&str> {
        self.vertices.iter().filter(|v| !v.independent).map(|v| v.vertex.as_str()).collect()
    }
}

/// Checks degree regularity and GKM_k at every vertex. Star-edge weights are
/// checked together with the ordinary ones.
pub fn validate(g: &GkmGraph, k: usize) -> Result<ValidationReport> {
    if k < 2 {
        return Err(GkmError::InvalidK(k));
    }
    let irregular: Vec<String> = (0..g.vertex_count())
        .filter(|&v| g.degree(v) != g.half_dim())
        .map(|v| format!("vertex {} has degree {}, expected {}", g.vertex_name(v), g.degree(v), g.half_dim()))
        .collect();
    if !irregular.is_empty() {
        return Err(GkmError::Structure(irregular));
    }
    let mut vertices = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let ws = g.weights_at(v)?;
        let dependent = lattice::k_dependent_subset(&ws, k)?.map(|idx| idx.into_iter().map(|i| ws[i].clone()).collect());
        vertices.push(VertexCheck {
            vertex: g.vertex_name(v).to_string(),
            degree: ws.len(),
            independent: dependent.is_none(),
            dependent,
        });
    }
    let pass = vertices.iter().all(|v| v.independent);
    Ok(ValidationReport { k, pass, vertices })
}

/// A two-dimensional face: the connected set of edges whose weights lie in
/// the plane spanned by two edges at a common vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub plane: (WeightClass, WeightClass),
}

impl Face {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_biangle(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn is_triangle(&self) -> bool {
        self.vertices.len() == 3
    }

    /// Edges of the face incident to `v`.
    pub fn edges_at(&self, g: &GkmGraph, v: usize) -> Vec<usize> {
        self.edges.iter().copied().filter(|&e| g.edge(e).is_incident(v)).collect()
    }
}

fn require_gkm3(g: &GkmGraph) -> Result<()> {
    let report = validate(g, 3)?;
    if report.pass {
        Ok(())
    } else {
        Err(GkmError::FacesRequireGkm3(format!("dependent weights at {}", report.failing_vertices().join(", "))))
    }
}

/// The face through the edges `e1`, `e2` at `v`.
pub fn face_of(g: &GkmGraph, v: usize, e1: usize, e2: usize) -> Result<Face> {
    require_gkm3(g)?;
    check_pair(g, v, e1, e2)?;
    face_closure(g, e1, e2)
}

fn check_pair(g: &GkmGraph, v: usize, e1: usize, e2: usize) -> Result<()> {
    if v >= g.vertex_count() || e1 >= g.edges().len() || e2 >= g.edges().len() {
        return Err(GkmError::Precondition("vertex or edge out of range".into()));
    }
    if e1 == e2 {
        return Err(GkmError::Precondition("a face needs two distinct edges".into()));
    }
    if !g.edge(e1).is_incident(v) || !g.edge(e2).is_incident(v) {
        return Err(GkmError::Precondition(format!("edges {e1} and {e2} are not both incident to {}", g.vertex_name(v))));
    }
    Ok(())
}

/// Span closure without the GKM_3 precondition check.
pub(crate) fn face_closure(g: &GkmGraph, e1: usize, e2: usize) -> Result<Face> {
    let a = g.weight(e1)?.clone();
    let b = g.weight(e2)?.clone();
    let mut edges: BTreeSet<usize> = [e1, e2].into_iter().collect();
    let mut vertices: BTreeSet<usize> = [g.edge(e1).u, g.edge(e1).v, g.edge(e2).u, g.edge(e2).v].into_iter().collect();
    let mut in_plane: HashMap<usize, bool> = HashMap::new();
    loop {
        let mut grew = false;
        for (i, e) in g.edges().iter().enumerate() {
            if edges.contains(&i) || !(vertices.contains(&e.u) || vertices.contains(&e.v)) {
                continue;
            }
            let inside = match in_plane.get(&i) {
                Some(&x) => x,
                None => {
                    let x = lattice::in_span2(g.weight(i)?, &a, &b)?;
                    in_plane.insert(i, x);
                    x
                }
            };
            if inside {
                edges.insert(i);
                vertices.insert(e.u);
                vertices.insert(e.v);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    Ok(Face { vertices, edges, plane: (a, b) })
}

/// Every face of a GKM_3 graph, once each, ordered by first discovery
/// (vertex order, then incident edge pairs).
pub fn all_faces(g: &GkmGraph) -> Result<Vec<Face>> {
    require_gkm3(g)?;
    faces_unchecked(g)
}

pub(crate) fn faces_unchecked(g: &GkmGraph) -> Result<Vec<Face>> {
    let mut faces: Vec<Face> = Vec::new();
    for v in 0..g.vertex_count() {
        let inc = g.incident_edges(v);
        for (i, &e1) in inc.iter().enumerate() {
            for &e2 in &inc[i + 1..] {
                if faces.iter().any(|f| f.edges.contains(&e1) && f.edges.contains(&e2)) {
                    continue;
                }
                let f = face_closure(g, e1, e2)?;
                if !faces.iter().any(|x| x.edges == f.edges) {
                    faces.push(f);
                }
            }
        }
    }
    Ok(faces)
}

/// Number of fixed points, which equals the Euler characteristic.
pub fn euler_characteristic(g: &GkmGraph) -> usize {
    g.vertex_count()
}
