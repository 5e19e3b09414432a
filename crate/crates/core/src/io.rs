//! JSON interchange for graphs, DOT export, and a generic report envelope.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GkmError, Result};
use crate::graph::{Edge, GkmGraph, StarEdge};
use crate::lattice::{Weight, WeightClass, WeightLattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Weight>,
    #[serde(default)]
    pub index: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarRecord {
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Weight>,
}

fn is_one(x: &i64) -> bool {
    *x == 1
}

fn one() -> i64 {
    1
}

/// On-disk form of a [`GkmGraph`]; vertices are referenced by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub rank: usize,
    pub half_dim: usize,
    #[serde(default = "default_true")]
    pub orientable: bool,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub star_edges: Vec<StarRecord>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub weight_scale: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<WeightLattice>,
}

fn default_true() -> bool {
    true
}

impl From<&GkmGraph> for GraphFile {
    fn from(g: &GkmGraph) -> Self {
        let name = |v: usize| g.vertex_name(v).to_string();
        GraphFile {
            rank: g.rank(),
            half_dim: g.half_dim(),
            orientable: g.orientable(),
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: name(e.u),
                    v: name(e.v),
                    weight: e.weight.as_ref().map(|w| w.rep().clone()),
                    index: e.index,
                })
                .collect(),
            star_edges: g
                .star_edges()
                .iter()
                .map(|s| StarRecord { v: name(s.vertex), weight: s.weight.as_ref().map(|w| w.rep().clone()) })
                .collect(),
            weight_scale: g.weight_scale(),
            lattice: g.lattice().cloned(),
        }
    }
}

impl GraphFile {
    pub fn into_graph(self) -> Result<GkmGraph> {
        let mut problems = Vec::new();
        let lookup = |name: &str, at: String, problems: &mut Vec<String>| -> usize {
            match self.vertices.iter().position(|v| v == name) {
                Some(i) => i,
                None => {
                    problems.push(format!("{at}: unknown vertex {name:?}"));
                    usize::MAX
                }
            }
        };
        let class = |w: &Weight, at: String, problems: &mut Vec<String>| -> Option<WeightClass> {
            if w.rank() != self.rank {
                problems.push(format!("{at}: weight {w} has {} coordinates, expected {}", w.rank(), self.rank));
                return None;
            }
            match WeightClass::try_from(w.clone()) {
                Ok(c) => Some(c),
                Err(_) => {
                    problems.push(format!("{at}: zero weight"));
                    None
                }
            }
        };
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let u = lookup(&e.u, format!("edges[{i}].u"), &mut problems);
            let v = lookup(&e.v, format!("edges[{i}].v"), &mut problems);
            if u == v && u != usize::MAX {
                problems.push(format!("edges[{i}]: edge {i} is a loop at {}", e.u));
            }
            let weight = e.weight.as_ref().and_then(|w| class(w, format!("edges[{i}].weight"), &mut problems));
            edges.push(Edge { u, v, weight, index: e.index });
        }
        let mut stars = Vec::new();
        for (i, s) in self.star_edges.iter().enumerate() {
            let vertex = lookup(&s.v, format!("star_edges[{i}].v"), &mut problems);
            let weight = s.weight.as_ref().and_then(|w| class(w, format!("star_edges[{i}].weight"), &mut problems));
            stars.push(StarEdge { vertex, weight });
        }
        if self.weight_scale < 1 {
            problems.push("weight_scale: must be positive".into());
        }
        if !problems.is_empty() {
            return Err(GkmError::Structure(problems));
        }
        let g = GkmGraph::new(self.rank, self.half_dim, self.orientable, self.vertices, edges, stars)?
            .with_weight_scale(self.weight_scale);
        match self.lattice {
            Some(l) => g.with_lattice(l),
            None => Ok(g),
        }
    }
}

/// Parses and structurally validates a graph; schema errors carry the JSON
/// path of the offending value.
pub fn parse_graph(text: &str) -> Result<GkmGraph> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: GraphFile = serde_path_to_error::deserialize(de).map_err(|e| GkmError::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    file.into_graph()
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<GkmGraph> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| GkmError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_graph(&text)
}

/// Pretty JSON with a trailing newline; stable for identical graphs.
pub fn to_json(g: &GkmGraph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphFile::from(g)).expect("graph serializes");
    s.push('\n');
    s
}

/// Weight lists for the catalog builders: a JSON array of integer arrays.
pub fn parse_weights(text: &str) -> Result<Vec<Weight>> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| GkmError::Parse { path: e.path().to_string(), message: e.inner().to_string() })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn is_bipartite(g: &GkmGraph) -> Option<Vec<u8>> {
    let n = g.vertex_count();
    let mut side = vec![u8::MAX; n];
    for s in 0..n {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in g.neighbors(x) {
                if side[y] == u8::MAX {
                    side[y] = 1 - side[x];
                    stack.push(y);
                } else if side[y] == side[x] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

/// DOT multigraph: one node per vertex, one edge per parallel edge, weights
/// as labels, star edges as edges to point nodes. Bipartite graphs with at
/// least two edges get a two-rank layout hint.
pub fn export_dot(g: &GkmGraph) -> String {
    let mut out = String::from("graph gkm {\n");
    let _ = writeln!(out, "  node [shape=circle];");
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by(|&a, &b| g.vertex_name(a).cmp(g.vertex_name(b)));
    for &v in &order {
        let _ = writeln!(out, "  {};", quote(g.vertex_name(v)));
    }
    if g.vertex_count() > 2 && !g.edges().is_empty() {
        if let Some(side) = is_bipartite(g) {
            let _ = writeln!(out, "  // bipartite");
            for s in 0..2u8 {
                let names: Vec<String> =
                    order.iter().filter(|&&v| side[v] == s).map(|&v| quote(g.vertex_name(v))).collect();
                let _ = writeln!(out, "  {{ rank=same; {} }}", names.join("; "));
            }
        }
    }
    let mut edges: Vec<(String, String, u32, String)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (g.vertex_name(e.u), g.vertex_name(e.v));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let label = e.weight.as_ref().map_or(String::new(), |w| w.rep().to_string());
            (a.to_string(), b.to_string(), e.index, label)
        })
        .collect();
    edges.sort();
    for (a, b, _, label) in &edges {
        if label.is_empty() {
            let _ = writeln!(out, "  {} -- {};", quote(a), quote(b));
        } else {
            let _ = writeln!(out, "  {} -- {} [label={}];", quote(a), quote(b), quote(label));
        }
    }
    let mut stars: Vec<(String, String)> = g
        .star_edges()
        .iter()
        .map(|s| (g.vertex_name(s.vertex).to_string(), s.weight.as_ref().map_or(String::new(), |w| w.rep().to_string())))
        .collect();
    stars.sort();
    for (i, (v, label)) in stars.iter().enumerate() {
        let node = quote(&format!("star{i}"));
        let _ = writeln!(out, "  {node} [shape=point];");
        let _ = writeln!(out, "  {} -- {node} [style=dashed, label={}];", quote(v), quote(label));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    NotRealizable,
}

/// Result of one command: a status, human-readable findings, and the
/// machine-readable body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub status: Status,
    pub findings: Vec<String>,
    pub body: serde_json::Value,
}

impl Report {
    pub fn new(status: Status, findings: Vec<String>, body: impl Serialize) -> Self {
        Self { status, findings, body: serde_json::to_value(body).expect("report body serializes") }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let status = match self.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
            Status::NotRealizable => "NOT REALIZABLE",
        };
        let mut out = format!("status: {status}\n");
        for f in &self.findings {
            let _ = writeln!(out, "  {f}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_op2;

    #[test]
    fn op2_round_trip() {
        let g = build_op2();
        let text = to_json(&g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn path_in_schema_error() {
        let err = parse_graph(r#"{"rank": 2, "half_dim": 1, "vertices": ["a","b"], "edges": [{"u":"a","v":"b","weight":[1,"x"]}]}"#)
            .unwrap_err();
        assert!(matches!(err, GkmError::Parse { ref path, .. } if path.starts_with("edges[0].weight")), "{err}");
    }
}
