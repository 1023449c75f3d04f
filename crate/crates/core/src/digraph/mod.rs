//! Fiber-labeled Reeb digraphs.
//!
//! A [`LabeledDigraph`] is a finite connected multigraph whose vertices carry
//! exact rational levels and whose edges carry the type of the regular level
//! component they stand for. Edges always point from the lower level to the
//! higher one, so the digraph is acyclic and the level map is injective on
//! every edge.

mod dot;
mod enumerate;
mod iso;
mod text;
mod validate;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use thiserror::Error;

use crate::surface::SurfaceType;

pub use dot::{export_dot, parse_dot};
pub use enumerate::enumerate_digraphs;
pub use iso::{is_isomorphic, IsoClasses};
pub use text::{parse_reeb, write_reeb};
pub use validate::{invariants, validate_pre_m, DigraphInvariants, ValidityReport, Violation, ViolationRule};

/// Exact level of a vertex.
pub type Level = Rational64;

/// Dimension `m` of the manifold the Reeb digraph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Functions on closed surfaces; level components are circles.
    Two,
    /// Functions on closed 3-manifolds; level components are surfaces.
    Three,
}

impl Mode {
    pub fn dimension(self) -> u8 {
        match self {
            Mode::Two => 2,
            Mode::Three => 3,
        }
    }

    pub fn from_dimension(m: u8) -> Option<Mode> {
        match m {
            2 => Some(Mode::Two),
            3 => Some(Mode::Three),
            _ => None,
        }
    }

    /// The label every pendant edge must carry: `S^{m-1}`.
    pub fn sphere_label(self) -> FiberLabel {
        match self {
            Mode::Two => FiberLabel::S1,
            Mode::Three => FiberLabel::S2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dimension())
    }
}

/// Diffeomorphism type of the level component over an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiberLabel {
    S1,
    S2,
    T2,
    K2,
}

impl FiberLabel {
    pub const ALL: [FiberLabel; 4] = [FiberLabel::S1, FiberLabel::S2, FiberLabel::T2, FiberLabel::K2];

    pub fn token(self) -> &'static str {
        match self {
            FiberLabel::S1 => "S1",
            FiberLabel::S2 => "S2",
            FiberLabel::T2 => "T2",
            FiberLabel::K2 => "K2",
        }
    }

    pub fn is_legal_in(self, mode: Mode) -> bool {
        match self {
            FiberLabel::S1 => mode == Mode::Two,
            _ => mode == Mode::Three,
        }
    }

    /// The surface this label denotes; `None` for the circle.
    pub fn surface(self) -> Option<SurfaceType> {
        match self {
            FiberLabel::S1 => None,
            FiberLabel::S2 => Some(SurfaceType::SPHERE),
            FiberLabel::T2 => Some(SurfaceType::TORUS),
            FiberLabel::K2 => Some(SurfaceType::KLEIN),
        }
    }

    pub fn from_surface(t: SurfaceType) -> Option<FiberLabel> {
        match t {
            SurfaceType::SPHERE => Some(FiberLabel::S2),
            SurfaceType::TORUS => Some(FiberLabel::T2),
            SurfaceType::KLEIN => Some(FiberLabel::K2),
            _ => None,
        }
    }
}

impl fmt::Display for FiberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FiberLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FiberLabel::ALL
            .into_iter()
            .find(|l| l.token() == s)
            .ok_or_else(|| format!("unknown fiber label `{s}` (expected S1, S2, T2 or K2)"))
    }
}

/// Canonical order on opaque ids: natural order (`v2 < v10`), then bytes.
pub fn id_cmp(a: &str, b: &str) -> Ordering {
    natord::compare(a, b).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub level: Level,
}

/// An edge; `tail` and `head` index into [`LabeledDigraph::vertices`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub label: FiberLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("digraph has no vertices")]
    Empty,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{0}` does not go strictly upward in level")]
    NotIncreasing(String),
    #[error("underlying graph is disconnected")]
    Disconnected,
}

/// A finite, connected, nonempty digraph with leveled vertices and
/// fiber-labeled edges.
///
/// Vertices and edges are kept sorted by id so all derived output is
/// canonical. Labels are not checked against the mode here; that is a
/// pre-M condition reported by [`validate_pre_m`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph {
    mode: Mode,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl LabeledDigraph {
    /// Builds a digraph from `(id, level)` vertices and
    /// `(id, tail id, head id, label)` edges.
    pub fn new<V, E>(mode: Mode, vertices: V, edges: E) -> Result<Self, DigraphError>
    where
        V: IntoIterator<Item = (String, Level)>,
        E: IntoIterator<Item = (String, String, String, FiberLabel)>,
    {
        let mut vertices: Vec<Vertex> = vertices.into_iter().map(|(id, level)| Vertex { id, level }).collect();
        if vertices.is_empty() {
            return Err(DigraphError::Empty);
        }
        vertices.sort_by(|a, b| id_cmp(&a.id, &b.id));
        if let Some(w) = vertices.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(DigraphError::DuplicateVertex(w[0].id.clone()));
        }
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();

        let mut built = Vec::new();
        for (id, tail, head, label) in edges {
            let lookup = |v: &str| {
                index.get(v).copied().ok_or_else(|| DigraphError::UnknownVertex { edge: id.clone(), vertex: v.to_string() })
            };
            let (t, h) = (lookup(&tail)?, lookup(&head)?);
            if vertices[t].level >= vertices[h].level {
                return Err(DigraphError::NotIncreasing(id));
            }
            built.push(Edge { id, tail: t, head: h, label });
        }
        built.sort_by(|a, b| id_cmp(&a.id, &b.id));
        if let Some(w) = built.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(DigraphError::DuplicateEdge(w[0].id.clone()));
        }

        let mut incoming = vec![Vec::new(); vertices.len()];
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, e) in built.iter().enumerate() {
            outgoing[e.tail].push(i);
            incoming[e.head].push(i);
        }
        let g = LabeledDigraph { mode, vertices, edges: built, incoming, outgoing };
        if !g.is_connected() {
            return Err(DigraphError::Disconnected);
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in self.incoming[v].iter().chain(&self.outgoing[v]) {
                let w = self.edges[e].tail + self.edges[e].head - v;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Indices of edges entering vertex `v`.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    /// Indices of edges departing from vertex `v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incoming[v].len() + self.outgoing[v].len()
    }

    /// Every edge leaves this vertex (vacuously true for an isolated vertex).
    pub fn is_source(&self, v: usize) -> bool {
        self.incoming[v].is_empty()
    }

    /// Every edge enters this vertex (vacuously true for an isolated vertex).
    pub fn is_sink(&self, v: usize) -> bool {
        self.outgoing[v].is_empty()
    }

    pub fn level(&self, v: usize) -> Level {
        self.vertices[v].level
    }

    /// Vertex indices sorted by `(level, id)`; a topological order.
    pub fn level_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| {
            self.vertices[a].level.cmp(&self.vertices[b].level).then_with(|| id_cmp(&self.vertices[a].id, &self.vertices[b].id))
        });
        order
    }

    /// Decomposes the digraph back into builder tuples.
    pub fn to_parts(&self) -> (Vec<(String, Level)>, Vec<(String, String, String, FiberLabel)>) {
        let vs = self.vertices.iter().map(|v| (v.id.clone(), v.level)).collect();
        let es = self
            .edges
            .iter()
            .map(|e| (e.id.clone(), self.vertices[e.tail].id.clone(), self.vertices[e.head].id.clone(), e.label))
            .collect();
        (vs, es)
    }

    /// A path digraph `v1 -> v2 -> ... -> v{n+1}` at levels `0, 1, ..., n`
    /// with edges `e1..en` carrying `labels` in order.
    pub fn path(mode: Mode, labels: &[FiberLabel]) -> Result<Self, DigraphError> {
        let vs = (0..=labels.len()).map(|i| (format!("v{}", i + 1), Level::from_integer(i as i64)));
        let es = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (format!("e{}", i + 1), format!("v{}", i + 1), format!("v{}", i + 2), l));
        LabeledDigraph::new(mode, vs, es)
    }
}
