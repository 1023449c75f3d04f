//! Pre-M conditions and counting invariants.

use std::fmt;

use super::{FiberLabel, LabeledDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationRule {
    /// A source or sink whose degree is not exactly 1.
    ExtremumDegree,
    /// An edge at a degree-1 source or sink not labeled by the mode's sphere.
    PendantSphere,
    /// A label that does not exist in this mode (S1 outside mode 2, or
    /// S2/T2/K2 outside mode 3).
    LabelMode,
}

impl ViolationRule {
    pub fn id(self) -> &'static str {
        match self {
            ViolationRule::ExtremumDegree => "extremum-degree",
            ViolationRule::PendantSphere => "pendant-sphere",
            ViolationRule::LabelMode => "label-mode",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub rule: ViolationRule,
    /// Id of the offending vertex or edge.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule.id(), self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_pre_m(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("pre-M");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the labeled pre-M conditions: sources and sinks have degree 1,
/// pendant edges carry `S^{m-1}`, and labels match the mode.
pub fn validate_pre_m(g: &LabeledDigraph) -> ValidityReport {
    let mode = g.mode();
    let sphere = mode.sphere_label();
    let mut violations = Vec::new();

    for (v, vertex) in g.vertices().iter().enumerate() {
        let (source, sink) = (g.is_source(v), g.is_sink(v));
        if !(source || sink) {
            continue;
        }
        let kind = match (source, sink) {
            (true, true) => "isolated vertex",
            (true, false) => "source",
            _ => "sink",
        };
        let degree = g.degree(v);
        if degree != 1 {
            violations.push(Violation {
                rule: ViolationRule::ExtremumDegree,
                subject: vertex.id.clone(),
                message: format!("{kind} has degree {degree}, expected 1"),
            });
            continue;
        }
        let e = &g.edges()[g.in_edges(v).first().or(g.out_edges(v).first()).copied().expect("degree 1")];
        if e.label != sphere {
            violations.push(Violation {
                rule: ViolationRule::PendantSphere,
                subject: e.id.clone(),
                message: format!("pendant edge at {kind} `{}` is labeled {}, expected {sphere}", vertex.id, e.label),
            });
        }
    }

    for e in g.edges() {
        if !e.label.is_legal_in(mode) {
            violations.push(Violation {
                rule: ViolationRule::LabelMode,
                subject: e.id.clone(),
                message: format!("label {} is not allowed in mode {mode}", e.label),
            });
        }
    }

    violations.sort();
    violations.dedup();
    ValidityReport { violations }
}

/// Counting data of a labeled digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DigraphInvariants {
    /// First Betti number of the underlying undirected multigraph.
    pub beta1: usize,
    /// Degree-2 vertices whose two incident edges are both spheres.
    pub n_deg2_sphere_sphere: usize,
    pub n_torus_edges: usize,
    pub n_klein_edges: usize,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_sources: usize,
    pub n_sinks: usize,
    /// All degree-2 vertices regardless of labels (the `b` of the surface
    /// genus formula).
    pub n_deg2: usize,
}

/// Counts invariants. Returns the validity report when `g` is not pre-M.
pub fn invariants(g: &LabeledDigraph) -> Result<DigraphInvariants, ValidityReport> {
    let report = validate_pre_m(g);
    if !report.is_pre_m() {
        return Err(report);
    }
    let sphere = g.mode().sphere_label();
    let nv = g.vertices().len();
    let ne = g.edges().len();
    let deg2: Vec<usize> = (0..nv).filter(|&v| g.degree(v) == 2).collect();
    let n_deg2_sphere_sphere = deg2
        .iter()
        .filter(|&&v| g.in_edges(v).iter().chain(g.out_edges(v)).all(|&e| g.edges()[e].label == sphere))
        .count();
    let count = |l: FiberLabel| g.edges().iter().filter(|e| e.label == l).count();
    Ok(DigraphInvariants {
        beta1: ne + 1 - nv,
        n_deg2_sphere_sphere,
        n_torus_edges: count(FiberLabel::T2),
        n_klein_edges: count(FiberLabel::K2),
        n_vertices: nv,
        n_edges: ne,
        n_sources: (0..nv).filter(|&v| g.is_source(v)).count(),
        n_sinks: (0..nv).filter(|&v| g.is_sink(v)).count(),
        n_deg2: deg2.len(),
    })
}
