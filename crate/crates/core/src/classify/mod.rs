//! Realizability conditions, connected-sum families and the surface
//! minimal-genus formula.

mod manifold;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use manifold::{parse_description, DescriptionError, ManifoldClass, PrimeToken, Summand, SummandCounts};

use crate::digraph::{invariants, validate_pre_m, FiberLabel, LabeledDigraph, Mode, ValidityReport};

/// Reading of the Klein-bottle condition on vertices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ConditionBVariant {
    /// Every vertex has an incident K2 edge.
    Literal,
    /// No vertex has both an entering and a departing K2 edge.
    #[default]
    NoThroughKlein,
}

impl ConditionBVariant {
    pub fn token(self) -> &'static str {
        match self {
            ConditionBVariant::Literal => "literal",
            ConditionBVariant::NoThroughKlein => "no-through-klein",
        }
    }
}

impl fmt::Display for ConditionBVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for ConditionBVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(ConditionBVariant::Literal),
            "no-through-klein" => Ok(ConditionBVariant::NoThroughKlein),
            _ => Err(format!("unknown variant `{s}` (expected literal or no-through-klein)")),
        }
    }
}

/// Which conditions a mode-3 digraph must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionSet {
    /// Condition (a) and condition (b) in the given reading.
    WithConditionB(ConditionBVariant),
    /// Condition (a) only: the manifold is assumed to have vanishing second
    /// Stiefel-Whitney class.
    VanishingW2,
}

impl Default for ConditionSet {
    fn default() -> Self {
        ConditionSet::WithConditionB(ConditionBVariant::default())
    }
}

impl From<ConditionBVariant> for ConditionSet {
    fn from(v: ConditionBVariant) -> Self {
        ConditionSet::WithConditionB(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("expected a mode {expected} digraph, got mode {found}")]
    WrongMode { expected: Mode, found: Mode },
    #[error("condition (a) fails: {0}")]
    ConditionA(String),
    #[error("condition (b) ({variant}) fails at vertex {vertex}")]
    ConditionB { variant: ConditionBVariant, vertex: String },
    #[error("not a pre-M digraph: {0}")]
    NotPreM(ValidityReport),
    #[error("the genus formula needs at least two edges")]
    TooFewEdges,
}

impl ClassifyError {
    /// Stable identifier, used for CLI error codes.
    pub fn code(&self) -> &'static str {
        match self {
            ClassifyError::WrongMode { .. } => "wrong-mode",
            ClassifyError::ConditionA(_) => "condition-a",
            ClassifyError::ConditionB { .. } => "condition-b",
            ClassifyError::NotPreM(_) => "not-pre-m",
            ClassifyError::TooFewEdges => "too-few-edges",
        }
    }
}

fn require_mode(g: &LabeledDigraph, expected: Mode) -> Result<(), ClassifyError> {
    if g.mode() == expected {
        Ok(())
    } else {
        Err(ClassifyError::WrongMode { expected, found: g.mode() })
    }
}

/// Why condition (a) fails, if it does.
fn condition_a_failure(g: &LabeledDigraph) -> Option<String> {
    let report = validate_pre_m(g);
    if !report.is_pre_m() {
        return Some(report.to_string());
    }
    g.edges().iter().find(|e| e.label == FiberLabel::S1).map(|e| format!("edge {} is labeled S1", e.id))
}

/// Pre-M with every label among S2, T2, K2.
pub fn condition_a(g: &LabeledDigraph) -> Result<bool, ClassifyError> {
    require_mode(g, Mode::Three)?;
    Ok(condition_a_failure(g).is_none())
}

/// First vertex violating condition (b), in id order.
pub fn condition_b_violation(g: &LabeledDigraph, variant: ConditionBVariant) -> Option<String> {
    let klein = |es: &[usize]| es.iter().any(|&e| g.edges()[e].label == FiberLabel::K2);
    (0..g.vertices().len())
        .find(|&v| {
            let (kin, kout) = (klein(g.in_edges(v)), klein(g.out_edges(v)));
            match variant {
                ConditionBVariant::Literal => !kin && !kout,
                ConditionBVariant::NoThroughKlein => kin && kout,
            }
        })
        .map(|v| g.vertices()[v].id.clone())
}

/// Condition (b) in the given reading. Requires condition (a).
pub fn condition_b(g: &LabeledDigraph, variant: ConditionBVariant) -> Result<bool, ClassifyError> {
    require_mode(g, Mode::Three)?;
    if let Some(reason) = condition_a_failure(g) {
        return Err(ClassifyError::ConditionA(reason));
    }
    Ok(condition_b_violation(g, variant).is_none())
}

/// Checks `conditions`, naming the first one that fails.
pub fn check_conditions(g: &LabeledDigraph, conditions: ConditionSet) -> Result<(), ClassifyError> {
    require_mode(g, Mode::Three)?;
    if let Some(reason) = condition_a_failure(g) {
        return Err(ClassifyError::ConditionA(reason));
    }
    if let ConditionSet::WithConditionB(variant) = conditions {
        if let Some(vertex) = condition_b_violation(g, variant) {
            return Err(ClassifyError::ConditionB { variant, vertex });
        }
    }
    Ok(())
}

/// Constraints on the connected sums realized by Morse functions with given
/// Reeb data: at least `min_sphere_bundles` sphere bundles over the circle,
/// at most `max_lens` lens spaces, exactly `exact_non_or_deg1` other
/// non-orientable degree-1 summands.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RealizableFamily {
    pub min_sphere_bundles: usize,
    pub max_lens: usize,
    pub exact_non_or_deg1: usize,
    /// The single-edge digraph, which realizes only the 3-sphere.
    pub s3_only: bool,
}

impl RealizableFamily {
    pub fn s3_only() -> Self {
        RealizableFamily { s3_only: true, ..Default::default() }
    }

    /// Human-readable description of the family.
    pub fn describe(&self) -> String {
        if self.s3_only {
            return "S3 only".to_string();
        }
        format!(
            "connected sums of a1 x S1xS2, a2 x TwS1xS2, b lens spaces and {} non-orientable degree-1 summands, \
             with a1 + a2 >= {} and b <= {}",
            self.exact_non_or_deg1, self.min_sphere_bundles, self.max_lens
        )
    }
}

impl fmt::Display for RealizableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "minSphereBundles {} / maxLens {} / exactNonOrDeg1 {}",
            self.min_sphere_bundles, self.max_lens, self.exact_non_or_deg1
        )
    }
}

/// Family of connected sums realizable with Reeb data `g`.
pub fn realizable_family(g: &LabeledDigraph, conditions: impl Into<ConditionSet>) -> Result<RealizableFamily, ClassifyError> {
    check_conditions(g, conditions.into())?;
    let inv = invariants(g).map_err(ClassifyError::NotPreM)?;
    if inv.n_edges == 1 {
        return Ok(RealizableFamily::s3_only());
    }
    Ok(RealizableFamily {
        min_sphere_bundles: inv.beta1 + inv.n_deg2_sphere_sphere,
        max_lens: inv.n_torus_edges,
        exact_non_or_deg1: inv.n_klein_edges,
        s3_only: false,
    })
}

/// Whether `m` lies in `fam`. Twisted bundles may count either as sphere
/// bundles or as non-orientable degree-1 summands; every split is tried.
pub fn is_member(m: &ManifoldClass, fam: &RealizableFamily) -> bool {
    if fam.s3_only {
        return m.is_sphere();
    }
    let c = m.counts();
    if c.lens > fam.max_lens {
        return false;
    }
    (0..=c.twisted).any(|as_bundle| {
        let bundles = c.sphere_bundles + as_bundle;
        let klein = c.twisted - as_bundle + c.non_orientable_other;
        bundles >= fam.min_sphere_bundles && klein == fam.exact_non_or_deg1
    })
}

/// Whether the manifold described by `description` admits a Morse function
/// whose level components are spheres, tori and Klein bottles: true iff
/// every prime summand is a sphere bundle, a lens space, or non-orientable
/// of degree 1. `conditions` only affects which witness digraphs qualify,
/// not the answer.
pub fn decide_description(description: &str, _conditions: ConditionSet) -> Result<bool, DescriptionError> {
    Ok(parse_description(description)?.iter().all(|t| matches!(t, PrimeToken::Known(_))))
}

/// Minimal genus of a closed orientable surface carrying a Morse function
/// with Reeb data `g`: first Betti number plus degree-2 vertices.
pub fn min_genus(g: &LabeledDigraph) -> Result<usize, ClassifyError> {
    require_mode(g, Mode::Two)?;
    let inv = invariants(g).map_err(ClassifyError::NotPreM)?;
    if inv.n_edges < 2 {
        return Err(ClassifyError::TooFewEdges);
    }
    Ok(inv.beta1 + inv.n_deg2)
}

pub fn surface_realizable(g: &LabeledDigraph, genus: usize) -> Result<bool, ClassifyError> {
    Ok(genus >= min_genus(g)?)
}
