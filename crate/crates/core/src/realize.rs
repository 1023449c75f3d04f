//! Compiling labeled digraphs into certificate handle sequences.
//!
//! Every vertex becomes one step group. Sources and sinks are births and
//! deaths; a degree-2 vertex between two spheres gets `l` split-merge
//! pairs; every other vertex is scheduled in four phases: detube its
//! incoming tori and Klein bottles to spheres, merge everything into one
//! sphere, split that sphere once per outgoing edge, then tube each outgoing
//! component to its label.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::classify::{check_conditions, ClassifyError, ConditionSet, ManifoldClass, Summand};
use crate::digraph::{id_cmp, invariants, DigraphError, FiberLabel, LabeledDigraph, Level, Mode};
use crate::sim::{replay, simulate, CompId, Event, Fiber, SimError, StepGroup, SurgerySequence};
use crate::surface::Framing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Conditions(#[from] ClassifyError),
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("vertex {vertex} cannot be expanded: {reason}")]
    IneligibleVertex { vertex: String, reason: String },
    #[error("no degree-1 sink with a sphere edge to splice at")]
    NoEligibleSink,
    #[error("no degree-1 source with a sphere edge to splice at")]
    NoEligibleSource,
    #[error("the two pieces have different modes")]
    ModeMismatch,
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

impl RealizeError {
    pub fn code(&self) -> &'static str {
        match self {
            RealizeError::Conditions(e) => e.code(),
            RealizeError::InfeasibleParams(_) => "infeasible-params",
            RealizeError::IneligibleVertex { .. } => "ineligible-vertex",
            RealizeError::NoEligibleSink => "no-eligible-sink",
            RealizeError::NoEligibleSource => "no-eligible-source",
            RealizeError::ModeMismatch => "mode-mismatch",
            RealizeError::Sim(_) => "invalid-sequence",
            RealizeError::Digraph(_) => "invalid-digraph",
        }
    }
}

/// The four building blocks every realization is spliced from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    S3,
    SphereBundle,
    Lens(String),
    /// Tagged with the summand the Klein-bottle edge stands for.
    Klein(Summand),
}

/// A block's digraph and its sequence. The hint sits on the group that
/// closes the torus or Klein bottle off.
pub fn fundamental_block(block: &Block) -> (LabeledDigraph, SurgerySequence) {
    use crate::sim::ev::*;
    let (framing, hint) = match block {
        Block::S3 => {
            let seq = SurgerySequence::simple(Mode::Three, [birth(0), death(0)]);
            return (simulate(&seq).expect("block").reeb, seq);
        }
        Block::SphereBundle => (Framing::Preserve, Summand::S1xS2),
        Block::Lens(tag) => (Framing::Preserve, Summand::Lens(tag.clone())),
        Block::Klein(s) => (Framing::Reverse, s.clone()),
    };
    let mut seq = SurgerySequence::simple(Mode::Three, [birth(0), tube(0, 1, framing), detube(1, 2, Fiber::S2), death(2)]);
    seq.groups[2].hints.push(hint);
    (simulate(&seq).expect("block").reeb, seq)
}

/// Renames vertices `v1..` in level order and edges `e1..` in order of
/// their endpoints.
pub fn relabel_canonical(g: &LabeledDigraph) -> LabeledDigraph {
    let order = g.level_order();
    let mut rank = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        rank[v] = k;
    }
    let mut edges: Vec<_> = g.edges().iter().map(|e| (rank[e.tail], rank[e.head], e.label, e.id.clone())).collect();
    edges.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)).then_with(|| id_cmp(&a.3, &b.3)));
    LabeledDigraph::new(
        g.mode(),
        order.iter().enumerate().map(|(k, &v)| (format!("v{}", k + 1), g.level(v))),
        edges.into_iter().enumerate().map(|(k, (t, h, l, _))| (format!("e{}", k + 1), format!("v{}", t + 1), format!("v{}", h + 1), l)),
    )
    .expect("relabeling keeps a valid digraph")
}

fn pendant(g: &LabeledDigraph, v: usize) -> bool {
    g.degree(v) == 1 && {
        let e = g.in_edges(v).first().or(g.out_edges(v).first()).expect("degree 1");
        g.edges()[*e].label == g.mode().sphere_label()
    }
}

/// Splices `b` on top of `a`: the highest sink of `a` and the lowest source
/// of `b` are deleted and their edges joined, with `b` shifted above `a`.
pub fn compose_digraphs(a: &LabeledDigraph, b: &LabeledDigraph) -> Result<LabeledDigraph, RealizeError> {
    if a.mode() != b.mode() {
        return Err(RealizeError::ModeMismatch);
    }
    let sink = a.level_order().into_iter().rev().find(|&v| a.is_sink(v) && pendant(a, v)).ok_or(RealizeError::NoEligibleSink)?;
    let source = b.level_order().into_iter().find(|&v| b.is_source(v) && pendant(b, v)).ok_or(RealizeError::NoEligibleSource)?;
    let top_a = (0..a.vertices().len()).filter(|&v| v != sink).map(|v| a.level(v)).max();
    let bottom_b = (0..b.vertices().len()).filter(|&v| v != source).map(|v| b.level(v)).min();
    let (Some(top_a), Some(bottom_b)) = (top_a, bottom_b) else {
        return Err(RealizeError::NoEligibleSink);
    };
    let shift = top_a - bottom_b + Level::from_integer(1);

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let into_sink = a.in_edges(sink)[0];
    let from_source = b.out_edges(source)[0];
    for (g, skip_v, skip_e, prefix, dl) in [(a, sink, into_sink, "a", Level::from_integer(0)), (b, source, from_source, "b", shift)] {
        for (_, x) in g.vertices().iter().enumerate().filter(|(v, _)| *v != skip_v) {
            vertices.push((format!("{prefix}.{}", x.id), x.level + dl));
        }
        for (_, e) in g.edges().iter().enumerate().filter(|(i, _)| *i != skip_e) {
            let end = |v: usize| format!("{prefix}.{}", g.vertices()[v].id);
            edges.push((format!("{prefix}.{}", e.id), end(e.tail), end(e.head), e.label));
        }
    }
    let tail = &a.vertices()[a.edges()[into_sink].tail].id;
    let head = &b.vertices()[b.edges()[from_source].head].id;
    edges.push(("join".to_string(), format!("a.{tail}"), format!("b.{head}"), a.mode().sphere_label()));
    Ok(relabel_canonical(&LabeledDigraph::new(a.mode(), vertices, edges)?))
}

/// Renumbers components `c0, c1, ...` in creation order.
pub fn canonical_ids(seq: &SurgerySequence) -> SurgerySequence {
    let mut map: HashMap<CompId, CompId> = HashMap::new();
    let fresh = |c: CompId, map: &mut HashMap<CompId, CompId>| {
        let n = CompId(map.len() as u32);
        *map.entry(c).or_insert(n)
    };
    let mut out = seq.clone();
    for g in &mut out.groups {
        for e in &mut g.steps {
            let r = |c: &mut CompId, map: &mut HashMap<CompId, CompId>| *c = map.get(c).copied().unwrap_or(*c);
            match e {
                Event::Birth { output } => *output = fresh(*output, &mut map),
                Event::Death { input } => r(input, &mut map),
                Event::Merge { inputs, output } => {
                    inputs.iter_mut().for_each(|c| r(c, &mut map));
                    *output = fresh(*output, &mut map);
                }
                Event::SelfTube { input, output, .. } | Event::Detube { input, output, .. } => {
                    r(input, &mut map);
                    *output = fresh(*output, &mut map);
                }
                Event::Split { input, outputs } => {
                    r(input, &mut map);
                    for (c, _) in outputs.iter_mut() {
                        *c = fresh(*c, &mut map);
                    }
                }
            }
        }
    }
    out
}

/// The sequence counterpart of [`compose_digraphs`]: drops the final death
/// of `a` and the initial birth of `b`, identifies the two components and
/// shifts the levels of `b` above those of `a`.
pub fn compose_sequences(a: &SurgerySequence, b: &SurgerySequence) -> Result<SurgerySequence, RealizeError> {
    if a.mode != b.mode {
        return Err(RealizeError::ModeMismatch);
    }
    let dying = match a.groups.last().map(|g| g.steps.as_slice()) {
        Some([Event::Death { input }]) if a.groups.len() > 1 => *input,
        _ => return Err(RealizeError::NoEligibleSink),
    };
    let born = match b.groups.first().map(|g| g.steps.as_slice()) {
        Some([Event::Birth { output }]) if b.groups.len() > 1 => *output,
        _ => return Err(RealizeError::NoEligibleSource),
    };
    let offset = a.steps().flat_map(|e| e.outputs()).map(|c| c.0 + 1).max().unwrap_or(0);
    let top = a.groups[a.groups.len() - 2].level;
    let shift = top - b.groups[1].level + Level::from_integer(1);
    let rename = |c: &mut CompId| *c = if *c == born { dying } else { CompId(c.0 + offset) };
    let mut groups: Vec<StepGroup> = a.groups[..a.groups.len() - 1].to_vec();
    for g in &b.groups[1..] {
        let mut g = g.clone();
        g.level += shift;
        for e in &mut g.steps {
            match e {
                Event::Birth { output } => rename(output),
                Event::Death { input } => rename(input),
                Event::Merge { inputs, output } => {
                    inputs.iter_mut().for_each(rename);
                    rename(output);
                }
                Event::SelfTube { input, output, .. } | Event::Detube { input, output, .. } => {
                    rename(input);
                    rename(output);
                }
                Event::Split { input, outputs } => {
                    rename(input);
                    outputs.iter_mut().for_each(|(c, _)| rename(c));
                }
            }
        }
        groups.push(g);
    }
    Ok(canonical_ids(&SurgerySequence::new(a.mode, groups)))
}

/// Connected sum of two realized pieces.
pub fn compose_connected_sum(
    a: &(LabeledDigraph, SurgerySequence),
    b: &(LabeledDigraph, SurgerySequence),
) -> Result<(LabeledDigraph, SurgerySequence), RealizeError> {
    Ok((compose_digraphs(&a.0, &b.0)?, compose_sequences(&a.1, &b.1)?))
}

/// Replaces the degree-2 sphere vertex `v` by a chain of `l` split-merge
/// diamonds. New vertices are `{v}.s{i}` (splits) and `{v}.m{i}` (merges).
pub fn expand_deg2_vertex(g: &LabeledDigraph, v: &str, l: usize) -> Result<LabeledDigraph, RealizeError> {
    let ineligible = |reason: &str| RealizeError::IneligibleVertex { vertex: v.to_string(), reason: reason.to_string() };
    let vi = g.vertex_index(v).ok_or_else(|| ineligible("no such vertex"))?;
    if l == 0 {
        return Err(ineligible("at least one diamond is needed"));
    }
    let (ins, outs) = (g.in_edges(vi), g.out_edges(vi));
    if ins.len() != 1 || outs.len() != 1 {
        return Err(ineligible("needs exactly one entering and one departing edge"));
    }
    let sphere = g.mode().sphere_label();
    let (ein, eout) = (&g.edges()[ins[0]], &g.edges()[outs[0]]);
    if ein.label != sphere || eout.label != sphere {
        return Err(ineligible("both edges must be spheres"));
    }
    let (lo, hi) = (g.level(ein.tail), g.level(eout.head));
    let step = (hi - lo) / Level::from_integer(2 * l as i64 + 1);
    let (mut vs, mut es) = g.to_parts();
    vs.retain(|(id, _)| id != v);
    es.retain(|(id, ..)| *id != ein.id && *id != eout.id);
    let name = |kind: char, i: usize| format!("{v}.{kind}{i}");
    for i in 1..=l {
        vs.push((name('s', i), lo + step * Level::from_integer(2 * i as i64 - 1)));
        vs.push((name('m', i), lo + step * Level::from_integer(2 * i as i64)));
        es.push((name('a', i), name('s', i), name('m', i), sphere));
        es.push((name('b', i), name('s', i), name('m', i), sphere));
        if i < l {
            es.push((name('c', i), name('m', i), name('s', i + 1), sphere));
        }
    }
    let tail = g.vertices()[ein.tail].id.clone();
    let head = g.vertices()[eout.head].id.clone();
    es.push((ein.id.clone(), tail, name('s', 1), sphere));
    es.push((eout.id.clone(), name('m', l), head, sphere));
    Ok(LabeledDigraph::new(g.mode(), vs, es)?)
}

/// Free choices of a realization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RealizationParams {
    /// Split-merge pairs at degree-2 sphere vertices (default 1 each).
    pub extra_bundle_pairs: BTreeMap<String, usize>,
    /// Torus edges closed off as lens spaces, with their tags. The other
    /// torus edges are filled in trivially.
    pub lens_assignment: BTreeMap<String, String>,
    /// Summand each Klein-bottle edge stands for (default a tagged
    /// non-orientable degree-1 summand named after the edge).
    pub klein_assignment: BTreeMap<String, Summand>,
    /// How many of the sphere-bundle summands are twisted.
    pub twisted_bundles: usize,
}

fn is_sphere_deg2(g: &LabeledDigraph, v: usize) -> bool {
    let sphere = g.mode().sphere_label();
    g.in_edges(v).len() == 1
        && g.out_edges(v).len() == 1
        && g.in_edges(v).iter().chain(g.out_edges(v)).all(|&e| g.edges()[e].label == sphere)
}

fn check_params(g: &LabeledDigraph, p: &RealizationParams) -> Result<(), RealizeError> {
    let bad = |m: String| Err(RealizeError::InfeasibleParams(m));
    for (v, &l) in &p.extra_bundle_pairs {
        match g.vertex_index(v) {
            Some(i) if is_sphere_deg2(g, i) => {}
            _ => return bad(format!("{v} is not a degree-2 vertex between spheres")),
        }
        if l == 0 {
            return bad(format!("{v} needs at least one split-merge pair"));
        }
    }
    let label_of = |e: &str| g.edge_index(e).map(|i| g.edges()[i].label);
    for e in p.lens_assignment.keys() {
        if label_of(e) != Some(FiberLabel::T2) {
            return bad(format!("{e} is not a torus edge"));
        }
    }
    for (e, s) in &p.klein_assignment {
        if label_of(e) != Some(FiberLabel::K2) {
            return bad(format!("{e} is not a Klein-bottle edge"));
        }
        if !s.is_non_orientable_capable() {
            return bad(format!("{e} must stand for TwS1xS2 or a NOr1 summand, not {s}"));
        }
    }
    Ok(())
}

/// A certificate sequence for `g`: its Reeb data is `g` up to level values,
/// every level component is a sphere, torus or Klein bottle, and its hints
/// spell out one member of the realizable family chosen by `params`.
pub fn realize(g: &LabeledDigraph, params: &RealizationParams, conditions: impl Into<ConditionSet>) -> Result<SurgerySequence, RealizeError> {
    check_conditions(g, conditions.into())?;
    check_params(g, params)?;
    let inv = invariants(g).map_err(ClassifyError::NotPreM)?;
    let bundles = inv.beta1 + (0..g.vertices().len()).filter(|&v| is_sphere_deg2(g, v)).map(|v| params.extra_bundle_pairs.get(&g.vertices()[v].id).copied().unwrap_or(1)).sum::<usize>();
    if params.twisted_bundles > bundles {
        return Err(RealizeError::InfeasibleParams(format!("only {bundles} sphere bundles to twist")));
    }

    let mut comp: Vec<Option<CompId>> = vec![None; g.edges().len()];
    let mut next = 0u32;
    let mut fresh = || {
        next += 1;
        CompId(next - 1)
    };
    let mut parent: Vec<usize> = (0..g.vertices().len()).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut twisted_left = params.twisted_bundles;
    let bundle = |twisted_left: &mut usize| {
        if *twisted_left > 0 {
            *twisted_left -= 1;
            Summand::TwistedS1xS2
        } else {
            Summand::S1xS2
        }
    };

    let mut groups = Vec::new();
    for (k, v) in g.level_order().into_iter().enumerate() {
        let ins = g.in_edges(v);
        let outs = g.out_edges(v);
        let mut steps = Vec::new();
        let mut hints = Vec::new();
        for &e in ins {
            let (a, b) = (root(&mut parent, g.edges()[e].tail), root(&mut parent, v));
            if a == b {
                hints.push(bundle(&mut twisted_left));
            } else {
                parent[a] = b;
            }
            match g.edges()[e].label {
                FiberLabel::T2 => {
                    if let Some(tag) = params.lens_assignment.get(&g.edges()[e].id) {
                        hints.push(Summand::Lens(tag.clone()));
                    }
                }
                FiberLabel::K2 => hints.push(
                    params
                        .klein_assignment
                        .get(&g.edges()[e].id)
                        .cloned()
                        .unwrap_or_else(|| Summand::NonOrientableDeg1(g.edges()[e].id.clone())),
                ),
                _ => {}
            }
        }
        if ins.is_empty() {
            let c = fresh();
            steps.push(Event::Birth { output: c });
            comp[outs[0]] = Some(c);
        } else if outs.is_empty() {
            steps.push(Event::Death { input: comp[ins[0]].expect("edge below") });
        } else if is_sphere_deg2(g, v) {
            let pairs = params.extra_bundle_pairs.get(&g.vertices()[v].id).copied().unwrap_or(1);
            let mut c = comp[ins[0]].expect("edge below");
            for _ in 0..pairs {
                let (x, y, z) = (fresh(), fresh(), fresh());
                steps.push(Event::Split { input: c, outputs: [(x, Fiber::S2), (y, Fiber::S2)] });
                steps.push(Event::Merge { inputs: [x, y], output: z });
                hints.push(bundle(&mut twisted_left));
                c = z;
            }
            comp[outs[0]] = Some(c);
        } else {
            let mut spheres = Vec::new();
            for &e in ins {
                let c = comp[e].expect("edge below");
                match g.edges()[e].label {
                    FiberLabel::T2 | FiberLabel::K2 => {
                        let s = fresh();
                        steps.push(Event::Detube { input: c, output: s, outcome: Fiber::S2 });
                        spheres.push(s);
                    }
                    _ => spheres.push(c),
                }
            }
            let mut c = spheres[0];
            for &s in &spheres[1..] {
                let m = fresh();
                steps.push(Event::Merge { inputs: [c, s], output: m });
                c = m;
            }
            let mut targets = Vec::new();
            for _ in 1..outs.len() {
                let (x, y) = (fresh(), fresh());
                steps.push(Event::Split { input: c, outputs: [(x, Fiber::S2), (y, Fiber::S2)] });
                targets.push(x);
                c = y;
            }
            targets.push(c);
            for (&e, s) in outs.iter().zip(targets) {
                let framing = match g.edges()[e].label {
                    FiberLabel::T2 => Some(Framing::Preserve),
                    FiberLabel::K2 => Some(Framing::Reverse),
                    _ => None,
                };
                comp[e] = Some(match framing {
                    Some(framing) => {
                        let t = fresh();
                        steps.push(Event::SelfTube { input: s, output: t, framing });
                        t
                    }
                    None => s,
                });
            }
        }
        groups.push(StepGroup::new(Level::from_integer(k as i64 + 1), steps).with_hints(hints));
    }
    Ok(SurgerySequence::new(Mode::Three, groups))
}

/// A certificate for a whole connected sum: one block per summand, spliced
/// in summand order.
pub fn manifold_witness(m: &ManifoldClass) -> (LabeledDigraph, SurgerySequence) {
    let blocks: Vec<Block> = m
        .summands()
        .iter()
        .map(|s| match s {
            Summand::S1xS2 => Block::SphereBundle,
            Summand::Lens(t) => Block::Lens(t.clone()),
            Summand::TwistedS1xS2 | Summand::NonOrientableDeg1(_) => Block::Klein(s.clone()),
        })
        .collect();
    let mut acc = fundamental_block(blocks.first().unwrap_or(&Block::S3));
    for b in blocks.iter().skip(1) {
        acc = compose_connected_sum(&acc, &fundamental_block(b)).expect("blocks always splice");
    }
    acc
}

/// Splits every group into singleton groups at consecutive integer levels.
/// A group's hints stay with its first step.
pub fn normalize_to_simple(seq: &SurgerySequence) -> Result<SurgerySequence, SimError> {
    replay(seq)?;
    let mut groups = Vec::new();
    for g in &seq.groups {
        for (i, e) in g.steps.iter().enumerate() {
            let mut s = StepGroup::new(Level::from_integer(groups.len() as i64 + 1), vec![e.clone()]);
            if i == 0 {
                s.hints = g.hints.clone();
            }
            groups.push(s);
        }
    }
    Ok(SurgerySequence::new(seq.mode, groups))
}

/// Local pictures of a simple Morse function whose level components are
/// spheres, tori and Klein bottles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocalMove {
    Birth,
    Death,
    SphereMerge,
    SphereSplit,
    Tube,
    CrossTube,
    Untube,
    UncrossTube,
    /// A sphere merges into a torus or Klein bottle.
    Absorb,
    /// A torus or Klein bottle sheds a sphere.
    Emit,
}

/// Classifies every step of a simple sequence against the local catalog.
/// Returns the index of the first step with no catalog entry on failure.
pub fn local_moves(seq: &SurgerySequence) -> Result<Vec<LocalMove>, usize> {
    let r = replay(seq).map_err(|_| 0usize)?;
    let fiber: HashMap<CompId, Fiber> = r.components.iter().map(|c| (c.id, c.fiber)).collect();
    let handle = |f: Fiber| f == Fiber::T2 || f == Fiber::K2;
    seq.steps()
        .enumerate()
        .map(|(i, e)| {
            let f = |c: &CompId| fiber[c];
            let m = match e {
                Event::Birth { .. } => Some(LocalMove::Birth),
                Event::Death { .. } => Some(LocalMove::Death),
                Event::Merge { inputs: [a, b], output } => match (f(a), f(b), f(output)) {
                    (Fiber::S2, Fiber::S2, _) => Some(LocalMove::SphereMerge),
                    (x, y, o) if (x == Fiber::S2 && handle(y) && o == y) || (y == Fiber::S2 && handle(x) && o == x) => Some(LocalMove::Absorb),
                    _ => None,
                },
                Event::Split { input, outputs: [(_, x), (_, y)] } => match (f(input), *x, *y) {
                    (Fiber::S2, Fiber::S2, Fiber::S2) => Some(LocalMove::SphereSplit),
                    (t, x, y) if handle(t) && ((x == Fiber::S2 && y == t) || (y == Fiber::S2 && x == t)) => Some(LocalMove::Emit),
                    _ => None,
                },
                Event::SelfTube { input, output, .. } => match (f(input), f(output)) {
                    (Fiber::S2, Fiber::T2) => Some(LocalMove::Tube),
                    (Fiber::S2, Fiber::K2) => Some(LocalMove::CrossTube),
                    _ => None,
                },
                Event::Detube { input, outcome, .. } => match (f(input), *outcome) {
                    (Fiber::T2, Fiber::S2) => Some(LocalMove::Untube),
                    (Fiber::K2, Fiber::S2) => Some(LocalMove::UncrossTube),
                    _ => None,
                },
            };
            m.ok_or(i)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_member, realizable_family, ConditionBVariant};
    use crate::digraph::is_isomorphic;
    use crate::sim::{check_level_constraint, ev::*};
    use FiberLabel::*;

    fn path(labels: &[FiberLabel]) -> LabeledDigraph {
        LabeledDigraph::path(Mode::Three, labels).unwrap()
    }

    fn iso(a: &LabeledDigraph, b: &LabeledDigraph) -> bool {
        is_isomorphic(a, b, false).is_some()
    }

    #[test]
    fn blocks() {
        let (g, s) = fundamental_block(&Block::S3);
        assert!(iso(&g, &path(&[S2])));
        assert_eq!(s, SurgerySequence::simple(Mode::Three, [birth(0), death(0)]));
        let (g, s) = fundamental_block(&Block::Lens("a".into()));
        assert!(iso(&g, &path(&[S2, T2, S2])));
        assert_eq!(s.hints().cloned().collect::<Vec<_>>(), vec![Summand::Lens("a".into())]);
        let (g, s) = fundamental_block(&Block::Klein(Summand::TwistedS1xS2));
        assert!(iso(&g, &path(&[S2, K2, S2])));
        assert!(matches!(s.groups[1].steps[0], Event::SelfTube { framing: Framing::Reverse, .. }));
    }

    #[test]
    fn lens_realization_is_the_lens_block() {
        let g = path(&[S2, T2, S2]);
        let params = RealizationParams { lens_assignment: [("e2".to_string(), "a".to_string())].into(), ..Default::default() };
        let s = realize(&g, &params, ConditionBVariant::default()).unwrap();
        assert_eq!(s, fundamental_block(&Block::Lens("a".into())).1);
    }

    #[test]
    fn grouped_bundle_pairs() {
        let g = path(&[S2, S2]);
        let params = RealizationParams { extra_bundle_pairs: [("v2".to_string(), 2)].into(), ..Default::default() };
        let s = realize(&g, &params, ConditionBVariant::default()).unwrap();
        assert_eq!(s.groups[1].steps.len(), 4);
        let sim = simulate(&s).unwrap();
        assert!(iso(&sim.reeb, &g));
        let fam = realizable_family(&g, ConditionBVariant::default()).unwrap();
        assert_eq!(fam.min_sphere_bundles, 1);
        let m: ManifoldClass = s.hints().cloned().collect();
        assert_eq!(m.counts().sphere_bundles, 2);
        assert!(is_member(&m, &fam));

        let simple = normalize_to_simple(&s).unwrap();
        assert_eq!(simple.step_count(), 6);
        assert!(simple.is_simple());
        assert_eq!(simple.index_counts(), s.index_counts());
        let t0 = simulate(&s).unwrap().trace;
        let t1 = simulate(&simple).unwrap().trace;
        let ends = |t: &crate::sim::LevelTrace| t.entries.iter().map(|e| e.components.clone()).collect::<Vec<_>>();
        let (e0, e1) = (ends(&t0), ends(&t1));
        assert_eq!((e0.first(), e0.last()), (e1.first(), e1.last()));
        assert_eq!(e1[1], e0[1]);
        let expanded = expand_deg2_vertex(&g, "v2", 2).unwrap();
        assert!(iso(&simulate(&simple).unwrap().reeb, &expanded));
        assert!(local_moves(&simple).is_ok());
    }

    #[test]
    fn klein_pass_through_is_refused() {
        let g = path(&[S2, K2, K2, S2]);
        let err = realize(&g, &RealizationParams::default(), ConditionBVariant::default()).unwrap_err();
        assert!(matches!(err, RealizeError::Conditions(ClassifyError::ConditionB { .. })));
        let s = realize(&g, &RealizationParams::default(), ConditionSet::VanishingW2).unwrap();
        let sim = simulate(&s).unwrap();
        assert!(iso(&sim.reeb, &g));
        assert!(check_level_constraint(&sim.trace, &Fiber::sphere_torus_klein()).is_ok());
    }

    #[test]
    fn params_are_checked() {
        let g = path(&[S2, T2, S2]);
        let d = ConditionBVariant::default();
        let with = |p: RealizationParams| realize(&g, &p, d);
        assert!(with(RealizationParams { lens_assignment: [("e1".into(), "x".into())].into(), ..Default::default() }).is_err());
        assert!(with(RealizationParams { extra_bundle_pairs: [("v2".into(), 1)].into(), ..Default::default() }).is_err());
        assert!(with(RealizationParams { twisted_bundles: 1, ..Default::default() }).is_err());
        let k = path(&[S2, K2, S2]);
        let p = RealizationParams { klein_assignment: [("e2".into(), Summand::S1xS2)].into(), ..Default::default() };
        assert!(realize(&k, &p, d).is_err());
        let p = RealizationParams { klein_assignment: [("e2".into(), Summand::TwistedS1xS2)].into(), ..Default::default() };
        assert_eq!(realize(&k, &p, d).unwrap().hints().cloned().collect::<Vec<_>>(), vec![Summand::TwistedS1xS2]);
    }

    #[test]
    fn splicing_blocks() {
        let lens = fundamental_block(&Block::Lens("a".into()));
        let klein = fundamental_block(&Block::Klein(Summand::NonOrientableDeg1("k".into())));
        let (g, s) = compose_connected_sum(&lens, &klein).unwrap();
        assert!(iso(&g, &path(&[S2, T2, S2, K2, S2])));
        assert!(iso(&simulate(&s).unwrap().reeb, &g));
        assert_eq!(s.hints().count(), 2);

        let s3 = fundamental_block(&Block::S3);
        let (g, s) = compose_connected_sum(&s3, &s3).unwrap();
        assert!(iso(&g, &path(&[S2])));
        assert_eq!(s, s3.1);

        let bundle = fundamental_block(&Block::SphereBundle);
        let left = compose_connected_sum(&compose_connected_sum(&lens, &klein).unwrap(), &bundle).unwrap();
        let right = compose_connected_sum(&lens, &compose_connected_sum(&klein, &bundle).unwrap()).unwrap();
        assert!(iso(&left.0, &right.0));
        assert!(iso(&simulate(&left.1).unwrap().reeb, &simulate(&right.1).unwrap().reeb));

        let theta = simulate(&SurgerySequence::simple(
            Mode::Three,
            [birth(0), split(0, (1, Fiber::S2), (2, Fiber::S2)), merge(1, 2, 3), death(3)],
        ))
        .unwrap()
        .reeb;
        assert!(compose_digraphs(&theta, &path(&[S2, S2])).is_ok());
        let two_sinks = relabel_canonical(&simulate(&SurgerySequence::simple(
            Mode::Three,
            [birth(0), split(0, (1, Fiber::S2), (2, Fiber::S2)), death(1), death(2)],
        ))
        .unwrap()
        .reeb);
        assert!(compose_digraphs(&two_sinks, &path(&[S2])).is_ok());
        assert_eq!(
            compose_sequences(&SurgerySequence::simple(Mode::Three, [birth(0), tube(0, 1, Framing::Preserve), detube(1, 2, Fiber::S2), death(2)]), &SurgerySequence::simple(Mode::Three, [birth(0), tube(0, 1, Framing::Preserve), detube(1, 2, Fiber::S2), death(2)])).map(|s| s.step_count()),
            Ok(6)
        );
    }

    #[test]
    fn diamond_expansion() {
        let g = path(&[S2, S2]);
        for l in 1..=3 {
            let e = expand_deg2_vertex(&g, "v2", l).unwrap();
            let (a, b) = (invariants(&g).unwrap(), invariants(&e).unwrap());
            assert_eq!(b.beta1, a.beta1 + l);
            assert_eq!(b.n_deg2_sphere_sphere + 1, a.n_deg2_sphere_sphere);
            assert_eq!((b.n_torus_edges, b.n_klein_edges), (a.n_torus_edges, a.n_klein_edges));
        }
        assert!(expand_deg2_vertex(&g, "v1", 1).is_err());
        assert!(expand_deg2_vertex(&path(&[S2, T2, S2]), "v2", 1).is_err());
        assert!(expand_deg2_vertex(&g, "v2", 0).is_err());
    }

    #[test]
    fn witnesses_realize_their_manifold() {
        for desc in ["", "S1xS2", "Lens(a) # NOr1(b) # TwS1xS2"] {
            let m: ManifoldClass = desc.parse().unwrap();
            let (g, s) = manifold_witness(&m);
            assert!(iso(&simulate(&s).unwrap().reeb, &g));
            assert_eq!(s.hints().cloned().collect::<ManifoldClass>(), m);
            let fam = realizable_family(&g, ConditionBVariant::default()).unwrap();
            assert!(is_member(&m, &fam));
        }
    }

    #[test]
    fn catalog_rejects_projective_planes() {
        let s = SurgerySequence::simple(
            Mode::Three,
            [birth(0), tube(0, 1, Framing::Reverse), split(1, (2, Fiber::RP2), (3, Fiber::RP2)), merge(2, 3, 4), detube(4, 5, Fiber::S2), death(5)],
        );
        assert_eq!(local_moves(&s), Err(2));
        let absorb = SurgerySequence::simple(
            Mode::Three,
            [birth(0), tube(0, 1, Framing::Preserve), birth(2), merge(1, 2, 3), detube(3, 4, Fiber::S2), death(4)],
        );
        assert_eq!(
            local_moves(&absorb).unwrap(),
            vec![LocalMove::Birth, LocalMove::Tube, LocalMove::Birth, LocalMove::Absorb, LocalMove::Untube, LocalMove::Death]
        );
    }
}
