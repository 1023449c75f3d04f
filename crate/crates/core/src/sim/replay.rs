//! Replaying a handle sequence into Reeb data and a level trace.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use super::{CompId, Event, Fiber, SurgerySequence};
use crate::digraph::{FiberLabel, LabeledDigraph, Level, Mode};
use crate::surface::SurfaceType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("sequence has no steps")]
    Empty,
    #[error("group {group} is empty")]
    EmptyGroup { group: usize },
    #[error("group {group} has a lower level than the group before it")]
    DecreasingLevel { group: usize },
    #[error("group {group}: a birth or death must be the only critical point at its vertex")]
    ExtremumNotAlone { group: usize },
    #[error("group {group}: steps do not form one connected critical component")]
    DisconnectedGroup { group: usize },
    #[error("group {group}: component {id} is not live")]
    NotLive { group: usize, id: CompId },
    #[error("group {group}: component id {id} is created twice")]
    IdReuse { group: usize, id: CompId },
    #[error("group {group}: death of {id}, which is {fiber} rather than a sphere")]
    DeathOfNonSphere { group: usize, id: CompId, fiber: Fiber },
    #[error("group {group}: {message}")]
    IllegalOutcome { group: usize, message: String },
    #[error("group {group}: {message}")]
    ModeMismatch { group: usize, message: String },
    #[error("component {id} is created and consumed at the same level")]
    FlatEdge { id: CompId },
    #[error("components still live after the last step: {}", fmt_ids(.live))]
    Incomplete { live: Vec<CompId> },
    #[error("the sequence describes a disconnected manifold")]
    Disconnected,
    #[error("component {id} of type {fiber} has no Reeb digraph label")]
    Unlabelable { id: CompId, fiber: Fiber },
}

fn fmt_ids(ids: &[CompId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// The regular level set between two consecutive groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// `None` below the first group.
    pub lower: Option<Level>,
    /// `None` above the last group.
    pub upper: Option<Level>,
    /// Sorted multiset of component types.
    pub components: Vec<Fiber>,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = |l: Option<Level>, inf: &str| l.map_or(inf.to_string(), |x| x.to_string());
        write!(f, "({}, {}):", bound(self.lower, "-inf"), bound(self.upper, "+inf"))?;
        if self.components.is_empty() {
            f.write_str(" empty")
        } else {
            self.components.iter().try_for_each(|c| write!(f, " {c}"))
        }
    }
}

/// Level set types across the whole sequence, one entry per gap between
/// groups (including the empty ones below and above everything).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelTrace {
    pub entries: Vec<TraceEntry>,
}

impl fmt::Display for LevelTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.iter().try_for_each(|e| writeln!(f, "{e}"))
    }
}

/// Lifetime of one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRecord {
    pub id: CompId,
    pub fiber: Fiber,
    /// Group that created it.
    pub born: usize,
    /// Group that consumed it.
    pub died: usize,
}

impl ComponentRecord {
    /// Components that survive past their group become Reeb edges.
    pub fn is_edge(&self) -> bool {
        self.born != self.died
    }
}

/// Everything learned from a successful replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub trace: LevelTrace,
    /// Every component, in creation order.
    pub components: Vec<ComponentRecord>,
    /// Multiset of live types after every individual step, including the
    /// non-regular intermediate states inside groups.
    pub step_states: Vec<Vec<Fiber>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub reeb: LabeledDigraph,
    pub trace: LevelTrace,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

fn sphere_of(mode: Mode) -> Fiber {
    Fiber::sphere(mode)
}

fn surface_of(group: usize, mode: Mode, f: Fiber) -> Result<SurfaceType, SimError> {
    match f {
        Fiber::Surface(t) => Ok(t),
        Fiber::Circle => Err(SimError::ModeMismatch { group, message: format!("circle component in mode {mode}") }),
    }
}

/// Output types of `event` given the types of its inputs.
fn outputs_of(group: usize, mode: Mode, event: &Event, inputs: &[Fiber]) -> Result<Vec<Fiber>, SimError> {
    let mismatch = |message: String| SimError::ModeMismatch { group, message };
    let illegal = |message: String| SimError::IllegalOutcome { group, message };
    Ok(match (mode, event) {
        (_, Event::Birth { .. }) => vec![sphere_of(mode)],
        (_, Event::Death { input }) => {
            if !inputs[0].is_sphere() || !inputs[0].fits(mode) {
                return Err(SimError::DeathOfNonSphere { group, id: *input, fiber: inputs[0] });
            }
            vec![]
        }
        (Mode::Two, Event::Merge { .. } | Event::SelfTube { .. }) => vec![Fiber::Circle],
        (Mode::Two, Event::Split { outputs, .. }) => {
            if outputs.iter().any(|(_, f)| *f != Fiber::Circle) {
                return Err(mismatch("mode 2 splits produce two circles".into()));
            }
            vec![Fiber::Circle, Fiber::Circle]
        }
        (Mode::Two, Event::Detube { .. }) => return Err(mismatch("detube has no meaning in mode 2".into())),
        (Mode::Three, Event::Merge { .. }) => {
            let (a, b) = (surface_of(group, mode, inputs[0])?, surface_of(group, mode, inputs[1])?);
            vec![Fiber::Surface(a.merge_components(b))]
        }
        (Mode::Three, Event::SelfTube { framing, .. }) => {
            vec![Fiber::Surface(surface_of(group, mode, inputs[0])?.self_tube(*framing))]
        }
        (Mode::Three, Event::Split { outputs, .. }) => {
            let t = surface_of(group, mode, inputs[0])?;
            let (a, b) = (surface_of(group, mode, outputs[0].1)?, surface_of(group, mode, outputs[1].1)?);
            let pair = if a <= b { (a, b) } else { (b, a) };
            if !t.split_outcomes().contains(&pair) {
                return Err(illegal(format!("{t} cannot split into {a} and {b}")));
            }
            vec![outputs[0].1, outputs[1].1]
        }
        (Mode::Three, Event::Detube { outcome, .. }) => {
            let t = surface_of(group, mode, inputs[0])?;
            let o = surface_of(group, mode, *outcome)?;
            if !t.detube_outcomes().contains(&o) {
                return Err(illegal(format!("{t} cannot be detubed into {o}")));
            }
            vec![*outcome]
        }
    })
}

/// Validates `seq` and replays it.
pub fn replay(seq: &SurgerySequence) -> Result<Replay, SimError> {
    if seq.groups.is_empty() {
        return Err(SimError::Empty);
    }
    let mode = seq.mode;
    let mut live: HashMap<CompId, usize> = HashMap::new();
    let mut seen: HashSet<CompId> = HashSet::new();
    let mut components: Vec<ComponentRecord> = Vec::new();
    let mut step_states = Vec::new();
    let mut trace = LevelTrace::default();
    let snapshot = |live: &HashMap<CompId, usize>, components: &[ComponentRecord]| {
        let mut fs: Vec<Fiber> = live.values().map(|&i| components[i].fiber).collect();
        fs.sort();
        fs
    };
    trace.entries.push(TraceEntry { lower: None, upper: Some(seq.groups[0].level), components: vec![] });

    for (gi, group) in seq.groups.iter().enumerate() {
        if group.steps.is_empty() {
            return Err(SimError::EmptyGroup { group: gi });
        }
        if gi > 0 && group.level < seq.groups[gi - 1].level {
            return Err(SimError::DecreasingLevel { group: gi });
        }
        if group.steps.len() > 1 && group.steps.iter().any(Event::is_extremum) {
            return Err(SimError::ExtremumNotAlone { group: gi });
        }
        let mut touched: Vec<CompId> = Vec::new();
        let mut links: Vec<(CompId, CompId)> = Vec::new();
        for event in &group.steps {
            let ins = event.inputs();
            let mut in_fibers = Vec::with_capacity(ins.len());
            for id in &ins {
                let idx = live.remove(id).ok_or(SimError::NotLive { group: gi, id: *id })?;
                let rec = &mut components[idx];
                if rec.born != gi && seq.groups[rec.born].level == group.level {
                    return Err(SimError::FlatEdge { id: *id });
                }
                rec.died = gi;
                in_fibers.push(rec.fiber);
            }
            let out_fibers = outputs_of(gi, mode, event, &in_fibers)?;
            let outs = event.outputs();
            for (id, fiber) in outs.iter().zip(out_fibers) {
                if !seen.insert(*id) {
                    return Err(SimError::IdReuse { group: gi, id: *id });
                }
                live.insert(*id, components.len());
                components.push(ComponentRecord { id: *id, fiber, born: gi, died: usize::MAX });
            }
            let all: Vec<CompId> = ins.iter().chain(&outs).copied().collect();
            links.extend(all.windows(2).map(|w| (w[0], w[1])));
            touched.extend(all);
            step_states.push(snapshot(&live, &components));
        }
        touched.sort();
        touched.dedup();
        if touched.len() > 1 {
            let pos = |c: &CompId| touched.binary_search(c).expect("touched");
            let mut uf = UnionFind::new(touched.len());
            for (a, b) in &links {
                uf.union(pos(a), pos(b));
            }
            let root = uf.find(0);
            if (1..touched.len()).any(|i| uf.find(i) != root) {
                return Err(SimError::DisconnectedGroup { group: gi });
            }
        }
        trace.entries.push(TraceEntry {
            lower: Some(group.level),
            upper: seq.groups.get(gi + 1).map(|g| g.level),
            components: snapshot(&live, &components),
        });
    }

    if !live.is_empty() {
        let mut ids: Vec<CompId> = live.into_keys().collect();
        ids.sort();
        return Err(SimError::Incomplete { live: ids });
    }
    let mut uf = UnionFind::new(seq.groups.len());
    for c in &components {
        uf.union(c.born, c.died);
    }
    let root = uf.find(0);
    if (1..seq.groups.len()).any(|g| uf.find(g) != root) {
        return Err(SimError::Disconnected);
    }
    Ok(Replay { trace, components, step_states })
}

/// Level trace of a valid sequence; does not require representable labels.
pub fn trace(seq: &SurgerySequence) -> Result<LevelTrace, SimError> {
    replay(seq).map(|r| r.trace)
}

/// Reeb data and level trace of a complete sequence.
///
/// Group `i` becomes vertex `v{i+1}` at the group's level; every component
/// that outlives its group becomes an edge `e{k}` (numbered in creation
/// order) labeled by its type.
pub fn simulate(seq: &SurgerySequence) -> Result<Simulation, SimError> {
    let r = replay(seq)?;
    let vertices = seq.groups.iter().enumerate().map(|(i, g)| (format!("v{}", i + 1), g.level));
    let mut edges = Vec::new();
    for c in r.components.iter().filter(|c| c.is_edge()) {
        let label = match c.fiber {
            Fiber::Circle => FiberLabel::S1,
            Fiber::Surface(t) => FiberLabel::from_surface(t).ok_or(SimError::Unlabelable { id: c.id, fiber: c.fiber })?,
        };
        edges.push((format!("e{}", edges.len() + 1), format!("v{}", c.born + 1), format!("v{}", c.died + 1), label));
    }
    let reeb = LabeledDigraph::new(seq.mode, vertices, edges).map_err(|_| SimError::Disconnected)?;
    Ok(Simulation { reeb, trace: r.trace })
}

/// First level set component outside `allowed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelViolation {
    pub entry: usize,
    pub lower: Option<Level>,
    pub upper: Option<Level>,
    pub fiber: Fiber,
}

impl fmt::Display for LevelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |l: Option<Level>| l.map_or("inf".to_string(), |x| x.to_string());
        write!(f, "{} appears between levels {} and {}", self.fiber, b(self.lower), b(self.upper))
    }
}

/// Checks that every traced component type lies in `allowed`.
pub fn check_level_constraint(trace: &LevelTrace, allowed: &BTreeSet<Fiber>) -> Result<(), LevelViolation> {
    for (i, e) in trace.entries.iter().enumerate() {
        if let Some(&fiber) = e.components.iter().find(|f| !allowed.contains(f)) {
            return Err(LevelViolation { entry: i, lower: e.lower, upper: e.upper, fiber });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{invariants, is_isomorphic, validate_pre_m};
    use crate::sim::ev::*;
    use crate::sim::StepGroup;
    use crate::surface::Framing::*;
    use FiberLabel::*;

    fn lv(n: i64) -> Level {
        Level::from_integer(n)
    }

    #[test]
    fn klein_block_replays_to_its_path() {
        let seq = SurgerySequence::simple(Mode::Three, [birth(1), tube(1, 2, Reverse), detube(2, 3, Fiber::S2), death(3)]);
        let sim = simulate(&seq).unwrap();
        let expected = LabeledDigraph::path(Mode::Three, &[S2, K2, S2]).unwrap();
        assert!(is_isomorphic(&sim.reeb, &expected, true).is_some());
        let kinds: Vec<Vec<Fiber>> = sim.trace.entries.iter().map(|e| e.components.clone()).collect();
        assert_eq!(kinds, vec![vec![], vec![Fiber::S2], vec![Fiber::K2], vec![Fiber::S2], vec![]]);
        assert!(check_level_constraint(&sim.trace, &Fiber::sphere_torus_klein()).is_ok());
    }

    #[test]
    fn two_critical_points_give_one_edge() {
        let sim = simulate(&SurgerySequence::simple(Mode::Three, [birth(0), death(0)])).unwrap();
        assert_eq!(sim.reeb.edges().len(), 1);
        assert_eq!(sim.reeb.vertices()[0].level, lv(1));
        assert!(is_isomorphic(&sim.reeb, &LabeledDigraph::path(Mode::Three, &[S2]).unwrap(), true).is_some());
    }

    #[test]
    fn split_then_merge_makes_a_cycle() {
        let seq = SurgerySequence::simple(
            Mode::Three,
            [birth(0), split(0, (1, Fiber::S2), (2, Fiber::S2)), merge(1, 2, 3), death(3)],
        );
        let sim = simulate(&seq).unwrap();
        let inv = invariants(&sim.reeb).unwrap();
        assert_eq!(inv.beta1, 1);
        assert_eq!(inv.n_edges, 4);
        assert!(sim.reeb.edges().iter().all(|e| e.label == S2));
    }

    #[test]
    fn grouped_split_merge_is_a_degree_two_vertex() {
        let seq = SurgerySequence::new(
            Mode::Three,
            vec![
                StepGroup::new(lv(0), vec![birth(0)]),
                StepGroup::new(lv(1), vec![split(0, (1, Fiber::S2), (2, Fiber::S2)), merge(1, 2, 3)]),
                StepGroup::new(lv(2), vec![death(3)]),
            ],
        );
        let sim = simulate(&seq).unwrap();
        let inv = invariants(&sim.reeb).unwrap();
        assert_eq!((inv.beta1, inv.n_deg2_sphere_sphere), (0, 1));
        assert_eq!(sim.trace.entries.len(), 4);
        assert_eq!(seq.alternating_index_sum(), 0);
    }

    #[test]
    fn projective_plane_split_is_detected() {
        let seq = SurgerySequence::simple(
            Mode::Three,
            [
                birth(0),
                tube(0, 1, Reverse),
                split(1, (2, Fiber::RP2), (3, Fiber::RP2)),
                merge(2, 3, 4),
                detube(4, 5, Fiber::S2),
                death(5),
            ],
        );
        let t = trace(&seq).unwrap();
        let v = check_level_constraint(&t, &Fiber::sphere_torus_klein()).unwrap_err();
        assert_eq!(v.fiber, Fiber::RP2);
        assert_eq!((v.lower, v.upper), (Some(lv(3)), Some(lv(4))));
        assert!(matches!(simulate(&seq), Err(SimError::Unlabelable { .. })));
        assert!(check_level_constraint(&LevelTrace::default(), &Fiber::sphere_torus_klein()).is_ok());
    }

    #[test]
    fn rejects_malformed_sequences() {
        let three = |steps: Vec<Event>| simulate(&SurgerySequence::simple(Mode::Three, steps));
        assert_eq!(three(vec![birth(0)]).unwrap_err(), SimError::Incomplete { live: vec![CompId(0)] });
        assert!(matches!(three(vec![birth(0), tube(0, 1, Preserve), death(1)]), Err(SimError::DeathOfNonSphere { .. })));
        assert!(matches!(three(vec![birth(0), death(0), birth(0), death(0)]), Err(SimError::IdReuse { .. })));
        assert!(matches!(three(vec![birth(0), death(1)]), Err(SimError::NotLive { .. })));
        assert_eq!(three(vec![birth(0), death(0), birth(1), death(1)]).unwrap_err(), SimError::Disconnected);
        assert!(matches!(
            three(vec![birth(0), split(0, (1, Fiber::S2), (2, Fiber::T2)), merge(1, 2, 3), death(3)]),
            Err(SimError::IllegalOutcome { .. })
        ));
        assert!(matches!(three(vec![birth(0), detube(0, 1, Fiber::S2), death(1)]), Err(SimError::IllegalOutcome { .. })));
        assert!(matches!(
            simulate(&SurgerySequence::simple(Mode::Two, vec![birth(0), detube(0, 1, Fiber::Circle), death(1)])),
            Err(SimError::ModeMismatch { .. })
        ));
        assert_eq!(simulate(&SurgerySequence::new(Mode::Three, vec![])).unwrap_err(), SimError::Empty);

        let grouped = SurgerySequence::new(
            Mode::Three,
            vec![StepGroup::new(lv(0), vec![birth(0), birth(1)]), StepGroup::new(lv(1), vec![merge(0, 1, 2)])],
        );
        assert!(matches!(simulate(&grouped), Err(SimError::ExtremumNotAlone { group: 0 })));

        let flat = SurgerySequence::new(
            Mode::Three,
            vec![StepGroup::new(lv(0), vec![birth(0)]), StepGroup::new(lv(0), vec![death(0)])],
        );
        assert_eq!(simulate(&flat).unwrap_err(), SimError::FlatEdge { id: CompId(0) });

        let backwards = SurgerySequence::new(
            Mode::Three,
            vec![StepGroup::new(lv(1), vec![birth(0)]), StepGroup::new(lv(0), vec![death(0)])],
        );
        assert_eq!(simulate(&backwards).unwrap_err(), SimError::DecreasingLevel { group: 1 });
    }

    #[test]
    fn group_must_be_connected() {
        let seq = SurgerySequence::new(
            Mode::Three,
            vec![
                StepGroup::new(lv(0), vec![birth(0)]),
                StepGroup::new(lv(1), vec![split(0, (1, Fiber::S2), (2, Fiber::S2))]),
                StepGroup::new(lv(2), vec![tube(1, 3, Preserve), tube(2, 4, Preserve)]),
                StepGroup::new(lv(3), vec![detube(3, 5, Fiber::S2)]),
                StepGroup::new(lv(4), vec![detube(4, 6, Fiber::S2)]),
                StepGroup::new(lv(5), vec![merge(5, 6, 7)]),
                StepGroup::new(lv(6), vec![death(7)]),
            ],
        );
        assert_eq!(simulate(&seq).unwrap_err(), SimError::DisconnectedGroup { group: 2 });
    }

    #[test]
    fn mode_two_torus_height_function() {
        let seq = SurgerySequence::simple(
            Mode::Two,
            [birth(0), split(0, (1, Fiber::Circle), (2, Fiber::Circle)), merge(1, 2, 3), death(3)],
        );
        let sim = simulate(&seq).unwrap();
        assert!(validate_pre_m(&sim.reeb).is_pre_m());
        assert!(sim.reeb.edges().iter().all(|e| e.label == S1));
        assert_eq!(invariants(&sim.reeb).unwrap().beta1, 1);
        // χ = 1 - 2 + 1 = 0: the torus
        assert_eq!(seq.alternating_index_sum(), 0);
    }
}
