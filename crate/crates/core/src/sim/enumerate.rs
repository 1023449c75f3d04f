//! Exhaustive enumeration of complete handle sequences.
//!
//! Component ids are handed out in creation order, so two generated
//! sequences are never renamings of each other. The remaining symmetries
//! are fixed by convention: merge inputs are increasing, split outputs have
//! non-decreasing types, and of two split outputs of the same type the
//! first is consumed no later than the second.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{replay, CompId, Event, Fiber, StepGroup, SurgerySequence};
use crate::digraph::{Level, Mode};
use crate::surface::{Framing, SurfaceType};

pub const DEFAULT_STEP_BOUND: usize = 10;

/// Depth at which the search tree is dealt out to shards.
const SHARD_DEPTH: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("{max_steps} steps exceeds the configured bound of {bound}")]
    BoundExceeded { max_steps: usize, bound: usize },
    #[error("shard {index} of {count} does not exist")]
    InvalidShard { index: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub mode: Mode,
    pub max_steps: usize,
    /// Types every level component must have, including the non-regular
    /// states between steps of one group.
    pub allowed: BTreeSet<Fiber>,
    /// One step per group.
    pub simple_only: bool,
    /// Skip every step that produces a non-orientable component, and the
    /// circle-to-circle saddle in mode 2.
    pub orientable_only: bool,
    /// Upper bound on the number of Reeb edges.
    pub max_edges: Option<usize>,
    pub step_bound: usize,
}

impl EnumerationSpec {
    /// Defaults: level components in `{S2, T2, K2}` (circles in mode 2),
    /// grouped, any orientability, no edge bound.
    pub fn new(mode: Mode, max_steps: usize) -> Self {
        let allowed = match mode {
            Mode::Two => [Fiber::Circle].into(),
            Mode::Three => Fiber::sphere_torus_klein(),
        };
        EnumerationSpec {
            mode,
            max_steps,
            allowed,
            simple_only: false,
            orientable_only: false,
            max_edges: None,
            step_bound: DEFAULT_STEP_BOUND,
        }
    }

    pub fn allowed(mut self, allowed: impl IntoIterator<Item = Fiber>) -> Self {
        self.allowed = allowed.into_iter().collect();
        self
    }

    pub fn simple_only(mut self, yes: bool) -> Self {
        self.simple_only = yes;
        self
    }

    pub fn orientable_only(mut self, yes: bool) -> Self {
        self.orientable_only = yes;
        self
    }

    pub fn max_edges(mut self, n: usize) -> Self {
        self.max_edges = Some(n);
        self
    }
}

/// Selects every `count`-th subtree of the search, starting at `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shard {
    pub index: usize,
    pub count: usize,
}

impl Shard {
    pub const ALL: Shard = Shard { index: 0, count: 1 };
}

/// Crosscap weight: what detubes must remove before a component can die.
fn weight(f: Fiber) -> usize {
    match f {
        Fiber::Circle => 0,
        Fiber::Surface(SurfaceType::Orientable(g)) => 2 * g as usize,
        Fiber::Surface(SurfaceType::NonOrientable(k)) => k as usize,
    }
}

#[derive(Clone, Default)]
struct State {
    live: Vec<(CompId, Fiber)>,
    /// Connected piece of the partial manifold each live component lies in.
    piece: Vec<u32>,
    /// `(later, earlier)` outputs of one split with the same type.
    twins: Vec<(CompId, CompId)>,
    next: u32,
    groups: Vec<Vec<Event>>,
    /// Components created in the last group.
    fresh: Vec<CompId>,
    edges: usize,
}

impl State {
    fn piece_of(&self, c: CompId) -> u32 {
        self.piece[self.live.iter().position(|(id, _)| *id == c).expect("live component")]
    }

    /// Whether killing `c` would finish one piece while another lives on.
    fn strands_a_piece(&self, c: CompId) -> bool {
        let p = self.piece_of(c);
        self.live.len() > 1 && self.live.iter().zip(&self.piece).all(|((id, _), q)| *id == c || *q != p)
    }

    fn steps(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    fn is_live(&self, c: CompId) -> bool {
        self.live.iter().any(|(id, _)| *id == c)
    }

    /// Edges after closing the current group.
    fn edges_after_close(&self) -> usize {
        self.edges + self.fresh.iter().filter(|c| self.is_live(**c)).count()
    }

    fn group_connected(&self) -> bool {
        let Some(group) = self.groups.last() else { return true };
        let mut ids: Vec<CompId> = group.iter().flat_map(|e| e.inputs().into_iter().chain(e.outputs())).collect();
        ids.sort();
        ids.dedup();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn root(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            r
        }
        for e in group {
            let touched: Vec<usize> =
                e.inputs().into_iter().chain(e.outputs()).map(|c| ids.binary_search(&c).unwrap()).collect();
            for w in touched.windows(2) {
                let (a, b) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let r0 = root(&mut parent, 0);
        (1..ids.len()).all(|i| root(&mut parent, i) == r0)
    }

    fn apply(&mut self, e: &Event, outs: &[Fiber], new_group: bool) {
        if new_group {
            self.edges = self.edges_after_close();
            self.fresh.clear();
            self.groups.push(Vec::new());
        }
        let ins = e.inputs();
        let pieces: Vec<u32> = ins.iter().map(|c| self.piece_of(*c)).collect();
        let piece = match pieces.as_slice() {
            [] => self.next,
            [p] => *p,
            [p, q, ..] => {
                let (p, q) = (*p, *q);
                self.piece.iter_mut().filter(|x| **x == q).for_each(|x| *x = p);
                p
            }
        };
        let mut i = 0;
        while i < self.live.len() {
            if ins.contains(&self.live[i].0) {
                self.live.remove(i);
                self.piece.remove(i);
            } else {
                i += 1;
            }
        }
        self.twins.retain(|(a, b)| !ins.contains(a) && !ins.contains(b));
        for (id, f) in e.outputs().into_iter().zip(outs) {
            self.live.push((id, *f));
            self.piece.push(piece);
            self.fresh.push(id);
        }
        if let Event::Split { outputs: [(a, fa), (b, fb)], .. } = e {
            if fa == fb {
                self.twins.push((*b, *a));
            }
        }
        self.next = self.next.max(e.outputs().iter().map(|c| c.0 + 1).max().unwrap_or(0));
        self.groups.last_mut().expect("group").push(e.clone());
    }
}

struct Search<'a, F> {
    spec: &'a EnumerationSpec,
    shard: Shard,
    counter: usize,
    visit: F,
    yielded: usize,
}

impl<F: FnMut(&SurgerySequence)> Search<'_, F> {
    fn fits(&self, f: Fiber) -> bool {
        self.spec.allowed.contains(&f) && (!self.spec.orientable_only || f == Fiber::Circle || matches!(f, Fiber::Surface(t) if t.is_orientable()))
    }

    /// Events available from `s`, with the types of their outputs.
    fn moves(&self, s: &State) -> Vec<(Event, Vec<Fiber>)> {
        let mode = self.spec.mode;
        let sphere = Fiber::sphere(mode);
        let fresh = |k: u32| CompId(s.next + k);
        let mut out = Vec::new();
        if self.fits(sphere) {
            out.push((Event::Birth { output: fresh(0) }, vec![sphere]));
        }
        for (i, &(a, fa)) in s.live.iter().enumerate() {
            if fa.is_sphere() {
                out.push((Event::Death { input: a }, vec![]));
            }
            for &(b, fb) in &s.live[i + 1..] {
                let merged = match (fa, fb) {
                    (Fiber::Surface(x), Fiber::Surface(y)) => Fiber::Surface(x.merge_components(y)),
                    _ => Fiber::Circle,
                };
                if self.fits(merged) {
                    let inputs = if a < b { [a, b] } else { [b, a] };
                    out.push((Event::Merge { inputs, output: fresh(0) }, vec![merged]));
                }
            }
            match fa {
                Fiber::Circle => {
                    if !self.spec.orientable_only && self.fits(Fiber::Circle) {
                        out.push((Event::SelfTube { input: a, output: fresh(0), framing: Framing::Reverse }, vec![Fiber::Circle]));
                    }
                    if self.fits(Fiber::Circle) {
                        let outputs = [(fresh(0), Fiber::Circle), (fresh(1), Fiber::Circle)];
                        out.push((Event::Split { input: a, outputs }, vec![Fiber::Circle; 2]));
                    }
                }
                Fiber::Surface(t) => {
                    // framing is meaningless on a non-orientable surface
                    let framings: &[Framing] = if t.is_orientable() { &Framing::ALL } else { &[Framing::Reverse] };
                    for &framing in framings {
                        let r = Fiber::Surface(t.self_tube(framing));
                        if self.fits(r) {
                            out.push((Event::SelfTube { input: a, output: fresh(0), framing }, vec![r]));
                        }
                    }
                    for (x, y) in t.split_outcomes() {
                        let (x, y) = (Fiber::Surface(x), Fiber::Surface(y));
                        if self.fits(x) && self.fits(y) {
                            let outputs = [(fresh(0), x), (fresh(1), y)];
                            out.push((Event::Split { input: a, outputs }, vec![x, y]));
                        }
                    }
                    for o in t.detube_outcomes() {
                        let o = Fiber::Surface(o);
                        if self.fits(o) {
                            out.push((Event::Detube { input: a, output: fresh(0), outcome: o }, vec![o]));
                        }
                    }
                }
            }
        }
        out.retain(|(e, _)| {
            if let Event::Death { input } = e {
                if s.strands_a_piece(*input) {
                    return false;
                }
            }
            let ins = e.inputs();
            ins.iter().all(|c| !s.twins.iter().any(|(later, earlier)| later == c && !ins.contains(earlier)))
        });
        out
    }

    fn emit(&mut self, s: &State) {
        let groups = s
            .groups
            .iter()
            .enumerate()
            .map(|(i, g)| StepGroup::new(Level::from_integer(i as i64 + 1), g.clone()))
            .collect();
        let seq = SurgerySequence::new(self.spec.mode, groups);
        debug_assert!(replay(&seq).is_ok(), "enumerated an invalid sequence: {:?}", replay(&seq));
        self.yielded += 1;
        (self.visit)(&seq);
    }

    fn dfs(&mut self, s: &State) {
        let steps = s.steps();
        if steps == SHARD_DEPTH {
            self.counter += 1;
            if (self.counter - 1) % self.shard.count != self.shard.index {
                return;
            }
        }
        let closable = s.group_connected() && self.spec.max_edges.is_none_or(|m| s.edges_after_close() <= m);
        if steps > 0 && s.live.is_empty() {
            if closable && (steps >= SHARD_DEPTH || self.shard.index == 0) {
                self.emit(s);
            }
            return;
        }
        let remaining = self.spec.max_steps - steps;
        let total_weight: usize = s.live.iter().map(|p| weight(p.1)).sum();
        if s.live.len() + total_weight.div_ceil(2) > remaining {
            return;
        }
        let current_has_extremum = s.groups.last().is_some_and(|g| g.iter().any(Event::is_extremum));
        for (e, outs) in self.moves(s) {
            if steps == 0 && !matches!(e, Event::Birth { .. }) {
                continue;
            }
            if closable || steps == 0 {
                let mut next = s.clone();
                next.apply(&e, &outs, true);
                self.dfs(&next);
            }
            if steps > 0 && !self.spec.simple_only && !current_has_extremum && !e.is_extremum() {
                let mut next = s.clone();
                next.apply(&e, &outs, false);
                self.dfs(&next);
            }
        }
    }
}

/// Visits every complete sequence of `spec` in the given shard and returns
/// how many were visited. The shards of one count partition the full set.
pub fn for_each_sequence<F: FnMut(&SurgerySequence)>(
    spec: &EnumerationSpec,
    shard: Shard,
    visit: F,
) -> Result<usize, EnumerationError> {
    if spec.max_steps > spec.step_bound {
        return Err(EnumerationError::BoundExceeded { max_steps: spec.max_steps, bound: spec.step_bound });
    }
    if shard.count == 0 || shard.index >= shard.count {
        return Err(EnumerationError::InvalidShard { index: shard.index, count: shard.count });
    }
    let mut search = Search { spec, shard, counter: 0, visit, yielded: 0 };
    search.dfs(&State::default());
    Ok(search.yielded)
}

pub fn enumerate_sequences(spec: &EnumerationSpec) -> Result<Vec<SurgerySequence>, EnumerationError> {
    let mut all = Vec::new();
    for_each_sequence(spec, Shard::ALL, |s| all.push(s.clone()))?;
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ev::*;
    use crate::sim::{check_level_constraint, simulate};
    use Framing::*;

    #[test]
    fn only_the_sphere_block_fits_in_two_steps() {
        let spec = EnumerationSpec::new(Mode::Three, 2).allowed([Fiber::S2]);
        let all = enumerate_sequences(&spec).unwrap();
        assert_eq!(all, vec![SurgerySequence::simple(Mode::Three, [birth(0), death(0)])]);
    }

    #[test]
    fn four_simple_steps_in_mode_three() {
        let spec = EnumerationSpec::new(Mode::Three, 4).simple_only(true);
        let all = enumerate_sequences(&spec).unwrap();
        let s = |steps: Vec<Event>| SurgerySequence::simple(Mode::Three, steps);
        assert!(all.contains(&s(vec![birth(0), tube(0, 1, Preserve), detube(1, 2, Fiber::S2), death(2)])));
        assert!(all.contains(&s(vec![birth(0), tube(0, 1, Reverse), detube(1, 2, Fiber::S2), death(2)])));
        // birth-death, the two tube blocks, the theta and both Y shapes
        assert_eq!(all.len(), 6, "{all:#?}");
    }

    #[test]
    fn mode_two_torus_height_function() {
        let all = enumerate_sequences(&EnumerationSpec::new(Mode::Two, 4)).unwrap();
        let torus = SurgerySequence::simple(
            Mode::Two,
            [birth(0), split(0, (1, Fiber::Circle), (2, Fiber::Circle)), merge(1, 2, 3), death(3)],
        );
        assert!(all.contains(&torus));
    }

    #[test]
    fn bound_and_shard_errors() {
        let spec = EnumerationSpec::new(Mode::Three, 11);
        assert_eq!(enumerate_sequences(&spec), Err(EnumerationError::BoundExceeded { max_steps: 11, bound: 10 }));
        let spec = EnumerationSpec::new(Mode::Three, 4);
        assert!(for_each_sequence(&spec, Shard { index: 2, count: 2 }, |_| ()).is_err());
    }

    #[test]
    fn shards_partition_the_search() {
        let spec = EnumerationSpec::new(Mode::Three, 6);
        let all: BTreeSet<String> = enumerate_sequences(&spec).unwrap().iter().map(crate::sim::write_surgery).collect();
        let mut union = BTreeSet::new();
        let mut total = 0;
        for index in 0..3 {
            total += for_each_sequence(&spec, Shard { index, count: 3 }, |s| {
                union.insert(crate::sim::write_surgery(s));
            })
            .unwrap();
        }
        assert_eq!(total, all.len());
        assert_eq!(union, all);
    }

    #[test]
    fn enumerated_sequences_are_valid_and_stay_in_bounds() {
        let spec = EnumerationSpec::new(Mode::Three, 6);
        let all = enumerate_sequences(&spec).unwrap();
        assert!(!all.is_empty());
        let distinct: BTreeSet<String> = all.iter().map(crate::sim::write_surgery).collect();
        assert_eq!(distinct.len(), all.len());
        for s in &all {
            let sim = simulate(s).unwrap();
            assert!(check_level_constraint(&sim.trace, &spec.allowed).is_ok());
            assert_eq!(s.alternating_index_sum(), 0);
        }
    }

    #[test]
    fn orientable_only_excludes_crosscaps() {
        let spec = EnumerationSpec::new(Mode::Three, 6).orientable_only(true);
        for s in enumerate_sequences(&spec).unwrap() {
            let t = crate::sim::trace(&s).unwrap();
            assert!(t.entries.iter().flat_map(|e| &e.components).all(|f| *f != Fiber::K2));
        }
        let spec = EnumerationSpec::new(Mode::Two, 6).orientable_only(true);
        for s in enumerate_sequences(&spec).unwrap() {
            assert!(!s.steps().any(|e| matches!(e, Event::SelfTube { .. })));
        }
    }
}
