//! Combinatorial Morse functions.
//!
//! A [`SurgerySequence`] is an ordered list of handle attachments acting on
//! a tracked family of level components. Each [`StepGroup`] is the preimage
//! of one Reeb vertex: all of its steps happen at the group's level inside
//! one connected component of the critical level set. Replaying a sequence
//! yields its Reeb data and the types of the regular level sets in between.

mod attaching;
mod enumerate;
mod replay;
mod text;

use std::fmt;
use std::str::FromStr;

use crate::classify::Summand;
use crate::digraph::{Level, Mode};
use crate::surface::{Framing, SurfaceType};

pub use attaching::{candidate_classes, handle_profile, HandleProfile};
pub use enumerate::{enumerate_sequences, for_each_sequence, EnumerationError, EnumerationSpec, Shard, DEFAULT_STEP_BOUND};
pub use replay::{check_level_constraint, replay, simulate, trace, ComponentRecord, LevelTrace, Replay, SimError, Simulation, TraceEntry};
pub use text::{parse_surgery, write_surgery};

/// A level component handle. Ids are linear: created once, consumed once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompId(pub u32);

impl fmt::Display for CompId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Type of a level component: a circle in mode 2, a surface in mode 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fiber {
    Circle,
    Surface(SurfaceType),
}

impl Fiber {
    pub const S2: Fiber = Fiber::Surface(SurfaceType::SPHERE);
    pub const T2: Fiber = Fiber::Surface(SurfaceType::TORUS);
    pub const K2: Fiber = Fiber::Surface(SurfaceType::KLEIN);
    pub const RP2: Fiber = Fiber::Surface(SurfaceType::PROJECTIVE_PLANE);

    /// The component created by a birth in this mode.
    pub fn sphere(mode: Mode) -> Fiber {
        match mode {
            Mode::Two => Fiber::Circle,
            Mode::Three => Fiber::S2,
        }
    }

    pub fn is_sphere(self) -> bool {
        matches!(self, Fiber::Circle) || self == Fiber::S2
    }

    pub fn fits(self, mode: Mode) -> bool {
        matches!((self, mode), (Fiber::Circle, Mode::Two) | (Fiber::Surface(_), Mode::Three))
    }

    pub fn euler_char(self) -> i64 {
        match self {
            Fiber::Circle => 0,
            Fiber::Surface(t) => t.euler_char(),
        }
    }

    /// The set `{S2, T2, K2}` every level component must lie in.
    pub fn sphere_torus_klein() -> std::collections::BTreeSet<Fiber> {
        [Fiber::S2, Fiber::T2, Fiber::K2].into_iter().collect()
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fiber::Circle => f.write_str("S1"),
            Fiber::Surface(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for Fiber {
    type Err = crate::surface::SurfaceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "S1" {
            Ok(Fiber::Circle)
        } else {
            s.parse().map(Fiber::Surface)
        }
    }
}

/// One handle attachment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    /// Index 0: a new sphere appears.
    Birth { output: CompId },
    /// Index `m`: a sphere disappears.
    Death { input: CompId },
    /// Index 1 across two components.
    Merge { inputs: [CompId; 2], output: CompId },
    /// Index 1 with both feet on one component. In mode 2 this is the
    /// circle-to-circle saddle that only exists on non-orientable surfaces.
    SelfTube { input: CompId, output: CompId, framing: Framing },
    /// Index 2 along a separating circle (index 1 in mode 2).
    Split { input: CompId, outputs: [(CompId, Fiber); 2] },
    /// Index 2 along a non-separating two-sided circle (mode 3 only).
    Detube { input: CompId, output: CompId, outcome: Fiber },
}

impl Event {
    /// Morse index of the critical point this handle stands for.
    pub fn index(&self, mode: Mode) -> u8 {
        let m = mode.dimension();
        match self {
            Event::Birth { .. } => 0,
            Event::Death { .. } => m,
            Event::Merge { .. } | Event::SelfTube { .. } => 1,
            Event::Split { .. } => m - 1,
            Event::Detube { .. } => 2,
        }
    }

    pub fn inputs(&self) -> Vec<CompId> {
        match self {
            Event::Birth { .. } => vec![],
            Event::Death { input } | Event::SelfTube { input, .. } | Event::Split { input, .. } | Event::Detube { input, .. } => {
                vec![*input]
            }
            Event::Merge { inputs, .. } => inputs.to_vec(),
        }
    }

    pub fn outputs(&self) -> Vec<CompId> {
        match self {
            Event::Death { .. } => vec![],
            Event::Birth { output } | Event::Merge { output, .. } | Event::SelfTube { output, .. } | Event::Detube { output, .. } => {
                vec![*output]
            }
            Event::Split { outputs, .. } => vec![outputs[0].0, outputs[1].0],
        }
    }

    pub fn is_extremum(&self) -> bool {
        matches!(self, Event::Birth { .. } | Event::Death { .. })
    }
}

/// The critical points mapped to one Reeb vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepGroup {
    pub level: Level,
    pub steps: Vec<Event>,
    /// Attaching-data annotations naming the connected summands this group
    /// is responsible for.
    pub hints: Vec<Summand>,
}

impl StepGroup {
    pub fn new(level: Level, steps: Vec<Event>) -> Self {
        StepGroup { level, steps, hints: Vec::new() }
    }

    pub fn with_hints(mut self, hints: impl IntoIterator<Item = Summand>) -> Self {
        self.hints.extend(hints);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgerySequence {
    pub mode: Mode,
    pub groups: Vec<StepGroup>,
}

impl SurgerySequence {
    pub fn new(mode: Mode, groups: Vec<StepGroup>) -> Self {
        SurgerySequence { mode, groups }
    }

    /// One step per group at levels `1, 2, 3, ...`.
    pub fn simple(mode: Mode, steps: impl IntoIterator<Item = Event>) -> Self {
        let groups = steps
            .into_iter()
            .enumerate()
            .map(|(i, e)| StepGroup::new(Level::from_integer(i as i64 + 1), vec![e]))
            .collect();
        SurgerySequence { mode, groups }
    }

    pub fn steps(&self) -> impl Iterator<Item = &Event> {
        self.groups.iter().flat_map(|g| &g.steps)
    }

    pub fn step_count(&self) -> usize {
        self.groups.iter().map(|g| g.steps.len()).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.groups.iter().all(|g| g.steps.len() == 1) && self.groups.windows(2).all(|w| w[0].level < w[1].level)
    }

    /// Number of steps of each Morse index `0..=m`.
    pub fn index_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; usize::from(self.mode.dimension()) + 1];
        for e in self.steps() {
            counts[usize::from(e.index(self.mode))] += 1;
        }
        counts
    }

    /// `Σ (-1)^j · #(index j)`: the Euler characteristic of the manifold.
    pub fn alternating_index_sum(&self) -> i64 {
        self.index_counts().iter().enumerate().map(|(j, &n)| if j % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    pub fn hints(&self) -> impl Iterator<Item = &Summand> {
        self.groups.iter().flat_map(|g| &g.hints)
    }
}

/// Shorthand constructors used throughout the tests.
pub mod ev {
    use super::{CompId, Event, Fiber};
    use crate::surface::Framing;

    pub fn birth(c: u32) -> Event {
        Event::Birth { output: CompId(c) }
    }
    pub fn death(c: u32) -> Event {
        Event::Death { input: CompId(c) }
    }
    pub fn merge(a: u32, b: u32, out: u32) -> Event {
        Event::Merge { inputs: [CompId(a), CompId(b)], output: CompId(out) }
    }
    pub fn tube(c: u32, out: u32, framing: Framing) -> Event {
        Event::SelfTube { input: CompId(c), output: CompId(out), framing }
    }
    pub fn split(c: u32, a: (u32, Fiber), b: (u32, Fiber)) -> Event {
        Event::Split { input: CompId(c), outputs: [(CompId(a.0), a.1), (CompId(b.0), b.1)] }
    }
    pub fn detube(c: u32, out: u32, outcome: Fiber) -> Event {
        Event::Detube { input: CompId(c), output: CompId(out), outcome }
    }
}
