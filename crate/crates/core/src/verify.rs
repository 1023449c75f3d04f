//! Brute-force harnesses cross-checking the formulas against exhaustive
//! enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{check_conditions, is_member, min_genus, realizable_family, ConditionSet, ManifoldClass};
use crate::digraph::{enumerate_digraphs, invariants, is_isomorphic, write_reeb, FiberLabel, IsoClasses, LabeledDigraph, Mode};
use crate::realize::{local_moves, normalize_to_simple, realize, RealizationParams};
use crate::sim::{
    candidate_classes, check_level_constraint, for_each_sequence, simulate, write_surgery, EnumerationSpec, Fiber, Shard,
    SurgerySequence,
};
use crate::surface::{Framing, SurfaceType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// Surface genus formula against the minimum over orientable sequences.
    Thm5,
    /// Attaching-data classes of enumerated sequences against the family.
    Thm6,
    /// Realize then simulate on enumerated digraphs.
    Roundtrip,
    /// Surface tables against an (orientability, χ) model.
    Algebra,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Thm5, Suite::Thm6, Suite::Roundtrip, Suite::Algebra];

    pub fn token(self) -> &'static str {
        match self {
            Suite::Thm5 => "thm5",
            Suite::Thm6 => "thm6",
            Suite::Roundtrip => "roundtrip",
            Suite::Algebra => "algebra",
        }
    }

    /// Default bound: edges for `thm5` and `roundtrip`, steps for `thm6`,
    /// `|χ|` for `algebra`.
    pub fn default_bound(self) -> usize {
        match self {
            Suite::Thm5 => 4,
            Suite::Thm6 => 8,
            Suite::Roundtrip => 5,
            Suite::Algebra => 8,
        }
    }

    pub fn max_bound(self) -> usize {
        match self {
            Suite::Thm5 => 5,
            Suite::Thm6 => 10,
            Suite::Roundtrip => 6,
            Suite::Algebra => 64,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.token() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected thm5, thm6, roundtrip or algebra)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("bound {bound} is outside 1..={max} for suite {suite}")]
    BoundOutOfRange { suite: Suite, bound: usize, max: usize },
    #[error("shard count must be positive")]
    NoShards,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Discrepancy {
    pub input: String,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub universe: String,
    /// Named counts of what was examined.
    pub counts: Vec<(String, usize)>,
    /// Sorted.
    pub discrepancies: Vec<Discrepancy>,
}

impl VerifyReport {
    pub fn is_success(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn count(&self, name: &str) -> Option<usize> {
        self.counts.iter().find(|(n, _)| n == name).map(|c| c.1)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, self.universe)?;
        for (name, n) in &self.counts {
            writeln!(f, "{name} {n}")?;
        }
        writeln!(f, "discrepancies {}", self.discrepancies.len())?;
        for d in &self.discrepancies {
            writeln!(f, "- input: {}", d.input.trim_end().replace('\n', " | "))?;
            writeln!(f, "  expected: {}", d.expected)?;
            writeln!(f, "  observed: {}", d.observed)?;
        }
        Ok(())
    }
}

/// Runs `suite` at `bound` (or its default), spreading enumeration over
/// `shards` workers.
pub fn verify(suite: Suite, bound: Option<usize>, shards: usize) -> Result<VerifyReport, VerifyError> {
    let bound = bound.unwrap_or(suite.default_bound());
    if bound == 0 || bound > suite.max_bound() {
        return Err(VerifyError::BoundOutOfRange { suite, bound, max: suite.max_bound() });
    }
    if shards == 0 {
        return Err(VerifyError::NoShards);
    }
    let mut report = match suite {
        Suite::Thm5 => genus_suite(bound, shards),
        Suite::Thm6 => family_suite(bound, shards),
        Suite::Roundtrip => roundtrip_suite(bound),
        Suite::Algebra => algebra_suite(bound),
    };
    report.discrepancies.sort();
    Ok(report)
}

fn sharded<T: Send>(spec: &EnumerationSpec, shards: usize, init: impl Fn() -> T + Sync, step: impl Fn(&mut T, &SurgerySequence) + Sync) -> Vec<(usize, T)> {
    (0..shards)
        .into_par_iter()
        .map(|index| {
            let mut acc = init();
            let n = for_each_sequence(spec, Shard { index, count: shards }, |s| step(&mut acc, s)).expect("bounds checked");
            (n, acc)
        })
        .collect()
}

fn genus_suite(max_edges: usize, shards: usize) -> VerifyReport {
    let max_steps = (2 * max_edges).max(8);
    let universe: Vec<LabeledDigraph> =
        enumerate_digraphs(Mode::Two, max_edges, &[FiberLabel::S1]).into_iter().filter(|g| g.edges().len() >= 2).collect();
    let mut classes = IsoClasses::new(false);
    for g in &universe {
        classes.insert(g.clone());
    }
    let spec = EnumerationSpec::new(Mode::Two, max_steps).orientable_only(true).max_edges(max_edges);
    let parts = sharded(&spec, shards, BTreeMap::<usize, i64>::new, |best, s| {
        let Ok(sim) = simulate(s) else { return };
        if let Some(k) = classes.find(&sim.reeb) {
            let genus = (2 - s.alternating_index_sum()) / 2;
            let e = best.entry(k).or_insert(genus);
            *e = (*e).min(genus);
        }
    });
    let mut best: BTreeMap<usize, i64> = BTreeMap::new();
    let mut sequences = 0;
    for (n, part) in parts {
        sequences += n;
        for (k, g) in part {
            let e = best.entry(k).or_insert(g);
            *e = (*e).min(g);
        }
    }
    let mut discrepancies = Vec::new();
    for (k, g) in universe.iter().enumerate() {
        let formula = min_genus(g).expect("universe is pre-M with two edges") as i64;
        let observed = best.get(&k).map_or("no realizing sequence".to_string(), |b| format!("genus {b}"));
        if best.get(&k) != Some(&formula) {
            discrepancies.push(Discrepancy { input: write_reeb(g), expected: format!("genus {formula}"), observed });
        }
    }
    VerifyReport {
        suite: Suite::Thm5,
        universe: format!("mode-2 digraphs with 2..={max_edges} edges; orientable sequences with <= {max_steps} steps"),
        counts: vec![("digraphs".into(), universe.len()), ("sequences".into(), sequences)],
        discrepancies,
    }
}

fn family_suite(max_steps: usize, shards: usize) -> VerifyReport {
    let spec = EnumerationSpec::new(Mode::Three, max_steps).simple_only(true);
    let conditions = ConditionSet::default();
    let parts = sharded(&spec, shards, || (0usize, Vec::new()), |(checked, bad), s| {
        let Ok(sim) = simulate(s) else { return };
        if check_conditions(&sim.reeb, conditions).is_err() {
            return;
        }
        *checked += 1;
        let fam = realizable_family(&sim.reeb, conditions).expect("conditions hold");
        let members: Vec<ManifoldClass> = if s.hints().next().is_some() {
            vec![s.hints().cloned().collect()]
        } else {
            candidate_classes(s).expect("trace in range").into_iter().collect()
        };
        for m in members.into_iter().filter(|m| !is_member(m, &fam)) {
            bad.push(Discrepancy {
                input: write_surgery(s),
                expected: format!("member of {fam}"),
                observed: if m.is_sphere() { "S3".into() } else { m.to_string() },
            });
        }
    });
    let (mut sequences, mut checked, mut discrepancies) = (0, 0, Vec::new());
    for (n, (c, bad)) in parts {
        sequences += n;
        checked += c;
        discrepancies.extend(bad);
    }
    VerifyReport {
        suite: Suite::Thm6,
        universe: format!("simple mode-3 sequences with <= {max_steps} steps and level sets in S2, T2, K2"),
        counts: vec![("sequences".into(), sequences), ("satisfying-conditions".into(), checked)],
        discrepancies,
    }
}

/// Every choice of 1 or 2 split-merge pairs per degree-2 sphere vertex,
/// with no or all torus edges made lens spaces.
fn parameter_grid(g: &LabeledDigraph) -> Vec<RealizationParams> {
    let sphere_deg2: Vec<String> = (0..g.vertices().len())
        .filter(|&v| {
            g.in_edges(v).len() == 1
                && g.out_edges(v).len() == 1
                && g.in_edges(v).iter().chain(g.out_edges(v)).all(|&e| g.edges()[e].label == FiberLabel::S2)
        })
        .map(|v| g.vertices()[v].id.clone())
        .collect();
    let tori: Vec<String> = g.edges().iter().filter(|e| e.label == FiberLabel::T2).map(|e| e.id.clone()).collect();
    let mut grid = Vec::new();
    for mask in 0..(1usize << sphere_deg2.len()) {
        for lens in [false, true] {
            if lens && tori.is_empty() {
                continue;
            }
            let extra = sphere_deg2.iter().enumerate().map(|(i, v)| (v.clone(), 1 + (mask >> i & 1))).collect();
            let lens_assignment = if lens { tori.iter().map(|e| (e.clone(), format!("L{e}"))).collect() } else { BTreeMap::new() };
            grid.push(RealizationParams { extra_bundle_pairs: extra, lens_assignment, ..Default::default() });
        }
    }
    grid
}

fn roundtrip_suite(max_edges: usize) -> VerifyReport {
    let conditions = ConditionSet::default();
    let universe: Vec<LabeledDigraph> = enumerate_digraphs(Mode::Three, max_edges, &[FiberLabel::S2, FiberLabel::T2, FiberLabel::K2])
        .into_iter()
        .filter(|g| check_conditions(g, conditions).is_ok())
        .collect();
    let results: Vec<(usize, Vec<Discrepancy>)> = universe
        .par_iter()
        .map(|g| {
            let fam = realizable_family(g, conditions).expect("conditions hold");
            let mut bad = Vec::new();
            let grid = parameter_grid(g);
            for p in &grid {
                let mut fail = |expected: &str, observed: String| {
                    bad.push(Discrepancy { input: write_reeb(g), expected: expected.to_string(), observed })
                };
                let s = match realize(g, p, conditions) {
                    Ok(s) => s,
                    Err(e) => {
                        fail("a certificate sequence", e.to_string());
                        continue;
                    }
                };
                let sim = match simulate(&s) {
                    Ok(sim) => sim,
                    Err(e) => {
                        fail("a valid sequence", e.to_string());
                        continue;
                    }
                };
                if is_isomorphic(&sim.reeb, g, false).is_none() {
                    fail("Reeb data isomorphic to the input", write_reeb(&sim.reeb));
                }
                if let Err(v) = check_level_constraint(&sim.trace, &Fiber::sphere_torus_klein()) {
                    fail("level sets in S2, T2, K2", v.to_string());
                }
                let hints: ManifoldClass = s.hints().cloned().collect();
                if !is_member(&hints, &fam) {
                    fail(&format!("hints in {fam}"), hints.to_string());
                }
                match normalize_to_simple(&s) {
                    Ok(n) if n.index_counts() == s.index_counts() => {
                        if let Err(i) = local_moves(&n) {
                            fail("simple form made of catalog moves", format!("step {i} is not a catalog move"));
                        }
                    }
                    Ok(_) => fail("normalization keeps index counts", "counts changed".into()),
                    Err(e) => fail("normalizable sequence", e.to_string()),
                }
            }
            (grid.len(), bad)
        })
        .collect();
    let realizations = results.iter().map(|r| r.0).sum();
    VerifyReport {
        suite: Suite::Roundtrip,
        universe: format!("mode-3 digraphs with <= {max_edges} edges satisfying the default conditions"),
        counts: vec![("digraphs".into(), universe.len()), ("realizations".into(), realizations)],
        discrepancies: results.into_iter().flat_map(|r| r.1).collect(),
    }
}

/// A surface seen only through orientability and Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Model {
    orientable: bool,
    chi: i64,
}

impl Model {
    fn exists(self) -> bool {
        if self.orientable {
            self.chi <= 2 && self.chi % 2 == 0
        } else {
            self.chi <= 1
        }
    }

    fn to_surface(self) -> Option<SurfaceType> {
        if !self.exists() {
            None
        } else if self.orientable {
            Some(SurfaceType::Orientable(((2 - self.chi) / 2) as u32))
        } else {
            SurfaceType::non_orientable((2 - self.chi) as u32)
        }
    }

    fn of(t: SurfaceType) -> Model {
        match t {
            SurfaceType::Orientable(g) => Model { orientable: true, chi: 2 - 2 * g as i64 },
            SurfaceType::NonOrientable(k) => Model { orientable: false, chi: 2 - k as i64 },
        }
    }

    fn sum(self, o: Model) -> Model {
        Model { orientable: self.orientable && o.orientable, chi: self.chi + o.chi - 2 }
    }
}

fn algebra_suite(max_chi: usize) -> VerifyReport {
    let bound = max_chi as i64;
    let models: Vec<Model> = (-bound..=2)
        .flat_map(|chi| [true, false].map(|orientable| Model { orientable, chi }))
        .filter(|m| m.exists())
        .collect();
    let mut bad = Vec::new();
    let mut checks = 0usize;
    let mut check = |what: String, expected: String, observed: String| {
        checks += 1;
        if expected != observed {
            bad.push(Discrepancy { input: what, expected, observed });
        }
    };
    let show = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
    for &m in &models {
        let t = m.to_surface().expect("exists");
        check(format!("model {t}"), format!("{m:?}"), format!("{:?}", Model::of(t)));
        check(format!("euler_char {t}"), m.chi.to_string(), t.euler_char().to_string());
        check(format!("orientability {t}"), m.orientable.to_string(), t.is_orientable().to_string());
        check(format!("parse {t}"), t.to_string(), t.to_string().parse::<SurfaceType>().map(|x| x.to_string()).unwrap_or_default());
        for &n in &models {
            let u = n.to_surface().expect("exists");
            let want = m.sum(n).to_surface().expect("sum exists");
            check(format!("{t} # {u}"), want.to_string(), t.connected_sum(u).to_string());
            check(format!("merge {t} {u}"), want.to_string(), t.merge_components(u).to_string());
        }
        for f in Framing::ALL {
            let want = Model { orientable: m.orientable && f == Framing::Preserve, chi: m.chi - 2 }.to_surface().expect("tube exists");
            check(format!("selftube {t} {}", f.token()), want.to_string(), t.self_tube(f).to_string());
        }
        // a 2-handle along a separating circle: the pieces sum back to t
        let mut split = BTreeSet::new();
        for &a in &models {
            for &b in &models {
                if a <= b && a.chi + b.chi == m.chi + 2 && (a.orientable && b.orientable) == m.orientable {
                    let (x, y) = (a.to_surface().unwrap(), b.to_surface().unwrap());
                    let (x, y) = if x <= y { (x, y) } else { (y, x) };
                    split.insert(format!("({x},{y})"));
                }
            }
        }
        let observed: BTreeSet<String> = t.split_outcomes().into_iter().map(|(x, y)| format!("({x},{y})")).collect();
        check(format!("split {t}"), show(&split), show(&observed));
        // a 2-handle along a non-separating two-sided circle
        let detube: BTreeSet<String> = [true, false]
            .into_iter()
            .map(|orientable| Model { orientable, chi: m.chi + 2 })
            .filter(|d| d.exists() && (d.orientable == m.orientable || !m.orientable))
            .filter_map(|d| d.to_surface())
            .map(|d| d.to_string())
            .collect();
        let observed: BTreeSet<String> = t.detube_outcomes().into_iter().map(|d| d.to_string()).collect();
        check(format!("detube {t}"), show(&detube), show(&observed));
    }
    let klein: Vec<String> = SurfaceType::KLEIN.split_outcomes().into_iter().map(|(a, b)| format!("({a},{b})")).collect();
    check("split K2 contains (RP2,RP2)".into(), "(S2,K2) (RP2,RP2)".into(), klein.join(" "));
    VerifyReport {
        suite: Suite::Algebra,
        universe: format!("closed surfaces with |chi| <= {max_chi}"),
        counts: vec![("surfaces".into(), models.len()), ("checks".into(), checks)],
        discrepancies: bad,
    }
}

/// Invariants of a digraph, for reports.
pub fn describe_digraph(g: &LabeledDigraph) -> String {
    match invariants(g) {
        Ok(i) => format!(
            "beta1 {} / nDeg2SphereSphere {} / nTorusEdges {} / nKleinEdges {}",
            i.beta1, i.n_deg2_sphere_sphere, i.n_torus_edges, i.n_klein_edges
        ),
        Err(r) => r.to_string(),
    }
}
