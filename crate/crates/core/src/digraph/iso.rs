//! Labeled digraph isomorphism by backtracking.
//!
//! Vertices of the first graph are matched in canonical id order against
//! candidates of the second graph in canonical id order, so the first
//! complete assignment found is the lexicographically least witness.

use std::collections::HashMap;

use super::{FiberLabel, LabeledDigraph};

/// Per-vertex invariant used to prune candidates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Signature {
    level_rank: Option<usize>,
    incoming: Vec<FiberLabel>,
    outgoing: Vec<FiberLabel>,
}

struct Prepared {
    signatures: Vec<Signature>,
    /// `between[a][b]` = sorted labels of edges `a -> b`.
    between: Vec<Vec<Vec<FiberLabel>>>,
}

fn dense_level_ranks(g: &LabeledDigraph) -> Vec<usize> {
    let mut levels: Vec<_> = g.vertices().iter().map(|v| v.level).collect();
    levels.sort();
    levels.dedup();
    g.vertices().iter().map(|v| levels.binary_search(&v.level).expect("present")).collect()
}

fn prepare(g: &LabeledDigraph, strict: bool) -> Prepared {
    let n = g.vertices().len();
    let ranks = strict.then(|| dense_level_ranks(g));
    let labels = |es: &[usize]| {
        let mut ls: Vec<FiberLabel> = es.iter().map(|&e| g.edges()[e].label).collect();
        ls.sort();
        ls
    };
    let signatures = (0..n)
        .map(|v| Signature {
            level_rank: ranks.as_ref().map(|r| r[v]),
            incoming: labels(g.in_edges(v)),
            outgoing: labels(g.out_edges(v)),
        })
        .collect();
    let mut between = vec![vec![Vec::new(); n]; n];
    for e in g.edges() {
        between[e.tail][e.head].push(e.label);
    }
    for row in &mut between {
        for cell in row {
            cell.sort();
        }
    }
    Prepared { signatures, between }
}

/// Returns the lexicographically least vertex bijection (as
/// `(id in g1, id in g2)` pairs in g1's canonical order) preserving edge
/// incidence, direction and labels, or `None` if the digraphs are not
/// isomorphic. With `strict_levels` the bijection must also preserve the
/// total preorder of vertex levels.
pub fn is_isomorphic(g1: &LabeledDigraph, g2: &LabeledDigraph, strict_levels: bool) -> Option<Vec<(String, String)>> {
    let map = find_bijection(g1, g2, strict_levels)?;
    Some(
        map.iter()
            .enumerate()
            .map(|(a, &b)| (g1.vertices()[a].id.clone(), g2.vertices()[b].id.clone()))
            .collect(),
    )
}

pub(crate) fn find_bijection(g1: &LabeledDigraph, g2: &LabeledDigraph, strict: bool) -> Option<Vec<usize>> {
    let n = g1.vertices().len();
    if g1.mode() != g2.mode() || n != g2.vertices().len() || g1.edges().len() != g2.edges().len() {
        return None;
    }
    let p1 = prepare(g1, strict);
    let p2 = prepare(g2, strict);
    let mut s1 = p1.signatures.clone();
    let mut s2 = p2.signatures.clone();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return None;
    }

    let candidates: Vec<Vec<usize>> =
        (0..n).map(|a| (0..n).filter(|&b| p1.signatures[a] == p2.signatures[b]).collect()).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(0, &p1, &p2, &candidates, &mut map, &mut used).then_some(map)
}

fn search(
    a: usize,
    p1: &Prepared,
    p2: &Prepared,
    candidates: &[Vec<usize>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if a == map.len() {
        return true;
    }
    for &b in &candidates[a] {
        if used[b] {
            continue;
        }
        let consistent = (0..a).all(|x| {
            let y = map[x];
            p1.between[a][x] == p2.between[b][y] && p1.between[x][a] == p2.between[y][b]
        });
        if !consistent {
            continue;
        }
        map[a] = b;
        used[b] = true;
        if search(a + 1, p1, p2, candidates, map, used) {
            return true;
        }
        used[b] = false;
    }
    map[a] = usize::MAX;
    false
}

/// Buckets digraphs into isomorphism classes.
#[derive(Debug, Default)]
pub struct IsoClasses {
    strict: bool,
    buckets: HashMap<Vec<Signature>, Vec<usize>>,
    representatives: Vec<LabeledDigraph>,
}

impl IsoClasses {
    pub fn new(strict_levels: bool) -> Self {
        IsoClasses { strict: strict_levels, ..Default::default() }
    }

    fn key(&self, g: &LabeledDigraph) -> Vec<Signature> {
        let mut sig = prepare(g, self.strict).signatures;
        sig.sort();
        sig
    }

    /// Returns the class index of `g` without inserting it.
    pub fn find(&self, g: &LabeledDigraph) -> Option<usize> {
        let bucket = self.buckets.get(&self.key(g))?;
        bucket.iter().copied().find(|&i| find_bijection(&self.representatives[i], g, self.strict).is_some())
    }

    /// Inserts `g`; returns its class index and whether the class is new.
    pub fn insert(&mut self, g: LabeledDigraph) -> (usize, bool) {
        let key = self.key(&g);
        if let Some(bucket) = self.buckets.get(&key) {
            if let Some(i) = bucket.iter().copied().find(|&i| find_bijection(&self.representatives[i], &g, self.strict).is_some()) {
                return (i, false);
            }
        }
        let i = self.representatives.len();
        self.representatives.push(g);
        self.buckets.entry(key).or_default().push(i);
        (i, true)
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[LabeledDigraph] {
        &self.representatives
    }

    pub fn into_representatives(self) -> Vec<LabeledDigraph> {
        self.representatives
    }
}
