//! Exhaustive enumeration of small pre-M digraphs, used as a test universe.

use super::{FiberLabel, IsoClasses, LabeledDigraph, Level, Mode};

/// Every pre-M digraph with between 1 and `max_edges` edges whose labels
/// come from `labels`, one representative per isomorphism class (ignoring
/// levels). Representatives have vertices `v1..vn` at levels `0..n-1`.
///
/// Every class is hit because a strictly-leveled digraph is acyclic and so
/// admits a topological numbering.
pub fn enumerate_digraphs(mode: Mode, max_edges: usize, labels: &[FiberLabel]) -> Vec<LabeledDigraph> {
    let mut classes = IsoClasses::new(false);
    let sphere = mode.sphere_label();
    for n in 2..=max_edges + 1 {
        let kinds: Vec<(usize, usize, FiberLabel)> = (0..n)
            .flat_map(|i| (i + 1..n).flat_map(move |j| labels.iter().map(move |&l| (i, j, l))))
            .collect();
        for m in n - 1..=max_edges {
            let mut chosen = Vec::with_capacity(m);
            multisets(&kinds, m, 0, &mut chosen, &mut |edges| {
                if plausible(n, edges, sphere) {
                    let g = build(mode, n, edges);
                    if let Ok(g) = g {
                        classes.insert(g);
                    }
                }
            });
        }
    }
    classes.into_representatives()
}

fn multisets<F: FnMut(&[(usize, usize, FiberLabel)])>(
    kinds: &[(usize, usize, FiberLabel)],
    remaining: usize,
    start: usize,
    chosen: &mut Vec<(usize, usize, FiberLabel)>,
    visit: &mut F,
) {
    if remaining == 0 {
        visit(chosen);
        return;
    }
    for k in start..kinds.len() {
        chosen.push(kinds[k]);
        multisets(kinds, remaining - 1, k, chosen, visit);
        chosen.pop();
    }
}

/// Degree and pendant-label checks on the raw edge list.
fn plausible(n: usize, edges: &[(usize, usize, FiberLabel)], sphere: FiberLabel) -> bool {
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for &(t, h, _) in edges {
        outdeg[t] += 1;
        indeg[h] += 1;
    }
    for v in 0..n {
        let d = indeg[v] + outdeg[v];
        if d == 0 || ((indeg[v] == 0 || outdeg[v] == 0) && d != 1) {
            return false;
        }
    }
    edges.iter().all(|&(t, h, l)| l == sphere || (indeg[t] + outdeg[t] != 1 && indeg[h] + outdeg[h] != 1))
}

fn build(mode: Mode, n: usize, edges: &[(usize, usize, FiberLabel)]) -> Result<LabeledDigraph, super::DigraphError> {
    LabeledDigraph::new(
        mode,
        (0..n).map(|i| (format!("v{}", i + 1), Level::from_integer(i as i64))),
        edges.iter().enumerate().map(|(k, &(t, h, l))| (format!("e{}", k + 1), format!("v{}", t + 1), format!("v{}", h + 1), l)),
    )
}
