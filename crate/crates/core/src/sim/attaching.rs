//! Which connected sums a handle sequence can describe.
//!
//! Levels ignore attaching maps, so a sequence pins its manifold down only
//! to a finite set of connected sums. Each independent cycle of handles
//! closes up as a sphere bundle over the circle (trivial or twisted). Each
//! torus piece (a maximal run of torus components linked by steps that keep
//! them tori) is filled in by a Heegaard splitting of genus one, giving S3,
//! S1xS2 or a lens space. Each Klein-bottle piece gives a non-orientable
//! degree-1 summand.

use std::collections::{BTreeSet, HashMap};

use super::{replay, CompId, Fiber, SimError, SurgerySequence};
use crate::classify::{ManifoldClass, Summand};

/// Counts read off the handle structure of a sequence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct HandleProfile {
    /// First Betti number of the graph whose vertices are steps and whose
    /// edges are components.
    pub cycles: usize,
    pub torus_pieces: usize,
    pub klein_pieces: usize,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Computes the profile of a valid mode-3 sequence whose level components
/// are all spheres, tori or Klein bottles.
pub fn handle_profile(seq: &SurgerySequence) -> Result<HandleProfile, SimError> {
    let r = replay(seq)?;
    if let Some(c) = r.components.iter().find(|c| !Fiber::sphere_torus_klein().contains(&c.fiber)) {
        return Err(SimError::Unlabelable { id: c.id, fiber: c.fiber });
    }
    let steps: Vec<_> = seq.steps().collect();
    let fiber: HashMap<CompId, Fiber> = r.components.iter().map(|c| (c.id, c.fiber)).collect();
    let cycles = r.components.len() + 1 - steps.len();

    let mut profile = HandleProfile { cycles, ..Default::default() };
    for (kind, slot) in [(Fiber::T2, &mut profile.torus_pieces), (Fiber::K2, &mut profile.klein_pieces)] {
        let ids: Vec<CompId> = r.components.iter().filter(|c| c.fiber == kind).map(|c| c.id).collect();
        let pos: HashMap<CompId, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        for e in &steps {
            let ins: Vec<usize> = e.inputs().iter().filter(|c| fiber[c] == kind).map(|c| pos[c]).collect();
            let outs: Vec<usize> = e.outputs().iter().filter(|c| fiber[c] == kind).map(|c| pos[c]).collect();
            for &a in &ins {
                for &b in &outs {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        *slot = (0..ids.len()).filter(|&i| find(&mut parent, i) == i).count();
    }
    Ok(profile)
}

/// Every connected sum consistent with the handle structure of `seq`.
/// Lens and non-orientable tags are numbered per piece.
pub fn candidate_classes(seq: &SurgerySequence) -> Result<BTreeSet<ManifoldClass>, SimError> {
    let p = handle_profile(seq)?;
    let mut classes: BTreeSet<Vec<Summand>> = [Vec::new()].into();
    let mut extend = |choices: &dyn Fn(usize) -> Vec<Option<Summand>>, n: usize| {
        for i in 0..n {
            classes = classes
                .iter()
                .flat_map(|base| {
                    choices(i).into_iter().map(move |c| {
                        let mut next = base.clone();
                        next.extend(c);
                        next.sort();
                        next
                    })
                })
                .collect();
        }
    };
    extend(&|_| vec![Some(Summand::S1xS2), Some(Summand::TwistedS1xS2)], p.cycles);
    extend(&|i| vec![None, Some(Summand::S1xS2), Some(Summand::Lens(format!("t{}", i + 1)))], p.torus_pieces);
    extend(&|i| vec![Some(Summand::TwistedS1xS2), Some(Summand::NonOrientableDeg1(format!("k{}", i + 1)))], p.klein_pieces);
    Ok(classes.into_iter().map(ManifoldClass::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Mode;
    use crate::sim::ev::*;
    use crate::surface::Framing::*;

    #[test]
    fn blocks_have_expected_profiles() {
        let lens = SurgerySequence::simple(Mode::Three, [birth(0), tube(0, 1, Preserve), detube(1, 2, Fiber::S2), death(2)]);
        assert_eq!(handle_profile(&lens).unwrap(), HandleProfile { cycles: 0, torus_pieces: 1, klein_pieces: 0 });
        let names: Vec<String> = candidate_classes(&lens).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(names, vec!["", "S1xS2", "Lens(t1)"]);

        let theta = SurgerySequence::simple(
            Mode::Three,
            [birth(0), split(0, (1, Fiber::S2), (2, Fiber::S2)), merge(1, 2, 3), death(3)],
        );
        assert_eq!(handle_profile(&theta).unwrap().cycles, 1);
        assert_eq!(candidate_classes(&theta).unwrap().len(), 2);

        let klein = SurgerySequence::simple(Mode::Three, [birth(0), tube(0, 1, Reverse), detube(1, 2, Fiber::S2), death(2)]);
        assert_eq!(handle_profile(&klein).unwrap().klein_pieces, 1);
        assert!(candidate_classes(&klein).unwrap().iter().all(|m| !m.is_orientable()));
    }

    #[test]
    fn absorbing_a_sphere_keeps_one_torus_piece() {
        let seq = SurgerySequence::simple(
            Mode::Three,
            [birth(0), tube(0, 1, Preserve), birth(2), merge(1, 2, 3), detube(3, 4, Fiber::S2), death(4)],
        );
        assert_eq!(handle_profile(&seq).unwrap(), HandleProfile { cycles: 0, torus_pieces: 1, klein_pieces: 0 });
    }
}
