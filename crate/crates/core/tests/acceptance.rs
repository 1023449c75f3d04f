//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use reebkit::classify::{condition_a, condition_b, realizable_family, ConditionBVariant, ConditionSet, RealizableFamily};
use reebkit::digraph::{enumerate_digraphs, invariants, validate_pre_m, FiberLabel, LabeledDigraph, Mode};
use reebkit::realize::{compose_connected_sum, compose_digraphs, expand_deg2_vertex, realize, RealizationParams};
use reebkit::sim::{for_each_sequence, simulate, EnumerationSpec, Shard};
use reebkit::surface::SurfaceType;
use reebkit::verify::{verify, Suite};

use FiberLabel::{K2, S2, T2};

const ONE_SECOND: Duration = Duration::from_secs(1);
const FIVE_MINUTES: Duration = Duration::from_secs(5 * 60);
const TEN_MINUTES: Duration = Duration::from_secs(10 * 60);

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shards() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn family(min_sphere_bundles: usize, max_lens: usize, exact_non_or_deg1: usize) -> RealizableFamily {
    RealizableFamily { min_sphere_bundles, max_lens, exact_non_or_deg1, s3_only: false }
}

fn fundamental_blocks() -> Check {
    let cases = [
        (vec![S2], RealizableFamily::s3_only()),
        (vec![S2, T2, S2], family(0, 1, 0)),
        (vec![S2, K2, S2], family(0, 0, 1)),
    ];
    for (labels, want) in cases {
        let g = LabeledDigraph::path(Mode::Three, &labels).unwrap();
        ensure(validate_pre_m(&g).is_pre_m(), || format!("{labels:?} is not pre-M"))?;
        ensure(condition_a(&g) == Ok(true), || format!("{labels:?} fails condition (a)"))?;
        ensure(condition_b(&g, ConditionBVariant::default()) == Ok(true), || format!("{labels:?} fails condition (b)"))?;
        let got = realizable_family(&g, ConditionSet::default()).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{labels:?}: family {got}, expected {want}"))?;
        let fields = (got.min_sphere_bundles, got.max_lens, got.exact_non_or_deg1);
        let expected = (want.min_sphere_bundles, want.max_lens, want.exact_non_or_deg1);
        ensure(fields == expected, || format!("{labels:?}: {fields:?}"))?;
    }
    Ok("3 blocks".into())
}

fn condition_b_discriminator() -> Check {
    let g = LabeledDigraph::path(Mode::Three, &[S2, K2, K2, S2]).unwrap();
    ensure(condition_a(&g) == Ok(true), || "condition (a) fails".into())?;
    ensure(condition_b(&g, ConditionBVariant::default()) == Ok(false), || "condition (b) passes".into())?;
    ensure(realizable_family(&g, ConditionSet::default()).is_err(), || "family computed despite condition (b)".into())?;
    let fam = realizable_family(&g, ConditionSet::VanishingW2).map_err(|e| e.to_string())?;
    Ok(format!("(b) rejects, (a)-only accepts with {fam}"))
}

fn suite(s: Suite, bound: usize, min_universe: usize) -> Check {
    let report = verify(s, Some(bound), shards()).map_err(|e| e.to_string())?;
    let universe = report.counts.first().map_or(0, |c| c.1);
    ensure(universe >= min_universe, || format!("universe has only {universe} items"))?;
    let summary = report.counts.iter().map(|(n, c)| format!("{n} {c}")).collect::<Vec<_>>().join(", ");
    ensure(report.is_success(), || format!("{} discrepancies ({summary}); first: {:?}", report.discrepancies.len(), report.discrepancies[0]))?;
    Ok(summary)
}

fn surface_algebra() -> Check {
    let summary = suite(Suite::Algebra, 8, 10)?;
    let split: Vec<String> = SurfaceType::KLEIN.split_outcomes().into_iter().map(|(a, b)| format!("({a},{b})")).collect();
    ensure(split == ["(S2,K2)", "(RP2,RP2)"], || format!("K2 splits into {split:?}"))?;
    Ok(summary)
}

fn alternating_sums() -> Check {
    let mut seen = 0;
    let mut bad = Vec::new();
    for spec in [EnumerationSpec::new(Mode::Three, 8).simple_only(true), EnumerationSpec::new(Mode::Three, 7)] {
        for_each_sequence(&spec, Shard::ALL, |s| {
            seen += 1;
            if s.alternating_index_sum() != 0 && bad.len() < 3 {
                bad.push(format!("{:?}", s.index_counts()));
            }
        })
        .map_err(|e| e.to_string())?;
    }
    ensure(bad.is_empty(), || format!("non-zero sums with index counts {bad:?}"))?;
    ensure(seen > 1000, || format!("only {seen} sequences"))?;
    Ok(format!("{seen} sequences"))
}

fn composition_and_expansion() -> Check {
    let universe: Vec<LabeledDigraph> = enumerate_digraphs(Mode::Three, 3, &[S2, T2, K2])
        .into_iter()
        .filter(|g| g.edges().len() > 1 && realizable_family(g, ConditionSet::default()).is_ok())
        .collect();
    let params = RealizationParams::default();
    let realized: Vec<_> = universe.iter().map(|g| (g.clone(), realize(g, &params, ConditionSet::default()).unwrap())).collect();
    let mut pairs = 0;
    for a in &realized {
        for b in &realized {
            let (fa, fb) = (realizable_family(&a.0, ConditionSet::default()).unwrap(), realizable_family(&b.0, ConditionSet::default()).unwrap());
            let g = compose_digraphs(&a.0, &b.0).map_err(|e| e.to_string())?;
            let fc = realizable_family(&g, ConditionSet::default()).map_err(|e| e.to_string())?;
            let sum = family(fa.min_sphere_bundles + fb.min_sphere_bundles, fa.max_lens + fb.max_lens, fa.exact_non_or_deg1 + fb.exact_non_or_deg1);
            ensure(fc == sum, || format!("composite family {fc}, expected {sum}"))?;
            let (cg, cs) = compose_connected_sum(a, b).map_err(|e| e.to_string())?;
            let sim = simulate(&cs).map_err(|e| e.to_string())?;
            ensure(reebkit::digraph::is_isomorphic(&sim.reeb, &cg, false).is_some(), || "composite sequence misses composite digraph".into())?;
            pairs += 1;
        }
    }
    let mut expansions = 0;
    for g in enumerate_digraphs(Mode::Three, 5, &[S2, T2, K2]).iter().chain(&enumerate_digraphs(Mode::Two, 5, &[FiberLabel::S1])) {
        let before = invariants(g).unwrap().beta1;
        for v in g.vertices() {
            for l in 1..=3 {
                if let Ok(h) = expand_deg2_vertex(g, &v.id, l) {
                    let after = invariants(&h).map_err(|r| r.to_string())?.beta1;
                    ensure(after == before + l, || format!("expanding {} by {l}: beta1 {before} -> {after}", v.id))?;
                    expansions += 1;
                }
            }
        }
    }
    ensure(pairs > 0 && expansions > 0, || "empty universe".into())?;
    Ok(format!("{pairs} composed pairs, {expansions} expansions"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<Duration>, fn() -> Check); 8] = [
        ("fundamental blocks classify exactly", Some(ONE_SECOND), fundamental_blocks),
        ("condition (b) discriminator", Some(ONE_SECOND), condition_b_discriminator),
        ("realize/simulate round trip, <= 5 edges", Some(FIVE_MINUTES), || suite(Suite::Roundtrip, 5, 100)),
        ("surface genus formula, <= 4 edges", Some(TEN_MINUTES), || suite(Suite::Thm5, 4, 5)),
        ("family membership of sequence classes, <= 8 steps", Some(TEN_MINUTES), || suite(Suite::Thm6, 8, 1000)),
        ("surface algebra against (orientability, chi)", Some(ONE_SECOND), surface_algebra),
        ("alternating index sums vanish", None, alternating_sums),
        ("composition adds families, expansion adds cycles", None, composition_and_expansion),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let verdict = match (&result, limit) {
            (Err(e), _) => Err(e.clone()),
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (Ok(detail), _) => Ok(detail.clone()),
        };
        let limit = limit.map_or(String::new(), |l| format!(", limit {l:?}"));
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail} ({elapsed:.2?}{limit})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({elapsed:.2?}{limit})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
