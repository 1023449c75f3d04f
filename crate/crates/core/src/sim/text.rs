//! The `surgery v1` text format.
//!
//! ```text
//! # surgery v1
//! mode 3
//! group g1 level 1
//! step g1 birth c1
//! group g2 level 2
//! step g2 selftube c1 -> c2 preserve
//! hint g2 Lens(a)
//! group g3 level 3
//! step g3 detube c2 -> c3 S2
//! group g4 level 4
//! step g4 death c3
//! ```
//!
//! Groups are ordered by level, ties broken by the order of their `group`
//! lines; steps keep their file order within a group. Component tokens are
//! `c<n>`.

use std::collections::HashMap;
use std::fmt::Write;

use super::{CompId, Event, Fiber, StepGroup, SurgerySequence};
use crate::classify::Summand;
use crate::digraph::Mode;
use crate::parse::{expect_arity, parse_level, tokenized_lines, ParseError};
use crate::surface::Framing;

fn comp(line: usize, tok: &str) -> Result<CompId, ParseError> {
    tok.strip_prefix('c')
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|d| d.parse().ok())
        .map(CompId)
        .ok_or_else(|| ParseError::at(line, format!("invalid component `{tok}` (expected c<n>)")))
}

fn fiber(line: usize, tok: &str) -> Result<Fiber, ParseError> {
    tok.parse().map_err(|e| ParseError::at(line, format!("{e}")))
}

fn arrow(line: usize, tok: &str) -> Result<(), ParseError> {
    if tok == "->" {
        Ok(())
    } else {
        Err(ParseError::at(line, format!("expected `->`, found `{tok}`")))
    }
}

fn typed_comp(line: usize, tok: &str) -> Result<(CompId, Fiber), ParseError> {
    let (c, t) = tok.split_once(':').ok_or_else(|| ParseError::at(line, format!("expected <c>:<type>, found `{tok}`")))?;
    Ok((comp(line, c)?, fiber(line, t)?))
}

fn parse_event(line: usize, t: &[&str]) -> Result<Event, ParseError> {
    let usage = |u: &str| expect_arity(line, t, u.split(' ').count(), &format!("step <gid> {u}"));
    Ok(match t[0] {
        "birth" => {
            usage("birth <c>")?;
            Event::Birth { output: comp(line, t[1])? }
        }
        "death" => {
            usage("death <c>")?;
            Event::Death { input: comp(line, t[1])? }
        }
        "merge" => {
            usage("merge <c1> <c2> -> <c3>")?;
            arrow(line, t[3])?;
            Event::Merge { inputs: [comp(line, t[1])?, comp(line, t[2])?], output: comp(line, t[4])? }
        }
        "selftube" => {
            usage("selftube <c> -> <c'> <preserve|reverse>")?;
            arrow(line, t[2])?;
            let framing = t[4].parse::<Framing>().map_err(|e| ParseError::at(line, format!("{e}")))?;
            Event::SelfTube { input: comp(line, t[1])?, output: comp(line, t[3])?, framing }
        }
        "split" => {
            usage("split <c> -> <c1>:<type> <c2>:<type>")?;
            arrow(line, t[2])?;
            Event::Split { input: comp(line, t[1])?, outputs: [typed_comp(line, t[3])?, typed_comp(line, t[4])?] }
        }
        "detube" => {
            usage("detube <c> -> <c'> <type>")?;
            arrow(line, t[2])?;
            Event::Detube { input: comp(line, t[1])?, output: comp(line, t[3])?, outcome: fiber(line, t[4])? }
        }
        other => return Err(ParseError::at(line, format!("unknown step kind `{other}`"))),
    })
}

pub fn parse_surgery(text: &str) -> Result<SurgerySequence, ParseError> {
    let mut mode = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<StepGroup> = Vec::new();
    let mut pending: Vec<(usize, &str, Vec<&str>, bool)> = Vec::new();
    for (line, tokens) in tokenized_lines(text) {
        match tokens[0] {
            "mode" => {
                expect_arity(line, &tokens, 2, "mode <2|3>")?;
                if mode.is_some() {
                    return Err(ParseError::at(line, "duplicate `mode` line"));
                }
                let m = tokens[1].parse::<u8>().ok().and_then(Mode::from_dimension);
                mode = Some(m.ok_or_else(|| ParseError::at(line, format!("invalid mode `{}`", tokens[1])))?);
            }
            "group" => {
                expect_arity(line, &tokens, 4, "group <gid> level <p/q>")?;
                if tokens[2] != "level" {
                    return Err(ParseError::at(line, "expected `group <gid> level <p/q>`"));
                }
                if index.insert(tokens[1].to_string(), groups.len()).is_some() {
                    return Err(ParseError::at(line, format!("duplicate group `{}`", tokens[1])));
                }
                groups.push(StepGroup::new(parse_level(line, tokens[3])?, Vec::new()));
            }
            "step" | "hint" => {
                if tokens.len() < 3 {
                    return Err(ParseError::at(line, format!("expected `{} <gid> ...`", tokens[0])));
                }
                pending.push((line, tokens[1], tokens[2..].to_vec(), tokens[0] == "hint"));
            }
            other => return Err(ParseError::at(line, format!("unknown directive `{other}`"))),
        }
    }
    for (line, gid, rest, is_hint) in pending {
        let &g = index.get(gid).ok_or_else(|| ParseError::at(line, format!("unknown group `{gid}`")))?;
        if is_hint {
            expect_arity(line, &rest, 1, "hint <gid> <summand>")?;
            let s: Summand = match crate::classify::parse_description(rest[0]) {
                Ok(tokens) => match tokens.as_slice() {
                    [crate::classify::PrimeToken::Known(s)] => s.clone(),
                    _ => return Err(ParseError::at(line, format!("invalid summand hint `{}`", rest[0]))),
                },
                Err(e) => return Err(ParseError::at(line, e.to_string())),
            };
            groups[g].hints.push(s);
        } else {
            groups[g].steps.push(parse_event(line, &rest)?);
        }
    }
    let mode = mode.ok_or(ParseError::MissingMode)?;
    // stable: equal levels keep declaration order
    groups.sort_by(|a, b| a.level.cmp(&b.level));
    Ok(SurgerySequence::new(mode, groups))
}

fn write_event(out: &mut String, e: &Event) {
    match e {
        Event::Birth { output } => write!(out, "birth {output}"),
        Event::Death { input } => write!(out, "death {input}"),
        Event::Merge { inputs: [a, b], output } => write!(out, "merge {a} {b} -> {output}"),
        Event::SelfTube { input, output, framing } => write!(out, "selftube {input} -> {output} {}", framing.token()),
        Event::Split { input, outputs: [(a, ta), (b, tb)] } => write!(out, "split {input} -> {a}:{ta} {b}:{tb}"),
        Event::Detube { input, output, outcome } => write!(out, "detube {input} -> {output} {outcome}"),
    }
    .unwrap();
}

/// Writes `seq` with groups named `g1, g2, ...` in sequence order.
pub fn write_surgery(seq: &SurgerySequence) -> String {
    let mut out = String::from("# surgery v1\n");
    writeln!(out, "mode {}", seq.mode).unwrap();
    for (i, g) in seq.groups.iter().enumerate() {
        let gid = format!("g{}", i + 1);
        writeln!(out, "group {gid} level {}", g.level).unwrap();
        for e in &g.steps {
            write!(out, "step {gid} ").unwrap();
            write_event(&mut out, e);
            out.push('\n');
        }
        for h in &g.hints {
            writeln!(out, "hint {gid} {h}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Level;
    use crate::sim::ev::*;
    use crate::surface::Framing::*;

    fn lens_block() -> SurgerySequence {
        let mut s = SurgerySequence::simple(Mode::Three, [birth(1), tube(1, 2, Preserve), detube(2, 3, Fiber::S2), death(3)]);
        s.groups[1].hints.push(Summand::Lens("a".into()));
        s
    }

    #[test]
    fn round_trip() {
        let s = lens_block();
        let text = write_surgery(&s);
        assert!(text.contains("step g2 selftube c1 -> c2 preserve\nhint g2 Lens(a)\n"));
        assert_eq!(parse_surgery(&text).unwrap(), s);

        let grouped = SurgerySequence::new(
            Mode::Three,
            vec![
                StepGroup::new(Level::from_integer(0), vec![birth(0)]),
                StepGroup::new(Level::new(1, 2), vec![split(0, (1, Fiber::S2), (2, Fiber::S2)), merge(1, 2, 3)])
                    .with_hints([Summand::S1xS2]),
                StepGroup::new(Level::from_integer(1), vec![death(3)]),
            ],
        );
        assert_eq!(parse_surgery(&write_surgery(&grouped)).unwrap(), grouped);
    }

    #[test]
    fn order_insensitive_groups() {
        let text = "step b death c1\nmode 2\ngroup b level 2\ngroup a level 1\nstep a birth c1\n";
        let s = parse_surgery(text).unwrap();
        assert_eq!(s, SurgerySequence::simple(Mode::Two, [birth(1), death(1)]));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "mode 3\ngroup g1 level 1\nstep g1 birth x1\n";
        assert!(matches!(parse_surgery(bad), Err(ParseError::Syntax { line: 3, .. })));
        let bad = "mode 3\ngroup g1 level 1\nstep g1 merge c1 c2 c3\n";
        assert!(matches!(parse_surgery(bad), Err(ParseError::Syntax { line: 3, .. })));
        let bad = "mode 3\nstep g9 birth c1\n";
        assert!(matches!(parse_surgery(bad), Err(ParseError::Syntax { line: 2, .. })));
        let bad = "mode 3\ngroup g1 level 1\nhint g1 RP2xS1\n";
        assert!(matches!(parse_surgery(bad), Err(ParseError::Syntax { line: 3, .. })));
        assert_eq!(parse_surgery("group g1 level 1\n"), Err(ParseError::MissingMode));
    }
}
