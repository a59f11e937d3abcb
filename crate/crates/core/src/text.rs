//! The `.imp` text format and the plain set-list format.
//!
//! ```text
//! # comment
//! ground: 1 2 3 4
//! 1 2 -> 3
//! 2 3 -> 4
//! ```
//!
//! Serialization is canonical: the ground directive first, then the
//! normalized implications sorted by premise and conclusion.

use std::sync::Arc;

use crate::base::{Implication, ImplicationBase};
use crate::error::{Error, Result};
use crate::set::{ElementSet, SetFamily, Universe};

struct RawLine {
    premise: Vec<String>,
    conclusion: Vec<String>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

fn tokens(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

pub fn parse_base(text: &str) -> Result<ImplicationBase> {
    let mut declared: Vec<String> = Vec::new();
    let mut raw: Vec<RawLine> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("ground:") {
            declared.extend(tokens(rest));
            continue;
        }
        let mut sides = body.split("->");
        let (Some(lhs), Some(rhs), None) = (sides.next(), sides.next(), sides.next()) else {
            return Err(Error::Syntax {
                line: line_no,
                message: "expected exactly one `->`".into(),
            });
        };
        let premise = tokens(lhs);
        let conclusion = tokens(rhs);
        if premise.is_empty() {
            return Err(Error::EmptyPremise { line: line_no });
        }
        if conclusion.is_empty() {
            return Err(Error::Syntax {
                line: line_no,
                message: "empty conclusion".into(),
            });
        }
        raw.push(RawLine {
            premise,
            conclusion,
        });
    }

    let universe = Universe::new(
        declared
            .iter()
            .cloned()
            .chain(raw.iter().flat_map(|r| r.premise.iter().chain(r.conclusion.iter()).cloned())),
    );
    let lookup = |t: &String| universe.element(t).expect("interned above");
    let implications = raw
        .iter()
        .map(|r| Implication::new(r.premise.iter().map(lookup), r.conclusion.iter().map(lookup)))
        .collect();
    let ground = universe.full_set();
    ImplicationBase::new(Arc::clone(&universe), ground, implications)
}

/// Canonical text of the normalized base.
pub fn serialize_base(base: &ImplicationBase) -> String {
    let universe = base.universe();
    let mut out = String::from("ground:");
    for name in base.ground_names() {
        out.push(' ');
        out.push_str(&name);
    }
    out.push('\n');
    for imp in base.normalize().implications() {
        out.push_str(&imp.display(universe).to_string());
        out.push('\n');
    }
    out
}

/// Parses one set per non-empty line against `universe`; `{}` is the empty set.
pub fn parse_set_list(universe: &Universe, text: &str) -> Result<SetFamily> {
    let mut family = SetFamily::new();
    for (i, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.is_empty() {
            continue;
        }
        let mut s = universe.empty_set();
        for tok in body.split_whitespace().filter(|t| *t != "{}") {
            let e = universe.element(tok).ok_or_else(|| Error::Syntax {
                line: i + 1,
                message: format!("unknown element `{tok}`"),
            })?;
            s.insert(e);
        }
        family.push(s);
    }
    Ok(family)
}

/// A hypergraph file: one edge per line, whitespace-separated tokens.
/// Vertices are the tokens that occur.
pub fn parse_hypergraph(text: &str) -> Result<(Arc<Universe>, Vec<ElementSet>)> {
    let lines: Vec<Vec<String>> = text
        .lines()
        .map(strip_comment)
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().filter(|t| *t != "{}").map(str::to_string).collect())
        .collect();
    let universe = Universe::new(lines.iter().flatten().cloned());
    let edges = lines
        .iter()
        .map(|toks| {
            ElementSet::from_elements(
                universe.len(),
                toks.iter().map(|t| universe.element(t).expect("interned above")),
            )
        })
        .collect();
    Ok((universe, edges))
}

pub fn format_set_list(universe: &Universe, family: &SetFamily) -> String {
    let mut out = String::new();
    for line in family.format(universe) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}
