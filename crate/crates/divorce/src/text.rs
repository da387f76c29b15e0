//! Line-oriented text formats.
//!
//! ```text
//! # instance
//! side LEFT: u1 u2
//! side RIGHT: w1 w2
//! pref u1: w1 w2 | w3
//!
//! # matching          # certificate       # source graph
//! pair u1 w2          step u2 w2          n 3
//!                                         k 1
//!                                         edge 1 2
//! ```
//!
//! `#` starts a comment. Blank lines are ignored. In a `pref` line, `|`
//! separates strictly ordered tiers and names within a tier are tied.
//! Agents without a `pref` line find nobody acceptable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use divorce_core::reduction::{ReductionError, SourceGraph};
use divorce_core::{AgentId, Instance, Matching, ModelError, Pair, PreferenceList, Side};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    /// The text does not follow the grammar. Line and column are 1-based.
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed text describing an invalid object.
    #[error("{}{error}", Location(*line))]
    Invalid { line: Option<usize>, error: Invalid },
}

impl FormatError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, FormatError::Syntax { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Invalid {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] ReductionError),
    #[error("second preference line for `{0}`")]
    RepeatedPreferences(String),
}

struct Location(Option<usize>);

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(line) => write!(f, "line {line}: "),
            None => Ok(()),
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, column, message: message.into() }
}

fn invalid(line: impl Into<Option<usize>>, error: impl Into<Invalid>) -> FormatError {
    FormatError::Invalid { line: line.into(), error: error.into() }
}

pub fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '{' | '}'))
}

/// One non-blank line with comments removed.
struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn column(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    /// Whitespace-separated words of `self.text[from..to]` with their byte
    /// offsets.
    fn words(&self, from: usize, to: usize) -> Words<'a> {
        let slice = &self.text[from..to];
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in slice.char_indices() {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    out.push((from + s, &slice[s..i]));
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((from + s, &slice[s..]));
        }
        out
    }

    fn name(&self, (at, word): (usize, &'a str)) -> Result<&'a str, FormatError> {
        if is_valid_name(word) {
            Ok(word)
        } else {
            Err(syntax(self.number, self.column(at), format!("invalid agent name `{word}`")))
        }
    }

    fn integer(&self, (at, word): (usize, &str)) -> Result<usize, FormatError> {
        word.parse().map_err(|_| {
            syntax(self.number, self.column(at), format!("expected a non-negative integer, found `{word}`"))
        })
    }

    fn end(&self) -> usize {
        self.column(self.text.len())
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.find('#').map_or(raw, |c| &raw[..c]).trim_end();
        (!text.trim().is_empty()).then_some(Line { number: i + 1, text })
    })
}

/// Words with their byte offsets.
type Words<'a> = Vec<(usize, &'a str)>;

/// Splits `keyword head: body` at the first colon.
fn split_colon<'a>(line: &Line<'a>, keyword: (usize, &str)) -> Result<(Words<'a>, usize), FormatError> {
    let after = keyword.0 + keyword.1.len();
    let Some(colon) = line.text[after..].find(':').map(|c| c + after) else {
        return Err(syntax(line.number, line.end(), format!("expected `:` after `{}`", keyword.1)));
    };
    let head = line.words(after, colon);
    match head.len() {
        1 => Ok((head, colon + 1)),
        0 => Err(syntax(line.number, line.column(colon), "missing name before `:`")),
        _ => Err(syntax(line.number, line.column(head[1].0), "expected `:`")),
    }
}

type Tiers<'a> = Vec<Words<'a>>;

struct PrefLine<'a> {
    line: usize,
    tiers: Tiers<'a>,
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut sides: [Option<Vec<&str>>; 2] = [None, None];
    let mut prefs: BTreeMap<&str, PrefLine<'_>> = BTreeMap::new();
    let mut declared: BTreeMap<&str, AgentId> = BTreeMap::new();

    for line in lines(text) {
        let words = line.words(0, line.text.len());
        let keyword = words[0];
        match keyword.1 {
            "side" => {
                let (head, body) = split_colon(&line, keyword)?;
                let side = match head[0].1 {
                    "LEFT" => Side::Left,
                    "RIGHT" => Side::Right,
                    other => {
                        return Err(syntax(
                            line.number,
                            line.column(head[0].0),
                            format!("expected LEFT or RIGHT, found `{other}`"),
                        ))
                    }
                };
                let slot = &mut sides[side as usize];
                if slot.is_some() {
                    return Err(syntax(line.number, line.column(head[0].0), format!("side {side} declared twice")));
                }
                let mut names = Vec::new();
                for w in line.words(body, line.text.len()) {
                    let name = line.name(w)?;
                    let id = AgentId { side, index: names.len() };
                    if declared.insert(name, id).is_some() {
                        return Err(invalid(line.number, ModelError::DuplicateName(name.to_owned())));
                    }
                    names.push(name);
                }
                *slot = Some(names);
            }
            "pref" => {
                let (head, body) = split_colon(&line, keyword)?;
                let who = line.name(head[0])?;
                let tiers = parse_tiers(&line, body)?;
                if prefs.insert(who, PrefLine { line: line.number, tiers }).is_some() {
                    return Err(invalid(line.number, Invalid::RepeatedPreferences(who.to_owned())));
                }
            }
            other => {
                return Err(syntax(
                    line.number,
                    line.column(keyword.0),
                    format!("expected `side` or `pref`, found `{other}`"),
                ))
            }
        }
    }

    let [left, right] = sides.map(Option::unwrap_or_default);
    let mut lists = [vec![PreferenceList::default(); left.len()], vec![PreferenceList::default(); right.len()]];
    for (who, pl) in &prefs {
        let Some(&id) = declared.get(who) else {
            return Err(invalid(pl.line, ModelError::UnknownName((*who).to_owned())));
        };
        let mut seen = BTreeSet::new();
        let mut tiers = Vec::with_capacity(pl.tiers.len());
        for tier in &pl.tiers {
            let mut indices = Vec::with_capacity(tier.len());
            for &(_, name) in tier {
                let other =
                    *declared.get(name).ok_or_else(|| invalid(pl.line, ModelError::UnknownName(name.to_owned())))?;
                if other.side == id.side {
                    return Err(invalid(pl.line, ModelError::SameSide { a: id, b: other }));
                }
                if !seen.insert(other.index) {
                    let error = ModelError::DuplicateTierMembership { who: (*who).to_owned(), listed: name.to_owned() };
                    return Err(invalid(pl.line, error));
                }
                indices.push(other.index);
            }
            tiers.push(indices);
        }
        lists[id.side as usize][id.index] = PreferenceList::new(tiers);
    }

    let [left_prefs, right_prefs] = lists;
    let owned = |names: Vec<&str>| names.into_iter().map(str::to_owned).collect();
    Instance::new(owned(left), owned(right), left_prefs, right_prefs).map_err(|e| {
        let line = match &e {
            ModelError::NotMutual { lister, .. } => prefs.get(lister.as_str()).map(|p| p.line),
            _ => None,
        };
        invalid(line, e)
    })
}

fn parse_tiers<'a>(line: &Line<'a>, body: usize) -> Result<Tiers<'a>, FormatError> {
    let rest = &line.text[body..];
    if rest.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut tiers = Vec::new();
    let mut start = body;
    for piece in rest.split('|') {
        let end = start + piece.len();
        let words = line.words(start, end);
        if words.is_empty() {
            return Err(syntax(line.number, line.column(start), "empty tier"));
        }
        let mut tier = Vec::with_capacity(words.len());
        for w in words {
            tier.push((w.0, line.name(w)?));
        }
        tiers.push(tier);
        start = end + 1;
    }
    Ok(tiers)
}

/// The canonical text of an instance: both `side` lines, then one `pref`
/// line per agent, left side first.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    for (side, names) in [(Side::Left, inst.left_names()), (Side::Right, inst.right_names())] {
        let _ = write!(out, "side {side}:");
        for n in names {
            let _ = write!(out, " {n}");
        }
        out.push('\n');
    }
    for side in [Side::Left, Side::Right] {
        for a in inst.agents(side) {
            let _ = write!(out, "pref {}:", inst.name(a));
            for (i, tier) in inst.prefs(a).tiers().iter().enumerate() {
                out.push_str(if i == 0 { " " } else { " | " });
                let names: Vec<&str> =
                    tier.iter().map(|&j| inst.name(AgentId { side: side.opposite(), index: j })).collect();
                out.push_str(&names.join(" "));
            }
            out.push('\n');
        }
    }
    out
}

/// Resolves two names to a left/right pair, in either order.
fn resolve_pair(inst: &Instance, line: &Line<'_>, a: (usize, &str), b: (usize, &str)) -> Result<Pair, FormatError> {
    let mut ids = [AgentId::left(0); 2];
    for (slot, w) in ids.iter_mut().zip([a, b]) {
        let name = line.name(w)?;
        *slot = inst.lookup(name).ok_or_else(|| invalid(line.number, ModelError::UnknownName(name.to_owned())))?;
    }
    Pair::from_agents(ids[0], ids[1]).map_err(|e| invalid(line.number, e))
}

/// Lines of the form `<keyword> <name> <name>`.
fn pair_lines(inst: &Instance, text: &str, keyword: &str) -> Result<Vec<(usize, Pair)>, FormatError> {
    let mut out = Vec::new();
    for line in lines(text) {
        let words = line.words(0, line.text.len());
        if words[0].1 != keyword {
            return Err(syntax(
                line.number,
                line.column(words[0].0),
                format!("expected `{keyword}`, found `{}`", words[0].1),
            ));
        }
        match words.len() {
            3 => out.push((line.number, resolve_pair(inst, &line, words[1], words[2])?)),
            n if n < 3 => return Err(syntax(line.number, line.end(), "expected two agent names")),
            _ => return Err(syntax(line.number, line.column(words[3].0), "unexpected text after the pair")),
        }
    }
    Ok(out)
}

pub fn parse_matching(inst: &Instance, text: &str) -> Result<Matching, FormatError> {
    let pairs = pair_lines(inst, text, "pair")?;
    let mut left_seen = BTreeSet::new();
    let mut right_seen = BTreeSet::new();
    for &(line, p) in &pairs {
        if !left_seen.insert(p.left) {
            return Err(invalid(line, ModelError::AgentMatchedTwice(inst.name(p.left_agent()).to_owned())));
        }
        if !right_seen.insert(p.right) {
            return Err(invalid(line, ModelError::AgentMatchedTwice(inst.name(p.right_agent()).to_owned())));
        }
        if !inst.is_acceptable(p) {
            let error = ModelError::UnacceptablePair {
                left: inst.name(p.left_agent()).to_owned(),
                right: inst.name(p.right_agent()).to_owned(),
            };
            return Err(invalid(line, error));
        }
    }
    Matching::from_pairs(inst, pairs.into_iter().map(|(_, p)| p)).map_err(|e| invalid(None, e))
}

pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    pair_text(inst, "pair", m.pairs())
}

/// A b-interchange sequence. Pairs are only resolved against the instance;
/// whether they block is for the verifier to decide.
pub fn parse_certificate(inst: &Instance, text: &str) -> Result<Vec<Pair>, FormatError> {
    Ok(pair_lines(inst, text, "step")?.into_iter().map(|(_, p)| p).collect())
}

pub fn serialize_certificate(inst: &Instance, steps: &[Pair]) -> String {
    pair_text(inst, "step", steps.iter().copied())
}

fn pair_text(inst: &Instance, keyword: &str, pairs: impl Iterator<Item = Pair>) -> String {
    let mut out = String::new();
    for p in pairs {
        let _ = writeln!(out, "{keyword} {} {}", inst.name(p.left_agent()), inst.name(p.right_agent()));
    }
    out
}

/// `n`, `k` and 1-based `edge` lines. `n` and `k` are required.
pub fn parse_graph(text: &str) -> Result<SourceGraph, FormatError> {
    let mut n: Option<(usize, usize)> = None;
    let mut k: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for line in lines(text) {
        last_line = line.number;
        let words = line.words(0, line.text.len());
        let expect = match words[0].1 {
            "n" | "k" => 2,
            "edge" => 3,
            other => {
                return Err(syntax(
                    line.number,
                    line.column(words[0].0),
                    format!("expected `n`, `k` or `edge`, found `{other}`"),
                ))
            }
        };
        if words.len() < expect {
            return Err(syntax(line.number, line.end(), "missing value"));
        }
        if words.len() > expect {
            return Err(syntax(line.number, line.column(words[expect].0), "unexpected text"));
        }
        match words[0].1 {
            "edge" => {
                let a = line.integer(words[1])?;
                let b = line.integer(words[2])?;
                for (v, w) in [(a, words[1]), (b, words[2])] {
                    if v == 0 {
                        return Err(syntax(line.number, line.column(w.0), "vertices are numbered from 1"));
                    }
                }
                edges.push((line.number, a - 1, b - 1));
            }
            key => {
                let slot = if key == "n" { &mut n } else { &mut k };
                if slot.is_some() {
                    return Err(syntax(line.number, line.column(words[0].0), format!("`{key}` given twice")));
                }
                *slot = Some((line.number, line.integer(words[1])?));
            }
        }
    }
    let Some((_, n)) = n else {
        return Err(syntax(last_line + 1, 1, "missing `n` line"));
    };
    let Some((k_line, k)) = k else {
        return Err(syntax(last_line + 1, 1, "missing `k` line"));
    };

    // Validate edge by edge so errors point at a line.
    let mut seen = Vec::new();
    for &(line, a, b) in &edges {
        seen.push((a, b));
        SourceGraph::new(n, &seen, 0).map_err(|e| invalid(line, e))?;
    }
    SourceGraph::new(n, &seen, k).map_err(|e| invalid(k_line, e))
}

pub fn serialize_graph(g: &SourceGraph) -> String {
    let mut out = format!("n {}\nk {}\n", g.n(), g.k());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "edge {} {}", a + 1, b + 1);
    }
    out
}
