//! Heuristic check for programs that print a literal answer instead of
//! computing it.
//!
//! The source is lexed into tokens. Runs of literals not interrupted by code
//! (identifiers other than keyword-argument names) form clusters. The plan's
//! distinguishing atoms are matched in order against each cluster, and the
//! best cluster's matched fraction is compared to [`HARDCODE_THRESHOLD`].
//! Any loop keyword, self-recursive function or solver call clears the
//! program regardless of the fraction.

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::domain::Plan;
use crate::time::parse_time;

pub const HARDCODE_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardcodeVerdict {
    pub suspected: bool,
    pub matched_atoms: f64,
    pub search_tokens_found: bool,
}

pub fn detect_hardcoding(source: &str, plan: &Plan) -> HardcodeVerdict {
    let tokens = lex(source);
    let atoms = atoms(plan);
    let matched_atoms = if atoms.is_empty() {
        0.0
    } else {
        let best = clusters(&tokens)
            .iter()
            .map(|text| ordered_matches(&atoms, text))
            .max()
            .unwrap_or(0);
        best as f64 / atoms.len() as f64
    };
    let search_tokens_found = has_search_tokens(&tokens, source);
    HardcodeVerdict {
        suspected: matched_atoms >= HARDCODE_THRESHOLD && !search_tokens_found,
        matched_atoms,
        search_tokens_found,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Atom {
    Text(String),
    Time(u32),
    DayRange(u32, u32),
}

fn atoms(plan: &Plan) -> Vec<Atom> {
    let text = |s: &str| Atom::Text(s.to_lowercase());
    match plan {
        Plan::Calendar(p) => vec![
            text(p.day.name()),
            Atom::Time(p.slot.start().minutes()),
            Atom::Time(p.slot.end().minutes()),
        ],
        Plan::Trip(p) => p
            .segments()
            .iter()
            .flat_map(|s| [Atom::DayRange(s.day_lo, s.day_hi), text(&s.city)])
            .collect(),
        Plan::Meeting(p) => p
            .meetings()
            .iter()
            .flat_map(|m| {
                [
                    text(&m.location),
                    text(&m.person),
                    Atom::Time(m.slot.start().minutes()),
                    Atom::Time(m.slot.end().minutes()),
                ]
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Literal(String),
    Ident(String),
    Punct(char),
}

/// Python-flavoured lexer: string literals (with prefixes and triple
/// quotes), numbers, identifiers and single punctuation characters.
/// Comments are dropped.
fn lex(source: &str) -> Vec<Token> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '"' || c == '\'' {
            let (lit, next) = read_string(&chars, i);
            tokens.push(Token::Literal(lit));
            i = next;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let is_prefix = word.len() <= 2 && word.chars().all(|ch| "rRbBfFuU".contains(ch));
            if is_prefix && i < chars.len() && (chars[i] == '"' || chars[i] == '\'') {
                continue;
            }
            tokens.push(Token::Ident(word));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '.') {
                i += 1;
            }
            tokens.push(Token::Literal(chars[start..i].iter().collect()));
        } else {
            tokens.push(Token::Punct(c));
            i += 1;
        }
    }
    tokens
}

fn read_string(chars: &[char], start: usize) -> (String, usize) {
    let q = chars[start];
    let triple = chars.get(start + 1) == Some(&q) && chars.get(start + 2) == Some(&q);
    let mut i = start + if triple { 3 } else { 1 };
    let mut out = String::new();
    while i < chars.len() {
        let c = chars[i];
        if c == '\\' && i + 1 < chars.len() {
            out.push(chars[i + 1]);
            i += 2;
            continue;
        }
        if c == q {
            if !triple {
                return (out, i + 1);
            }
            if chars.get(i + 1) == Some(&q) && chars.get(i + 2) == Some(&q) {
                return (out, i + 3);
            }
        }
        if c == '\n' && !triple {
            return (out, i);
        }
        out.push(c);
        i += 1;
    }
    (out, i)
}

/// Joined literal text of each maximal run of literals. An identifier ends a
/// run unless it names a keyword argument (`place="Oslo"`) or is a constant.
fn clusters(tokens: &[Token]) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        match tok {
            Token::Literal(s) => current.push(s),
            Token::Punct(_) => {}
            Token::Ident(name) => {
                let kwarg = matches!(tokens.get(i + 1), Some(Token::Punct('=')))
                    && !matches!(tokens.get(i + 2), Some(Token::Punct('=')));
                let constant = matches!(name.as_str(), "None" | "True" | "False" | "null" | "true" | "false");
                if !kwarg && !constant && !current.is_empty() {
                    out.push(current.join(" \u{1f} "));
                    current.clear();
                }
            }
        }
    }
    if !current.is_empty() {
        out.push(current.join(" \u{1f} "));
    }
    out
}

static TIME_IN_TEXT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b\d{1,2}:\d{2}\s?(?:[ap]m)?").unwrap());
static DAY_RANGE_IN_TEXT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bday\s*(\d+)(?:\s*-\s*(\d+))?").unwrap());

/// Byte spans where `atom` occurs in `text`.
fn occurrences(atom: &Atom, text: &str, lower: &str) -> Vec<(usize, usize)> {
    match atom {
        Atom::Text(word) => lower
            .match_indices(word.as_str())
            .filter(|(i, _)| {
                let before = lower[..*i].chars().next_back();
                let after = lower[i + word.len()..].chars().next();
                !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
            })
            .map(|(i, w)| (i, i + w.len()))
            .collect(),
        Atom::Time(minutes) => TIME_IN_TEXT
            .find_iter(text)
            .filter(|m| parse_time(m.as_str()).is_ok_and(|t| t.minutes() == *minutes))
            .map(|m| (m.start(), m.end()))
            .collect(),
        Atom::DayRange(lo, hi) => DAY_RANGE_IN_TEXT
            .captures_iter(text)
            .filter(|c| {
                let a: Option<u32> = c[1].parse().ok();
                let b: Option<u32> = c.get(2).map_or(a, |m| m.as_str().parse().ok());
                a == Some(*lo) && b == Some(*hi)
            })
            .map(|c| {
                let m = c.get(0).expect("whole match");
                (m.start(), m.end())
            })
            .collect(),
    }
}

/// Length of the longest in-order chain of atoms with non-overlapping,
/// increasing occurrences in `text`.
fn ordered_matches(atoms: &[Atom], text: &str) -> usize {
    let lower = text.to_lowercase();
    // best_end[c] is the smallest end offset after matching c atoms.
    let mut best_end: Vec<Option<usize>> = vec![Some(0)];
    for atom in atoms {
        let occ = occurrences(atom, text, &lower);
        if occ.is_empty() {
            continue;
        }
        best_end.push(None);
        for c in (0..best_end.len() - 1).rev() {
            let Some(after) = best_end[c] else { continue };
            if let Some(&(_, end)) = occ.iter().find(|(s, _)| *s >= after) {
                if best_end[c + 1].is_none_or(|cur| end < cur) {
                    best_end[c + 1] = Some(end);
                }
            }
        }
    }
    best_end.iter().rposition(Option::is_some).unwrap_or(0)
}

const LOOP_KEYWORDS: &[&str] = &["for", "while"];
const SOLVER_IDENTS: &[&str] = &[
    "Solver", "Optimize", "SolverFor", "check", "model", "permutations", "combinations", "product",
    "itertools", "z3",
];

fn has_search_tokens(tokens: &[Token], source: &str) -> bool {
    let mut idents = tokens.iter().filter_map(|t| match t {
        Token::Ident(s) => Some(s.as_str()),
        _ => None,
    });
    idents.any(|name| LOOP_KEYWORDS.contains(&name) || SOLVER_IDENTS.contains(&name)) || has_recursion(source)
}

static DEF: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?m)^(?P<indent>[ \t]*)def\s+(?P<name>\w+)\s*\(").unwrap());

/// A function whose body calls itself by name.
fn has_recursion(source: &str) -> bool {
    for c in DEF.captures_iter(source) {
        let indent = c["indent"].len();
        let name = &c["name"];
        let header_end = c.get(0).expect("whole match").end();
        let rest = &source[header_end..];
        let body_end = rest
            .split_inclusive('\n')
            .skip(1)
            .scan(0usize, |offset, line| {
                let start = *offset;
                *offset += line.len();
                Some((start, line))
            })
            .find(|(_, line)| {
                let trimmed = line.trim_start();
                !trimmed.is_empty() && !trimmed.starts_with('#') && line.len() - trimmed.len() <= indent
            })
            .map_or(rest.len(), |(start, _)| start);
        let body = &rest[rest.find('\n').unwrap_or(rest.len()).min(body_end)..body_end];
        let call = Regex::new(&format!(r"\b{}\s*\(", regex::escape(name))).expect("escaped name");
        if call.is_match(body) {
            return true;
        }
    }
    false
}
