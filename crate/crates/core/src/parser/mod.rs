//! Parsers for the templated problem statements and for plans embedded in
//! free-form model output.
//!
//! Problem text is split into sentences and each sentence is matched against
//! a fixed set of anchored patterns. A sentence that matches nothing is
//! either boilerplate (logged as a warning) or, if it mentions a number, a
//! weekday or a known name, an unconsumed constraint, which fails the parse.

mod calendar;
mod extract;
mod meeting;
mod trip;

use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Problem, Task, ValidationError, Weekday};
use crate::time::TimeError;

pub use crate::time::parse_time;
pub use calendar::parse_calendar;
pub use extract::{extract_plan, ExtractError};
pub use meeting::parse_meeting;
pub use trip::parse_trip;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    UnrecognizedTimeFormat(#[from] TimeError),
    #[error("unconsumed constraint sentence at bytes {}..{}: {sentence:?}", span.0, span.1)]
    UnconsumedConstraintSentence { sentence: String, span: (usize, usize) },
    #[error("meeting duration is missing or unreadable")]
    MissingDuration,
    #[error("missing {0}")]
    MissingStatement(&'static str),
    #[error("no minimum meeting duration given for {0:?}")]
    MissingMinimumDuration(String),
    #[error("no travel time from {from:?} to {to:?}")]
    MissingTravelEntry { from: String, to: String },
    #[error("inconsistent statement: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Invalid(ValidationError),
}

impl From<ValidationError> for ParseError {
    fn from(e: ValidationError) -> Self {
        match e {
            ValidationError::MissingTravelEntry { from, to } => {
                ParseError::MissingTravelEntry { from, to }
            }
            other => ParseError::Invalid(other),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostics {
    /// Byte span in the input and a message.
    pub warnings: Vec<((usize, usize), String)>,
    /// Sentences that matched no pattern and carried no constraint.
    pub unrecognized_sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub problem: T,
    pub diagnostics: ParseDiagnostics,
}

/// Parses problem text for a given task.
pub fn parse_problem(task: Task, text: &str) -> Result<Parsed<Problem>, ParseError> {
    Ok(match task {
        Task::Calendar => {
            let p = parse_calendar(text)?;
            Parsed { problem: p.problem.into(), diagnostics: p.diagnostics }
        }
        Task::Trip => {
            let p = parse_trip(text)?;
            Parsed { problem: p.problem.into(), diagnostics: p.diagnostics }
        }
        Task::Meeting => {
            let p = parse_meeting(text)?;
            Parsed { problem: p.problem.into(), diagnostics: p.diagnostics }
        }
    })
}

/// Guesses the task family from characteristic template phrases.
pub fn detect_task(text: &str) -> Option<Task> {
    let lower = text.to_ascii_lowercase();
    if lower.contains("schedule a meeting for") {
        Some(Task::Calendar)
    } else if lower.contains("direct flights") || lower.contains("days in total") {
        Some(Task::Trip)
    } else if lower.contains("meet as many friends") || lower.contains("you arrive at") {
        Some(Task::Meeting)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Sentence {
    /// Whitespace-normalized text with header prefixes removed.
    pub text: String,
    pub span: (usize, usize),
}

/// Time token accepted inside sentence patterns.
pub(crate) const TIME: &str = r"\d{1,2}(?::\d{2})?\s?(?:[AaPp]\.?[Mm]\.?)?";
/// Capitalized, possibly multi-word proper name.
pub(crate) const NAME: &str = r"[A-Z][\w'.\-]*(?:[ \-][A-Z][\w'.\-]*)*";

static HEADER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?:TASK:|CONSTRAINTS:|SOLUTION:|Here are the existing schedules for everyone during the (?:day|days|week):|Travel distances \(in minutes\):)\s*",
    )
    .unwrap()
});

static BOILERPLATE: LazyLock<Vec<Regex>> = LazyLock::new(|| {
    [
        r"^You are an expert at",
        r"^You are given a few constraints",
        r"^Note there exists a solution",
        r"^Here are a few example tasks",
        r"^Find a time that works",
        r"^Please provide your solution",
        r"^Find a trip plan",
        r"^You only take direct flights",
        r"^You are visiting .+ for the day",
        r"^Solve the problem by considering",
        r"earliest availability$",
    ]
    .iter()
    .map(|p| Regex::new(p).unwrap())
    .collect()
});

static WEEKDAY_WORD: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\b(?:Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday)\b").unwrap()
});

/// Narrows few-shot prompts to the final task and splits it into sentences.
pub(crate) fn sentences(text: &str) -> Vec<Sentence> {
    let (base, body) = match text.rfind("TASK:") {
        Some(i) => {
            let rest = &text[i..];
            let end = rest.find("SOLUTION:").unwrap_or(rest.len());
            (i, &rest[..end])
        }
        None => (0, text),
    };
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = body.as_bytes();
    for (i, ch) in body.char_indices() {
        match ch {
            '{' | '[' => depth += 1,
            '}' | ']' => depth -= 1,
            '.' | ';' if depth <= 0 => {
                let next = bytes.get(i + 1).copied();
                if next.is_none_or(|b| b.is_ascii_whitespace()) {
                    push_sentence(&mut out, body, base, start, i);
                    start = i + 1;
                }
            }
            _ => {}
        }
    }
    push_sentence(&mut out, body, base, start, body.len());
    out
}

fn push_sentence(out: &mut Vec<Sentence>, body: &str, base: usize, start: usize, end: usize) {
    let raw = &body[start..end];
    let mut text = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    loop {
        let stripped = HEADER.replace(&text, "").into_owned();
        if stripped == text {
            break;
        }
        text = stripped;
    }
    if text.is_empty() {
        return;
    }
    let lead = raw.len() - raw.trim_start().len();
    let trail = raw.len() - raw.trim_end().len();
    out.push(Sentence { text, span: (base + start + lead, base + end - trail) });
}

pub(crate) fn is_boilerplate(s: &str) -> bool {
    BOILERPLATE.iter().any(|re| re.is_match(s))
}

/// Sorts leftover sentences into hard errors and warnings.
pub(crate) fn settle_leftovers(
    leftovers: Vec<Sentence>,
    known_names: &[&str],
    diagnostics: &mut ParseDiagnostics,
) -> Result<(), ParseError> {
    for s in leftovers {
        if is_boilerplate(&s.text) {
            continue;
        }
        let carries_constraint = s.text.chars().any(|c| c.is_ascii_digit())
            || WEEKDAY_WORD.is_match(&s.text)
            || known_names.iter().any(|n| mentions(&s.text, n));
        if carries_constraint {
            return Err(ParseError::UnconsumedConstraintSentence { sentence: s.text, span: s.span });
        }
        diagnostics.warnings.push((s.span, format!("ignored sentence: {}", s.text)));
        diagnostics.unrecognized_sentences.push(s.text);
    }
    Ok(())
}

/// Whole-word mention of a name.
pub(crate) fn mentions(text: &str, name: &str) -> bool {
    text.match_indices(name).any(|(i, _)| {
        let before = text[..i].chars().next_back();
        let after = text[i + name.len()..].chars().next();
        !before.is_some_and(|c| c.is_alphanumeric()) && !after.is_some_and(|c| c.is_alphanumeric())
    })
}

/// Splits "A, B and C" / "A, B, and C" / "either A or B" lists.
pub(crate) fn split_list(text: &str) -> Vec<String> {
    let t = text.trim();
    let t = t.strip_prefix("either ").unwrap_or(t);
    let t = t.replace(", and ", ", ").replace(", or ", ", ");
    let mut items = Vec::new();
    for part in t.split(", ") {
        let part = part.trim();
        let pieces: Vec<&str> = part.split(" and ").flat_map(|p| p.split(" or ")).collect();
        items.extend(pieces.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()));
    }
    items
}

pub(crate) fn parse_weekday(text: &str) -> Result<Weekday, ParseError> {
    text.parse::<Weekday>()
        .map_err(|e| ParseError::Inconsistent(e.to_string()))
}

pub(crate) fn number_word(text: &str) -> Option<u32> {
    let t = text.trim().to_ascii_lowercase();
    if let Ok(n) = t.parse() {
        return Some(n);
    }
    let words = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
        "eleven", "twelve",
    ];
    match t.as_str() {
        "a" | "an" => Some(1),
        w => words.iter().position(|x| *x == w).map(|i| i as u32),
    }
}
