use std::sync::LazyLock;

use indexmap::IndexMap;
use regex::Regex;

use super::{sentences, settle_leftovers, ParseDiagnostics, ParseError, Parsed, NAME, TIME};
use crate::domain::{Friend, MeetingProblem};
use crate::time::{parse_time, Interval};

static TRAVEL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?P<a>[A-Z][^:]*?) to (?P<b>[A-Z][^:]*?): (?P<m>\d+)$").unwrap()
});

static ARRIVE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(r"^You arrive at (?P<loc>.+?) at (?P<t>{TIME})$")).unwrap()
});

static PRESENCE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^(?P<who>{NAME}) will be at (?P<loc>.+?) from (?P<a>{TIME}) to (?P<b>{TIME})$"
    ))
    .unwrap()
});

static MINIMUM: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^You(?:'d| would) like to meet (?P<who>{NAME}) for (?:a minimum of |at least )?(?P<m>\d+) minutes$"
    ))
    .unwrap()
});

pub fn parse_meeting(text: &str) -> Result<Parsed<MeetingProblem>, ParseError> {
    let mut diagnostics = ParseDiagnostics::default();
    let mut travel: IndexMap<(String, String), u32> = IndexMap::new();
    let mut start = None;
    let mut presences: Vec<(String, String, Interval)> = Vec::new();
    let mut minimums: IndexMap<String, u32> = IndexMap::new();
    let mut leftovers = Vec::new();

    for s in sentences(text) {
        if let Some(c) = PRESENCE.captures(&s.text) {
            let window = Interval::new(parse_time(&c["a"])?, parse_time(&c["b"])?)
                .map_err(|e| ParseError::Inconsistent(e.to_string()))?;
            presences.push((c["who"].to_string(), c["loc"].to_string(), window));
        } else if let Some(c) = MINIMUM.captures(&s.text) {
            let m = c["m"].parse().map_err(|_| ParseError::Inconsistent(s.text.clone()))?;
            if minimums.insert(c["who"].to_string(), m).is_some() {
                return Err(ParseError::Inconsistent(format!("minimum for {} stated twice", &c["who"])));
            }
        } else if let Some(c) = ARRIVE.captures(&s.text) {
            if start.is_some() {
                return Err(ParseError::Inconsistent("more than one arrival statement".into()));
            }
            start = Some((c["loc"].to_string(), parse_time(&c["t"])?));
        } else if let Some(c) = TRAVEL.captures(&s.text) {
            let m = c["m"].parse().map_err(|_| ParseError::Inconsistent(s.text.clone()))?;
            travel.insert((c["a"].to_string(), c["b"].to_string()), m);
        } else {
            leftovers.push(s);
        }
    }

    let (start_location, start_time) = start.ok_or(ParseError::MissingStatement("arrival sentence"))?;
    let mut friends = Vec::with_capacity(presences.len());
    for (name, location, window) in presences {
        let min = minimums
            .shift_remove(&name)
            .ok_or_else(|| ParseError::MissingMinimumDuration(name.clone()))?;
        friends.push(Friend { name, location, window, min_duration_minutes: min });
    }
    if let Some(stray) = minimums.keys().next() {
        return Err(ParseError::Inconsistent(format!("minimum given for {stray}, who is never located")));
    }

    let mut names: Vec<&str> = friends.iter().map(|f| f.name.as_str()).collect();
    names.extend(travel.keys().flat_map(|(a, b)| [a.as_str(), b.as_str()]));
    names.push(&start_location);
    settle_leftovers(leftovers, &names, &mut diagnostics)?;

    let problem = MeetingProblem::new(start_location, start_time, travel, friends)?;
    Ok(Parsed { problem, diagnostics })
}
