use std::sync::LazyLock;

use indexmap::IndexMap;
use regex::Regex;

use super::{
    number_word, parse_weekday, sentences, settle_leftovers, split_list, ParseDiagnostics,
    ParseError, Parsed, NAME, TIME,
};
use crate::domain::{CalendarProblem, DayInterval, Preference, Weekday};
use crate::time::{parse_time, Interval, TimeOfDay};

const WEEKDAY: &str = r"(?:Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday)";

static SCHEDULE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^You need to schedule a meeting for (?P<who>.+?) for (?P<dur>.+?) between the work hours of (?P<ws>{TIME}) to (?P<we>{TIME}) on (?P<days>.+)$"
    ))
    .unwrap()
});

static BUSY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^(?P<who>{NAME}) (?:has blocked (?:their|his|her) calendar|is busy|has meetings|has a meeting) on (?P<rest>{WEEKDAY}.*)$"
    ))
    .unwrap()
});

static BUSY_ITEM: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^(?:(?P<day>{WEEKDAY})(?: during)? )?(?P<a>{TIME}) to (?P<b>{TIME})$"
    ))
    .unwrap()
});

static FREE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^(?P<who>{NAME})(?:'s calendar is (?:wide open|completely free)(?: the entire (?:day|week))?| is free the entire (?:day|week)| is free all (?:day|week)| has no meetings(?: the whole (?:day|week))?| is available the entire (?:day|week))$"
    ))
    .unwrap()
});

static PREFERENCE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^(?:(?P<who>{NAME}) )??(?:would like to avoid more meetings|would rather not meet|would prefer not to meet|prefers not to meet|[Pp]refer not to meet|do not want to meet|does not want to meet|can not meet|cannot meet|can't meet)(?: on (?P<day>{WEEKDAY}))?(?: (?:(?P<dir>before|after) (?P<t>{TIME})|between (?P<a>{TIME}) and (?P<b>{TIME})))?$"
    ))
    .unwrap()
});

static DURATION_HOURS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?P<n>\w+)(?P<half> and a half)? hours?$").unwrap());
static DURATION_MINUTES: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?P<n>\w+) minutes?$").unwrap());
static DURATION_MIXED: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?P<h>\w+) hours? and (?P<m>\w+) minutes?$").unwrap());

/// Reads phrases like "half an hour", "one hour", "two and a half hours",
/// "45 minutes" and "1 hour and 30 minutes".
fn parse_duration_phrase(text: &str) -> Option<u32> {
    let t = text.trim().to_ascii_lowercase();
    if t == "half an hour" || t == "a half hour" {
        return Some(30);
    }
    if let Some(c) = DURATION_MIXED.captures(&t) {
        return Some(number_word(&c["h"])? * 60 + number_word(&c["m"])?);
    }
    if let Some(c) = DURATION_HOURS.captures(&t) {
        let half = if c.name("half").is_some() { 30 } else { 0 };
        return Some(number_word(&c["n"])? * 60 + half);
    }
    if let Some(c) = DURATION_MINUTES.captures(&t) {
        return number_word(&c["n"]);
    }
    None
}

/// Who, day, range and source span of a preference sentence.
type RawPreference = (Option<String>, Option<Weekday>, PrefRange, (usize, usize));

pub fn parse_calendar(text: &str) -> Result<Parsed<CalendarProblem>, ParseError> {
    let mut diagnostics = ParseDiagnostics::default();
    let mut schedule: Option<(Vec<String>, u32, Interval, Vec<Weekday>)> = None;
    let mut busy: IndexMap<String, Vec<DayInterval>> = IndexMap::new();
    // Preferences keep their day optional until the allowed days are known.
    let mut raw_prefs: Vec<RawPreference> = Vec::new();
    let mut leftovers = Vec::new();

    for s in sentences(text) {
        if let Some(c) = SCHEDULE.captures(&s.text) {
            if schedule.is_some() {
                return Err(ParseError::Inconsistent("more than one scheduling request".into()));
            }
            let who = split_list(&c["who"]);
            let duration = parse_duration_phrase(&c["dur"]).ok_or(ParseError::MissingDuration)?;
            let window = Interval::new(parse_time(&c["ws"])?, parse_time(&c["we"])?)
                .map_err(|e| ParseError::Inconsistent(e.to_string()))?;
            let days = split_list(&c["days"])
                .iter()
                .map(|d| parse_weekday(d))
                .collect::<Result<Vec<_>, _>>()?;
            schedule = Some((who, duration, window, days));
        } else if let Some(c) = BUSY.captures(&s.text) {
            let blocks = parse_busy_list(&c["rest"])?;
            busy.entry(c["who"].to_string()).or_default().extend(blocks);
        } else if let Some(c) = FREE.captures(&s.text) {
            busy.entry(c["who"].to_string()).or_default();
        } else if let Some(c) = PREFERENCE.captures(&s.text) {
            let range = if let Some(dir) = c.name("dir") {
                let t = parse_time(&c["t"])?;
                if dir.as_str() == "before" {
                    PrefRange::Before(t)
                } else {
                    PrefRange::After(t)
                }
            } else if c.name("a").is_some() {
                PrefRange::Between(parse_time(&c["a"])?, parse_time(&c["b"])?)
            } else if c.name("day").is_some() {
                PrefRange::WholeDay
            } else {
                leftovers.push(s);
                continue;
            };
            let day = c.name("day").map(|d| parse_weekday(d.as_str())).transpose()?;
            // "You would like..." states the requester's own preference.
            let who = c.name("who").map(|w| w.as_str()).filter(|w| !matches!(*w, "You" | "I" | "We"));
            raw_prefs.push((who.map(str::to_string), day, range, s.span));
        } else {
            leftovers.push(s);
        }
    }

    let (participants, duration, window, days) =
        schedule.ok_or(ParseError::MissingStatement("scheduling request sentence"))?;

    let mut preferences = Vec::new();
    for (who, day, range, span) in raw_prefs {
        let Some(interval) = range.resolve(window) else {
            diagnostics.warnings.push((span, "preference lies outside work hours; dropped".into()));
            continue;
        };
        let applies_to: Vec<Weekday> = match day {
            Some(d) => vec![d],
            None => days.clone(),
        };
        for d in applies_to {
            preferences.push(Preference { participant: who.clone(), day: d, interval });
        }
    }

    let names: Vec<&str> = participants.iter().map(String::as_str).collect();
    settle_leftovers(leftovers, &names, &mut diagnostics)?;

    let problem = CalendarProblem::new(participants, days, window, duration, busy, preferences)?;
    Ok(Parsed { problem, diagnostics })
}

fn parse_busy_list(rest: &str) -> Result<Vec<DayInterval>, ParseError> {
    let mut day: Option<Weekday> = None;
    let mut out = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let c = BUSY_ITEM
            .captures(item)
            .ok_or_else(|| ParseError::Inconsistent(format!("unreadable busy block {item:?}")))?;
        if let Some(d) = c.name("day") {
            day = Some(parse_weekday(d.as_str())?);
        }
        let day = day.ok_or_else(|| ParseError::Inconsistent(format!("busy block {item:?} has no day")))?;
        let interval = Interval::new(parse_time(&c["a"])?, parse_time(&c["b"])?)
            .map_err(|e| ParseError::Inconsistent(e.to_string()))?;
        out.push(DayInterval::new(day, interval));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum PrefRange {
    Before(TimeOfDay),
    After(TimeOfDay),
    Between(TimeOfDay, TimeOfDay),
    WholeDay,
}

impl PrefRange {
    /// Clips the range to the work window; `None` when nothing is left.
    fn resolve(self, window: Interval) -> Option<Interval> {
        let (a, b) = match self {
            PrefRange::Before(t) => (window.start(), t.min(window.end())),
            PrefRange::After(t) => (t.max(window.start()), window.end()),
            PrefRange::Between(a, b) => (a.max(window.start()), b.min(window.end())),
            PrefRange::WholeDay => (window.start(), window.end()),
        };
        Interval::new(a, b).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duration_phrases() {
        assert_eq!(parse_duration_phrase("half an hour"), Some(30));
        assert_eq!(parse_duration_phrase("one hour"), Some(60));
        assert_eq!(parse_duration_phrase("an hour"), Some(60));
        assert_eq!(parse_duration_phrase("two hours"), Some(120));
        assert_eq!(parse_duration_phrase("one and a half hours"), Some(90));
        assert_eq!(parse_duration_phrase("45 minutes"), Some(45));
        assert_eq!(parse_duration_phrase("1 hour and 15 minutes"), Some(75));
        assert_eq!(parse_duration_phrase("a while"), None);
    }

    #[test]
    fn multi_day_busy_list() {
        let blocks = parse_busy_list("Monday during 9:00 to 9:30, 10:00 to 11:00, Tuesday during 13:00 to 14:00").unwrap();
        assert_eq!(blocks.len(), 3);
        assert_eq!(blocks[1].day, Weekday::Monday);
        assert_eq!(blocks[2].day, Weekday::Tuesday);
    }
}
