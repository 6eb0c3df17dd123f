//! Pulls a plan out of free-form model output.
//!
//! The answer is the last balanced JSON object whose top-level keys match the
//! task's answer schema. Earlier objects are usually drafts.

use std::sync::LazyLock;

use regex::Regex;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::domain::{
    CalendarPlan, Meeting, MeetingPlan, Plan, Segment, Task, TripPlan, Weekday,
};
use crate::time::{parse_time, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    /// No JSON object with the task's answer keys. `truncated` is set when
    /// the text ends inside an unclosed object.
    #[error("no plan found{}", if *truncated { " (output ends inside unclosed JSON)" } else { "" })]
    NoPlanFound { truncated: bool },
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
}

static MISSING_COLON_TIME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#""([A-Za-z_]+)"(\d{1,2}:\d{2}(?:\s?[AaPp][Mm])?)""#).unwrap()
});
static MISSING_COLON: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#""([A-Za-z_]+)"\s*""#).unwrap());
static DAY_RANGE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^\s*(?:days?\s*)?(\d+)\s*(?:(?:-|–|to)\s*(?:day\s*)?(\d+))?\s*$").unwrap()
});

pub fn extract_plan(text: &str, task: Task) -> Result<Plan, ExtractError> {
    let (mut candidates, truncated) = balanced_objects(text);
    // Latest-ending first; an enclosing object ends after what it encloses.
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for (start, end) in candidates {
        let Some(Value::Object(obj)) = parse_lenient(&text[start..end]) else {
            continue;
        };
        if !matches_schema(&obj, task) {
            continue;
        }
        return decode(&obj, task).map_err(ExtractError::MalformedPlan);
    }
    Err(ExtractError::NoPlanFound { truncated })
}

/// Byte ranges of every balanced `{...}` and whether any `{` stays open.
/// String literals are tracked only inside braces, so stray quotes in prose
/// do not confuse the scan.
fn balanced_objects(text: &str) -> (Vec<(usize, usize)>, bool) {
    let mut stack = Vec::new();
    let mut found = Vec::new();
    let mut in_string = false;
    let mut escaped = false;
    for (i, ch) in text.char_indices() {
        if in_string {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' if !stack.is_empty() => in_string = true,
            '{' => stack.push(i),
            '}' => {
                if let Some(start) = stack.pop() {
                    found.push((start, i + 1));
                }
            }
            _ => {}
        }
    }
    (found, !stack.is_empty())
}

fn parse_lenient(s: &str) -> Option<Value> {
    if let Ok(v) = serde_json::from_str(s) {
        return Some(v);
    }
    let repaired = MISSING_COLON_TIME.replace_all(s, r#""$1":"$2""#);
    let repaired = MISSING_COLON.replace_all(&repaired, r#""$1":""#);
    serde_json::from_str(&repaired).ok()
}

fn matches_schema(obj: &Map<String, Value>, task: Task) -> bool {
    match task {
        Task::Calendar => obj.contains_key("start") && obj.contains_key("end"),
        Task::Trip | Task::Meeting => obj.contains_key("itinerary"),
    }
}

fn decode(obj: &Map<String, Value>, task: Task) -> Result<Plan, String> {
    match task {
        Task::Calendar => decode_calendar(obj).map(Plan::Calendar),
        Task::Trip => decode_trip(obj).map(Plan::Trip),
        Task::Meeting => decode_meeting(obj).map(Plan::Meeting),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str, String> {
    match obj.get(key) {
        Some(Value::String(s)) => Ok(s),
        Some(other) => Err(format!("{key:?} should be a string, got {other}")),
        None => Err(format!("missing {key:?}")),
    }
}

fn decode_calendar(obj: &Map<String, Value>) -> Result<CalendarPlan, String> {
    let point = |key: &str| -> Result<(Weekday, crate::time::TimeOfDay), String> {
        let Some(Value::Object(inner)) = obj.get(key) else {
            return Err(format!("{key:?} should be an object with day and time"));
        };
        let day = field(inner, "day")?.parse::<Weekday>().map_err(|e| e.to_string())?;
        let time = parse_time(field(inner, "time")?).map_err(|e| e.to_string())?;
        Ok((day, time))
    };
    let (day, start) = point("start")?;
    let (end_day, end) = point("end")?;
    if day != end_day {
        return Err(format!("meeting starts on {day} but ends on {end_day}"));
    }
    let slot = Interval::new(start, end).map_err(|e| e.to_string())?;
    Ok(CalendarPlan { day, slot })
}

fn items(obj: &Map<String, Value>) -> Result<&Vec<Value>, String> {
    match obj.get("itinerary") {
        Some(Value::Array(a)) => Ok(a),
        _ => Err("\"itinerary\" should be an array".into()),
    }
}

fn decode_trip(obj: &Map<String, Value>) -> Result<TripPlan, String> {
    let mut segments = Vec::new();
    for item in items(obj)? {
        let Value::Object(entry) = item else {
            return Err(format!("itinerary entry {item} is not an object"));
        };
        let range = field(entry, "day_range")?;
        let caps = DAY_RANGE
            .captures(range)
            .ok_or_else(|| format!("unreadable day range {range:?}"))?;
        let lo: u32 = caps[1].parse().map_err(|_| format!("bad day in {range:?}"))?;
        let hi: u32 = match caps.get(2) {
            Some(h) => h.as_str().parse().map_err(|_| format!("bad day in {range:?}"))?,
            None => lo,
        };
        segments.push(Segment { day_lo: lo, day_hi: hi, city: field(entry, "place")?.to_string() });
    }
    TripPlan::new(segments).map_err(|e| e.to_string())
}

fn decode_meeting(obj: &Map<String, Value>) -> Result<MeetingPlan, String> {
    let mut meetings = Vec::new();
    for item in items(obj)? {
        let Value::Object(entry) = item else {
            return Err(format!("itinerary entry {item} is not an object"));
        };
        if let Some(action) = entry.get("action") {
            if action.as_str().is_some_and(|a| !a.eq_ignore_ascii_case("meet")) {
                continue;
            }
        }
        let start = parse_time(field(entry, "start_time")?).map_err(|e| e.to_string())?;
        let end = parse_time(field(entry, "end_time")?).map_err(|e| e.to_string())?;
        meetings.push(Meeting {
            person: field(entry, "person")?.to_string(),
            location: field(entry, "location")?.to_string(),
            slot: Interval::new(start, end).map_err(|e| e.to_string())?,
        });
    }
    Ok(MeetingPlan::new(meetings))
}
