//! Minute-resolution time of day and half-open intervals.
//!
//! All times in the crate are integer minutes since midnight. Intervals are
//! half-open, so `[09:00, 10:00)` and `[10:00, 11:00)` do not overlap.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MINUTES_PER_DAY: u16 = 1440;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("unrecognized time format: {0:?}")]
    UnrecognizedTimeFormat(String),
    #[error("minute value {0} is outside [0, 1440)")]
    OutOfRange(u32),
    #[error("interval start {start} is not before end {end}")]
    EmptyInterval { start: TimeOfDay, end: TimeOfDay },
}

/// Minutes since midnight, always in `[0, 1440)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay(u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeStyle {
    /// Zero-padded `HH:MM`.
    H24,
    /// `H:MMAM` / `H:MMPM`.
    H12,
}

impl TimeOfDay {
    pub const MIDNIGHT: TimeOfDay = TimeOfDay(0);

    pub fn from_minutes(minutes: u32) -> Result<Self, TimeError> {
        if minutes < u32::from(MINUTES_PER_DAY) {
            Ok(TimeOfDay(minutes as u16))
        } else {
            Err(TimeError::OutOfRange(minutes))
        }
    }

    pub fn from_hm(hour: u32, minute: u32) -> Result<Self, TimeError> {
        if minute >= 60 {
            return Err(TimeError::OutOfRange(hour * 60 + minute));
        }
        Self::from_minutes(hour * 60 + minute)
    }

    pub fn minutes(self) -> u32 {
        u32::from(self.0)
    }

    pub fn hour(self) -> u32 {
        self.minutes() / 60
    }

    pub fn minute(self) -> u32 {
        self.minutes() % 60
    }

    /// Adds minutes, failing if the result leaves the day.
    pub fn checked_add(self, minutes: u32) -> Option<TimeOfDay> {
        Self::from_minutes(self.minutes().checked_add(minutes)?).ok()
    }

    pub fn format(self, style: TimeStyle) -> String {
        format_time(self, style)
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.hour(), self.minute())
    }
}

impl FromStr for TimeOfDay {
    type Err = TimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_time(s)
    }
}

impl Serialize for TimeOfDay {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimeOfDay {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_time(&s).map_err(serde::de::Error::custom)
    }
}

static TIME_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?i)\s*(\d{1,2})(?::(\d{2}))?\s*([ap]\.?m\.?)?\s*$").unwrap()
});

/// Parses `H:MM`, `HH:MM`, `H:MMAM`, `H:MMPM`, `HAM` and `HPM` (case-insensitive,
/// optional space before the meridiem).
pub fn parse_time(text: &str) -> Result<TimeOfDay, TimeError> {
    let unrecognized = || TimeError::UnrecognizedTimeFormat(text.to_string());
    let caps = TIME_RE.captures(text).ok_or_else(unrecognized)?;
    let hour: u32 = caps[1].parse().map_err(|_| unrecognized())?;
    let minute: u32 = match caps.get(2) {
        Some(m) => m.as_str().parse().map_err(|_| unrecognized())?,
        None => 0,
    };
    if minute >= 60 {
        return Err(unrecognized());
    }
    let hour = match caps.get(3) {
        Some(meridiem) => {
            if !(1..=12).contains(&hour) {
                return Err(unrecognized());
            }
            let pm = meridiem.as_str().to_ascii_lowercase().starts_with('p');
            match (hour, pm) {
                (12, false) => 0,
                (12, true) => 12,
                (h, false) => h,
                (h, true) => h + 12,
            }
        }
        // Bare hours without a meridiem are ambiguous.
        None if caps.get(2).is_none() => return Err(unrecognized()),
        None => hour,
    };
    TimeOfDay::from_hm(hour, minute).map_err(|_| unrecognized())
}

pub fn format_time(t: TimeOfDay, style: TimeStyle) -> String {
    match style {
        TimeStyle::H24 => t.to_string(),
        TimeStyle::H12 => {
            let (h, suffix) = match t.hour() {
                0 => (12, "AM"),
                h @ 1..=11 => (h, "AM"),
                12 => (12, "PM"),
                h => (h - 12, "PM"),
            };
            format!("{}:{:02}{}", h, t.minute(), suffix)
        }
    }
}

/// Half-open interval `[start, end)` with `start < end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    start: TimeOfDay,
    end: TimeOfDay,
}

#[derive(Deserialize)]
struct RawInterval {
    start: TimeOfDay,
    end: TimeOfDay,
}

impl TryFrom<RawInterval> for Interval {
    type Error = TimeError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.start, raw.end)
    }
}

impl Interval {
    pub fn new(start: TimeOfDay, end: TimeOfDay) -> Result<Self, TimeError> {
        if start < end {
            Ok(Interval { start, end })
        } else {
            Err(TimeError::EmptyInterval { start, end })
        }
    }

    pub fn from_minutes(start: u32, end: u32) -> Result<Self, TimeError> {
        Self::new(TimeOfDay::from_minutes(start)?, TimeOfDay::from_minutes(end)?)
    }

    pub fn start(&self) -> TimeOfDay {
        self.start
    }

    pub fn end(&self) -> TimeOfDay {
        self.end
    }

    pub fn duration_minutes(&self) -> u32 {
        self.end.minutes() - self.start.minutes()
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

pub fn overlaps(a: &Interval, b: &Interval) -> bool {
    a.overlaps(b)
}

pub fn duration_minutes(a: &Interval) -> u32 {
    a.duration_minutes()
}
