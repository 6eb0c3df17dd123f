//! Problem and plan data model for calendar scheduling, trip planning and
//! meeting planning.
//!
//! Every problem type validates its invariants on construction and on
//! deserialization, so a value in hand is always well-formed.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::{Interval, TimeOfDay};

/// A violated type invariant, named so callers can match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("participants must be nonempty")]
    NoParticipants,
    #[error("allowed days must be nonempty")]
    NoAllowedDays,
    #[error("duplicate participant {0:?}")]
    DuplicateParticipant(String),
    #[error("meeting duration must be positive")]
    ZeroDuration,
    #[error("meeting duration {duration} exceeds work window of {window} minutes")]
    DurationExceedsWindow { duration: u32, window: u32 },
    #[error("busy blocks listed for unknown participant {0:?}")]
    UnknownParticipant(String),
    #[error("total_days must be positive")]
    ZeroTotalDays,
    #[error("city list must be nonempty")]
    NoCities,
    #[error("required stay in {0:?} must be positive")]
    ZeroCityDuration(String),
    #[error("city durations sum to {sum}, expected total_days + cities - 1 = {expected}")]
    DurationSumMismatch { sum: u32, expected: u32 },
    #[error("flight endpoint {0:?} is not a city of the trip")]
    UnknownFlightCity(String),
    #[error("flight from {0:?} to itself")]
    SelfFlight(String),
    #[error("event in {city:?} has invalid window day {lo}..{hi} for a {total}-day trip")]
    InvalidEventWindow { city: String, lo: u32, hi: u32, total: u32 },
    #[error("event city {0:?} is not a city of the trip")]
    UnknownEventCity(String),
    #[error("no travel time from {from:?} to {to:?}")]
    MissingTravelEntry { from: String, to: String },
    #[error("duplicate friend {0:?}")]
    DuplicateFriend(String),
    #[error("minimum duration for {0:?} must be positive")]
    ZeroMinDuration(String),
    #[error("trip plan has no segments")]
    EmptyItinerary,
    #[error("segment day range {lo}-{hi} is invalid")]
    InvalidSegment { lo: u32, hi: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Weekday {
    Monday,
    Tuesday,
    Wednesday,
    Thursday,
    Friday,
    Saturday,
    Sunday,
}

impl Weekday {
    pub const ALL: [Weekday; 7] = [
        Weekday::Monday,
        Weekday::Tuesday,
        Weekday::Wednesday,
        Weekday::Thursday,
        Weekday::Friday,
        Weekday::Saturday,
        Weekday::Sunday,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Weekday::Monday => "Monday",
            Weekday::Tuesday => "Tuesday",
            Weekday::Wednesday => "Wednesday",
            Weekday::Thursday => "Thursday",
            Weekday::Friday => "Friday",
            Weekday::Saturday => "Saturday",
            Weekday::Sunday => "Sunday",
        }
    }
}

impl fmt::Display for Weekday {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown weekday {0:?}")]
pub struct UnknownWeekday(pub String);

impl FromStr for Weekday {
    type Err = UnknownWeekday;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        Weekday::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(trimmed))
            .ok_or_else(|| UnknownWeekday(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Calendar,
    Trip,
    Meeting,
}

impl Task {
    pub const ALL: [Task; 3] = [Task::Calendar, Task::Trip, Task::Meeting];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Calendar => "calendar",
            Task::Trip => "trip",
            Task::Meeting => "meeting",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "calendar" => Ok(Task::Calendar),
            "trip" => Ok(Task::Trip),
            "meeting" => Ok(Task::Meeting),
            other => Err(format!("unknown task {other:?}")),
        }
    }
}

/// A time range on a given weekday.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayInterval {
    pub day: Weekday,
    #[serde(flatten)]
    pub interval: Interval,
}

impl DayInterval {
    pub fn new(day: Weekday, interval: Interval) -> Self {
        DayInterval { day, interval }
    }
}

/// A range during which a meeting should not be placed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preference {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub participant: Option<String>,
    pub day: Weekday,
    #[serde(flatten)]
    pub interval: Interval,
}

fn default_work_window() -> Interval {
    Interval::from_minutes(9 * 60, 17 * 60).expect("static window")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CalendarProblemRaw")]
pub struct CalendarProblem {
    participants: Vec<String>,
    allowed_days: Vec<Weekday>,
    work_window: Interval,
    duration_minutes: u32,
    busy: IndexMap<String, Vec<DayInterval>>,
    preferences: Vec<Preference>,
}

#[derive(Deserialize)]
struct CalendarProblemRaw {
    participants: Vec<String>,
    allowed_days: Vec<Weekday>,
    #[serde(default = "default_work_window")]
    work_window: Interval,
    duration_minutes: u32,
    #[serde(default)]
    busy: IndexMap<String, Vec<DayInterval>>,
    #[serde(default)]
    preferences: Vec<Preference>,
}

impl TryFrom<CalendarProblemRaw> for CalendarProblem {
    type Error = ValidationError;

    fn try_from(raw: CalendarProblemRaw) -> Result<Self, Self::Error> {
        CalendarProblem::new(
            raw.participants,
            raw.allowed_days,
            raw.work_window,
            raw.duration_minutes,
            raw.busy,
            raw.preferences,
        )
    }
}

impl CalendarProblem {
    /// Builds a calendar problem. The busy map is normalized to hold one
    /// entry per participant in participant order.
    pub fn new(
        participants: Vec<String>,
        allowed_days: Vec<Weekday>,
        work_window: Interval,
        duration_minutes: u32,
        busy: IndexMap<String, Vec<DayInterval>>,
        preferences: Vec<Preference>,
    ) -> Result<Self, ValidationError> {
        if participants.is_empty() {
            return Err(ValidationError::NoParticipants);
        }
        let mut seen = HashSet::new();
        for p in &participants {
            if !seen.insert(p.as_str()) {
                return Err(ValidationError::DuplicateParticipant(p.clone()));
            }
        }
        if allowed_days.is_empty() {
            return Err(ValidationError::NoAllowedDays);
        }
        if duration_minutes == 0 {
            return Err(ValidationError::ZeroDuration);
        }
        if duration_minutes > work_window.duration_minutes() {
            return Err(ValidationError::DurationExceedsWindow {
                duration: duration_minutes,
                window: work_window.duration_minutes(),
            });
        }
        if let Some(unknown) = busy.keys().find(|k| !seen.contains(k.as_str())) {
            return Err(ValidationError::UnknownParticipant(unknown.clone()));
        }
        if let Some(unknown) = preferences
            .iter()
            .filter_map(|p| p.participant.as_ref())
            .find(|k| !seen.contains(k.as_str()))
        {
            return Err(ValidationError::UnknownParticipant(unknown.clone()));
        }
        let mut allowed_days = allowed_days;
        allowed_days.dedup();
        let busy = participants
            .iter()
            .map(|p| (p.clone(), busy.get(p).cloned().unwrap_or_default()))
            .collect();
        Ok(CalendarProblem {
            participants,
            allowed_days,
            work_window,
            duration_minutes,
            busy,
            preferences,
        })
    }

    pub fn participants(&self) -> &[String] {
        &self.participants
    }

    pub fn allowed_days(&self) -> &[Weekday] {
        &self.allowed_days
    }

    pub fn work_window(&self) -> Interval {
        self.work_window
    }

    pub fn duration_minutes(&self) -> u32 {
        self.duration_minutes
    }

    pub fn busy(&self) -> &IndexMap<String, Vec<DayInterval>> {
        &self.busy
    }

    pub fn blocks_for(&self, participant: &str) -> &[DayInterval] {
        self.busy.get(participant).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.preferences
    }
}

/// Unordered pair of cities with a direct flight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlightPair(pub String, pub String);

impl FlightPair {
    pub fn connects(&self, a: &str, b: &str) -> bool {
        (self.0 == a && self.1 == b) || (self.0 == b && self.1 == a)
    }

    /// The endpoints in name order, used for stable identifiers.
    pub fn sorted(&self) -> (&str, &str) {
        if self.0 <= self.1 {
            (&self.0, &self.1)
        } else {
            (&self.1, &self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripEvent {
    pub city: String,
    pub day_lo: u32,
    pub day_hi: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TripProblemRaw")]
pub struct TripProblem {
    total_days: u32,
    city_durations: IndexMap<String, u32>,
    flights: Vec<FlightPair>,
    events: Vec<TripEvent>,
}

#[derive(Deserialize)]
struct TripProblemRaw {
    total_days: u32,
    city_durations: IndexMap<String, u32>,
    #[serde(default)]
    flights: Vec<FlightPair>,
    #[serde(default)]
    events: Vec<TripEvent>,
}

impl TryFrom<TripProblemRaw> for TripProblem {
    type Error = ValidationError;

    fn try_from(raw: TripProblemRaw) -> Result<Self, Self::Error> {
        TripProblem::new(raw.total_days, raw.city_durations, raw.flights, raw.events)
    }
}

impl TripProblem {
    /// Builds a trip problem. Duplicate flight pairs (in either direction)
    /// are collapsed, keeping the first occurrence.
    pub fn new(
        total_days: u32,
        city_durations: IndexMap<String, u32>,
        flights: Vec<FlightPair>,
        events: Vec<TripEvent>,
    ) -> Result<Self, ValidationError> {
        if total_days == 0 {
            return Err(ValidationError::ZeroTotalDays);
        }
        if city_durations.is_empty() {
            return Err(ValidationError::NoCities);
        }
        if let Some((city, _)) = city_durations.iter().find(|(_, d)| **d == 0) {
            return Err(ValidationError::ZeroCityDuration(city.clone()));
        }
        let sum: u32 = city_durations.values().sum();
        let expected = total_days + city_durations.len() as u32 - 1;
        if sum != expected {
            return Err(ValidationError::DurationSumMismatch { sum, expected });
        }
        let mut deduped: Vec<FlightPair> = Vec::with_capacity(flights.len());
        for f in flights {
            for end in [&f.0, &f.1] {
                if !city_durations.contains_key(end) {
                    return Err(ValidationError::UnknownFlightCity(end.clone()));
                }
            }
            if f.0 == f.1 {
                return Err(ValidationError::SelfFlight(f.0));
            }
            if !deduped.iter().any(|g| g.connects(&f.0, &f.1)) {
                deduped.push(f);
            }
        }
        for e in &events {
            if !city_durations.contains_key(&e.city) {
                return Err(ValidationError::UnknownEventCity(e.city.clone()));
            }
            if e.day_lo == 0 || e.day_lo > e.day_hi || e.day_hi > total_days {
                return Err(ValidationError::InvalidEventWindow {
                    city: e.city.clone(),
                    lo: e.day_lo,
                    hi: e.day_hi,
                    total: total_days,
                });
            }
        }
        Ok(TripProblem {
            total_days,
            city_durations,
            flights: deduped,
            events,
        })
    }

    pub fn total_days(&self) -> u32 {
        self.total_days
    }

    pub fn city_durations(&self) -> &IndexMap<String, u32> {
        &self.city_durations
    }

    pub fn cities(&self) -> impl Iterator<Item = &str> {
        self.city_durations.keys().map(String::as_str)
    }

    pub fn flights(&self) -> &[FlightPair] {
        &self.flights
    }

    pub fn events(&self) -> &[TripEvent] {
        &self.events
    }

    pub fn has_flight(&self, a: &str, b: &str) -> bool {
        self.flights.iter().any(|f| f.connects(a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Friend {
    pub name: String,
    pub location: String,
    pub window: Interval,
    pub min_duration_minutes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TravelEntry {
    pub from: String,
    pub to: String,
    pub minutes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MeetingProblemRaw")]
pub struct MeetingProblem {
    start_location: String,
    start_time: TimeOfDay,
    locations: Vec<String>,
    #[serde(with = "travel_list")]
    travel_minutes: IndexMap<(String, String), u32>,
    friends: Vec<Friend>,
}

#[derive(Deserialize)]
struct MeetingProblemRaw {
    start_location: String,
    start_time: TimeOfDay,
    #[serde(default)]
    locations: Vec<String>,
    #[serde(with = "travel_list")]
    travel_minutes: IndexMap<(String, String), u32>,
    #[serde(default)]
    friends: Vec<Friend>,
}

impl TryFrom<MeetingProblemRaw> for MeetingProblem {
    type Error = ValidationError;

    fn try_from(raw: MeetingProblemRaw) -> Result<Self, Self::Error> {
        MeetingProblem::with_locations(
            raw.start_location,
            raw.start_time,
            raw.locations,
            raw.travel_minutes,
            raw.friends,
        )
    }
}

mod travel_list {
    use super::TravelEntry;
    use indexmap::IndexMap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        map: &IndexMap<(String, String), u32>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let entries: Vec<TravelEntry> = map
            .iter()
            .map(|((from, to), minutes)| TravelEntry {
                from: from.clone(),
                to: to.clone(),
                minutes: *minutes,
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<IndexMap<(String, String), u32>, D::Error> {
        let entries = Vec::<TravelEntry>::deserialize(d)?;
        Ok(entries
            .into_iter()
            .map(|e| ((e.from, e.to), e.minutes))
            .collect())
    }
}

impl MeetingProblem {
    pub fn new(
        start_location: String,
        start_time: TimeOfDay,
        travel_minutes: IndexMap<(String, String), u32>,
        friends: Vec<Friend>,
    ) -> Result<Self, ValidationError> {
        Self::with_locations(start_location, start_time, Vec::new(), travel_minutes, friends)
    }

    /// Builds a meeting problem. The location set is the sorted union of the
    /// given names, the start location, travel endpoints and friend locations.
    /// Every ordered pair of distinct locations must have a travel time.
    ///
    /// A friend whose window is shorter than the requested minimum is
    /// accepted; such a friend simply cannot be met.
    pub fn with_locations(
        start_location: String,
        start_time: TimeOfDay,
        locations: Vec<String>,
        travel_minutes: IndexMap<(String, String), u32>,
        friends: Vec<Friend>,
    ) -> Result<Self, ValidationError> {
        let mut names: Vec<String> = locations;
        names.push(start_location.clone());
        for (from, to) in travel_minutes.keys() {
            names.push(from.clone());
            names.push(to.clone());
        }
        names.extend(friends.iter().map(|f| f.location.clone()));
        names.sort();
        names.dedup();

        let mut seen = HashSet::new();
        for f in &friends {
            if !seen.insert(f.name.as_str()) {
                return Err(ValidationError::DuplicateFriend(f.name.clone()));
            }
            if f.min_duration_minutes == 0 {
                return Err(ValidationError::ZeroMinDuration(f.name.clone()));
            }
        }
        for from in &names {
            for to in &names {
                if from != to && !travel_minutes.contains_key(&(from.clone(), to.clone())) {
                    return Err(ValidationError::MissingTravelEntry {
                        from: from.clone(),
                        to: to.clone(),
                    });
                }
            }
        }
        Ok(MeetingProblem {
            start_location,
            start_time,
            locations: names,
            travel_minutes,
            friends,
        })
    }

    pub fn start_location(&self) -> &str {
        &self.start_location
    }

    pub fn start_time(&self) -> TimeOfDay {
        self.start_time
    }

    pub fn locations(&self) -> &[String] {
        &self.locations
    }

    pub fn travel_minutes(&self) -> &IndexMap<(String, String), u32> {
        &self.travel_minutes
    }

    /// Travel time between two locations; zero when staying put.
    pub fn travel(&self, from: &str, to: &str) -> Option<u32> {
        if from == to {
            return Some(0);
        }
        self.travel_minutes
            .get(&(from.to_string(), to.to_string()))
            .copied()
    }

    pub fn friends(&self) -> &[Friend] {
        &self.friends
    }

    pub fn friend(&self, name: &str) -> Option<&Friend> {
        self.friends.iter().find(|f| f.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalendarPlan {
    pub day: Weekday,
    pub slot: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub day_lo: u32,
    pub day_hi: u32,
    pub city: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TripPlanRaw")]
pub struct TripPlan {
    segments: Vec<Segment>,
}

#[derive(Deserialize)]
struct TripPlanRaw {
    segments: Vec<Segment>,
}

impl TryFrom<TripPlanRaw> for TripPlan {
    type Error = ValidationError;

    fn try_from(raw: TripPlanRaw) -> Result<Self, Self::Error> {
        TripPlan::new(raw.segments)
    }
}

impl TripPlan {
    pub fn new(segments: Vec<Segment>) -> Result<Self, ValidationError> {
        if segments.is_empty() {
            return Err(ValidationError::EmptyItinerary);
        }
        if let Some(s) = segments.iter().find(|s| s.day_lo > s.day_hi) {
            return Err(ValidationError::InvalidSegment {
                lo: s.day_lo,
                hi: s.day_hi,
            });
        }
        Ok(TripPlan { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<Segment> {
        self.segments
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meeting {
    pub person: String,
    pub location: String,
    #[serde(flatten)]
    pub slot: Interval,
}

/// Meetings in ascending start order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(from = "MeetingPlanRaw")]
pub struct MeetingPlan {
    meetings: Vec<Meeting>,
}

#[derive(Deserialize)]
struct MeetingPlanRaw {
    meetings: Vec<Meeting>,
}

impl From<MeetingPlanRaw> for MeetingPlan {
    fn from(raw: MeetingPlanRaw) -> Self {
        MeetingPlan::new(raw.meetings)
    }
}

impl MeetingPlan {
    /// Stable-sorts by start time.
    pub fn new(mut meetings: Vec<Meeting>) -> Self {
        meetings.sort_by_key(|m| m.slot.start());
        MeetingPlan { meetings }
    }

    pub fn meetings(&self) -> &[Meeting] {
        &self.meetings
    }

    pub fn len(&self) -> usize {
        self.meetings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meetings.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Problem {
    Calendar(CalendarProblem),
    Trip(TripProblem),
    Meeting(MeetingProblem),
}

impl Problem {
    pub fn task(&self) -> Task {
        match self {
            Problem::Calendar(_) => Task::Calendar,
            Problem::Trip(_) => Task::Trip,
            Problem::Meeting(_) => Task::Meeting,
        }
    }

    /// Decodes canonical problem JSON for a known task.
    pub fn from_json(task: Task, json: &str) -> serde_json::Result<Problem> {
        Ok(match task {
            Task::Calendar => Problem::Calendar(serde_json::from_str(json)?),
            Task::Trip => Problem::Trip(serde_json::from_str(json)?),
            Task::Meeting => Problem::Meeting(serde_json::from_str(json)?),
        })
    }

    pub fn from_value(task: Task, value: serde_json::Value) -> serde_json::Result<Problem> {
        Ok(match task {
            Task::Calendar => Problem::Calendar(serde_json::from_value(value)?),
            Task::Trip => Problem::Trip(serde_json::from_value(value)?),
            Task::Meeting => Problem::Meeting(serde_json::from_value(value)?),
        })
    }
}

impl From<CalendarProblem> for Problem {
    fn from(p: CalendarProblem) -> Self {
        Problem::Calendar(p)
    }
}

impl From<TripProblem> for Problem {
    fn from(p: TripProblem) -> Self {
        Problem::Trip(p)
    }
}

impl From<MeetingProblem> for Problem {
    fn from(p: MeetingProblem) -> Self {
        Problem::Meeting(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Plan {
    Calendar(CalendarPlan),
    Trip(TripPlan),
    Meeting(MeetingPlan),
}

impl Plan {
    pub fn task(&self) -> Task {
        match self {
            Plan::Calendar(_) => Task::Calendar,
            Plan::Trip(_) => Task::Trip,
            Plan::Meeting(_) => Task::Meeting,
        }
    }

    pub fn from_json(task: Task, json: &str) -> serde_json::Result<Plan> {
        Ok(match task {
            Task::Calendar => Plan::Calendar(serde_json::from_str(json)?),
            Task::Trip => Plan::Trip(serde_json::from_str(json)?),
            Task::Meeting => Plan::Meeting(serde_json::from_str(json)?),
        })
    }

    /// Renders the plan in the answer format the task prompts ask for.
    pub fn to_answer_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Plan::Calendar(p) => json!({
                "start": {"day": p.day.name(), "time": p.slot.start().to_string()},
                "end": {"day": p.day.name(), "time": p.slot.end().to_string()},
            }),
            Plan::Trip(p) => json!({
                "itinerary": p.segments().iter().map(|s| json!({
                    "day_range": format!("Day {}-{}", s.day_lo, s.day_hi),
                    "place": s.city,
                })).collect::<Vec<_>>()
            }),
            Plan::Meeting(p) => json!({
                "itinerary": p.meetings().iter().map(|m| json!({
                    "action": "meet",
                    "location": m.location,
                    "person": m.person,
                    "start_time": m.slot.start().to_string(),
                    "end_time": m.slot.end().to_string(),
                })).collect::<Vec<_>>()
            }),
        }
    }
}

impl From<CalendarPlan> for Plan {
    fn from(p: CalendarPlan) -> Self {
        Plan::Calendar(p)
    }
}

impl From<TripPlan> for Plan {
    fn from(p: TripPlan) -> Self {
        Plan::Trip(p)
    }
}

impl From<MeetingPlan> for Plan {
    fn from(p: MeetingPlan) -> Self {
        Plan::Meeting(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn durations(pairs: &[(&str, u32)]) -> IndexMap<String, u32> {
        pairs.iter().map(|(c, d)| (c.to_string(), *d)).collect()
    }

    #[test]
    fn trip_duration_sum_is_enforced() {
        let ok = TripProblem::new(
            7,
            durations(&[("Madrid", 4), ("Dublin", 3), ("Tallinn", 2)]),
            vec![],
            vec![],
        );
        assert!(ok.is_ok());
        let err = TripProblem::new(
            7,
            durations(&[("Madrid", 5), ("Dublin", 3), ("Tallinn", 2)]),
            vec![],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, ValidationError::DurationSumMismatch { sum: 10, expected: 9 });
    }

    #[test]
    fn trip_rejects_bad_event_window() {
        let err = TripProblem::new(
            3,
            durations(&[("Oslo", 3)]),
            vec![],
            vec![TripEvent { city: "Oslo".into(), day_lo: 2, day_hi: 4 }],
        )
        .unwrap_err();
        assert!(matches!(err, ValidationError::InvalidEventWindow { .. }));
    }

    #[test]
    fn calendar_rejects_long_duration_and_empty_participants() {
        let window = Interval::from_minutes(540, 600).unwrap();
        let err = CalendarProblem::new(
            vec!["A".into()],
            vec![Weekday::Monday],
            window,
            90,
            IndexMap::new(),
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, ValidationError::DurationExceedsWindow { .. }));
        let err = CalendarProblem::new(vec![], vec![Weekday::Monday], window, 30, IndexMap::new(), vec![])
            .unwrap_err();
        assert_eq!(err, ValidationError::NoParticipants);
    }

    #[test]
    fn meeting_requires_full_travel_matrix() {
        let mut travel = IndexMap::new();
        travel.insert(("A".to_string(), "B".to_string()), 10);
        let err = MeetingProblem::new(
            "A".into(),
            TimeOfDay::from_minutes(540).unwrap(),
            travel,
            vec![],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ValidationError::MissingTravelEntry { from: "B".into(), to: "A".into() }
        );
    }

    #[test]
    fn calendar_json_round_trip_and_defaults() {
        let json = r#"{"participants":["James"],"allowed_days":["Monday"],"duration_minutes":60,
            "busy":{"James":[{"day":"Monday","start":"11:30","end":"12:00"}]}}"#;
        let p: CalendarProblem = serde_json::from_str(json).unwrap();
        assert_eq!(p.work_window(), Interval::from_minutes(540, 1020).unwrap());
        let back: CalendarProblem = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"participants":["James"],"allowed_days":["Monday"],"duration_minutes":0}"#;
        assert!(serde_json::from_str::<CalendarProblem>(bad).is_err());
    }

    #[test]
    fn meeting_plan_sorts_by_start() {
        let m = |p: &str, a, b| Meeting {
            person: p.into(),
            location: "X".into(),
            slot: Interval::from_minutes(a, b).unwrap(),
        };
        let plan = MeetingPlan::new(vec![m("B", 700, 760), m("A", 600, 650)]);
        assert_eq!(plan.meetings()[0].person, "A");
    }
}
