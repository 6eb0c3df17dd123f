//! Atomic constraints, plan verification and the complexity metric.
//!
//! [`compile`] turns a problem into an ordered [`ConstraintSet`]. [`verify`]
//! checks a plan against every constraint plus the variable domains (work
//! hours, allowed days, known cities and people), which are reported under
//! `domain/...` identifiers and do not count towards complexity.

mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{CalendarProblem, MeetingProblem, Problem, Task, TripProblem, Weekday};
use crate::solver;
use crate::time::TimeOfDay;

pub use verify::{
    verify, verify_against, verify_with, PreferenceMode, Verdict, VerificationReport, VerifyError,
    VerifyOptions, Violation,
};

/// Kind and parameters of one atomic constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum ConstraintKind {
    BusyBlock {
        participant: String,
        day: Weekday,
        start: TimeOfDay,
        end: TimeOfDay,
    },
    MeetingDuration {
        minutes: u32,
    },
    Preference {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        participant: Option<String>,
        day: Weekday,
        start: TimeOfDay,
        end: TimeOfDay,
    },
    TotalDays {
        days: u32,
    },
    FlightEdge {
        a: String,
        b: String,
    },
    CityDuration {
        city: String,
        days: u32,
    },
    EventWindow {
        city: String,
        day_lo: u32,
        day_hi: u32,
    },
    StartCondition {
        location: String,
        time: TimeOfDay,
    },
    TravelTime {
        from: String,
        to: String,
        minutes: u32,
    },
    AvailabilityWindow {
        person: String,
        location: String,
        start: TimeOfDay,
        end: TimeOfDay,
    },
    MinDuration {
        person: String,
        minutes: u32,
    },
    MaximalCount {
        count: usize,
    },
}

impl ConstraintKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstraintKind::BusyBlock { .. } => "BusyBlock",
            ConstraintKind::MeetingDuration { .. } => "MeetingDuration",
            ConstraintKind::Preference { .. } => "Preference",
            ConstraintKind::TotalDays { .. } => "TotalDays",
            ConstraintKind::FlightEdge { .. } => "FlightEdge",
            ConstraintKind::CityDuration { .. } => "CityDuration",
            ConstraintKind::EventWindow { .. } => "EventWindow",
            ConstraintKind::StartCondition { .. } => "StartCondition",
            ConstraintKind::TravelTime { .. } => "TravelTime",
            ConstraintKind::AvailabilityWindow { .. } => "AvailabilityWindow",
            ConstraintKind::MinDuration { .. } => "MinDuration",
            ConstraintKind::MaximalCount { .. } => "MaximalCount",
        }
    }

    /// Derived constraints are not stated in the problem text and are
    /// excluded from complexity.
    pub fn is_derived(&self) -> bool {
        matches!(self, ConstraintKind::MaximalCount { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicConstraint {
    pub id: String,
    #[serde(flatten)]
    pub kind: ConstraintKind,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSet {
    pub task: Task,
    pub constraints: Vec<AtomicConstraint>,
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&AtomicConstraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AtomicConstraint> {
        self.constraints.iter()
    }

    /// Number of stated constraints.
    pub fn complexity(&self) -> usize {
        self.constraints.iter().filter(|c| !c.kind.is_derived()).count()
    }

    fn push(&mut self, base_id: String, kind: ConstraintKind, description: String) {
        let mut id = base_id.clone();
        let mut n = 2;
        while self.get(&id).is_some() {
            id = format!("{base_id}#{n}");
            n += 1;
        }
        self.constraints.push(AtomicConstraint { id, kind, description });
    }
}

/// Stable identifiers shared by compilation and verification.
pub(crate) mod ids {
    use crate::domain::Weekday;
    use crate::time::Interval;

    pub fn busy(participant: &str, day: Weekday, iv: &Interval) -> String {
        format!("busy/{participant}/{day}/{iv}")
    }

    pub fn preference(participant: Option<&str>, day: Weekday, iv: &Interval) -> String {
        format!("preference/{}/{day}/{iv}", participant.unwrap_or("*"))
    }

    pub const DURATION: &str = "duration";
    pub const TOTAL_DAYS: &str = "total_days";
    pub const START: &str = "start";
    pub const MAXIMAL_COUNT: &str = "maximal_count";

    pub fn flight(a: &str, b: &str) -> String {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        format!("flight/{x}-{y}")
    }

    pub fn stay(city: &str) -> String {
        format!("stay/{city}")
    }

    pub fn event(city: &str, lo: u32, hi: u32) -> String {
        format!("event/{city}/{lo}-{hi}")
    }

    pub fn travel(from: &str, to: &str) -> String {
        format!("travel/{from}->{to}")
    }

    pub fn window(person: &str) -> String {
        format!("window/{person}")
    }

    pub fn min_duration(person: &str) -> String {
        format!("min_duration/{person}")
    }

    pub const DOMAIN_DAY: &str = "domain/day";
    pub const DOMAIN_WORK_WINDOW: &str = "domain/work_window";
    pub const DOMAIN_CITY: &str = "domain/city";
    pub const DOMAIN_PERSON: &str = "domain/person";
    pub const DOMAIN_CHRONOLOGY: &str = "domain/chronology";
    pub const DOMAIN_TRAVEL: &str = "domain/travel";
}

pub fn compile(problem: &Problem) -> ConstraintSet {
    match problem {
        Problem::Calendar(p) => compile_calendar(p),
        Problem::Trip(p) => compile_trip(p),
        Problem::Meeting(p) => compile_meeting(p),
    }
}

pub fn compile_calendar(p: &CalendarProblem) -> ConstraintSet {
    let mut set = ConstraintSet { task: Task::Calendar, constraints: Vec::new() };
    for (who, blocks) in p.busy() {
        for b in blocks {
            set.push(
                ids::busy(who, b.day, &b.interval),
                ConstraintKind::BusyBlock {
                    participant: who.clone(),
                    day: b.day,
                    start: b.interval.start(),
                    end: b.interval.end(),
                },
                format!("{who} is busy on {} from {} to {}", b.day, b.interval.start(), b.interval.end()),
            );
        }
    }
    for pref in p.preferences() {
        let who = pref.participant.as_deref();
        set.push(
            ids::preference(who, pref.day, &pref.interval),
            ConstraintKind::Preference {
                participant: pref.participant.clone(),
                day: pref.day,
                start: pref.interval.start(),
                end: pref.interval.end(),
            },
            format!(
                "{} would rather not meet on {} between {} and {}",
                who.unwrap_or("The group"),
                pref.day,
                pref.interval.start(),
                pref.interval.end()
            ),
        );
    }
    set.push(
        ids::DURATION.to_string(),
        ConstraintKind::MeetingDuration { minutes: p.duration_minutes() },
        format!("The meeting lasts {} minutes", p.duration_minutes()),
    );
    set
}

pub fn compile_trip(p: &TripProblem) -> ConstraintSet {
    let mut set = ConstraintSet { task: Task::Trip, constraints: Vec::new() };
    set.push(
        ids::TOTAL_DAYS.to_string(),
        ConstraintKind::TotalDays { days: p.total_days() },
        format!("The trip covers days 1 to {} without gaps", p.total_days()),
    );
    for f in p.flights() {
        let (a, b) = f.sorted();
        set.push(
            ids::flight(a, b),
            ConstraintKind::FlightEdge { a: a.to_string(), b: b.to_string() },
            format!("A direct flight connects {a} and {b}"),
        );
    }
    for (city, days) in p.city_durations() {
        set.push(
            ids::stay(city),
            ConstraintKind::CityDuration { city: city.clone(), days: *days },
            format!("Stay in {city} exactly once for {days} days"),
        );
    }
    for e in p.events() {
        set.push(
            ids::event(&e.city, e.day_lo, e.day_hi),
            ConstraintKind::EventWindow {
                city: e.city.clone(),
                day_lo: e.day_lo,
                day_hi: e.day_hi,
            },
            format!("Be in {} from day {} to day {}", e.city, e.day_lo, e.day_hi),
        );
    }
    set
}

/// Compiles a meeting problem. The `MaximalCount` bound comes from the
/// exact solver.
pub fn compile_meeting(p: &MeetingProblem) -> ConstraintSet {
    compile_meeting_with_bound(p, solver::max_meetable(p))
}

pub fn compile_meeting_with_bound(p: &MeetingProblem, max_meetable: usize) -> ConstraintSet {
    let mut set = ConstraintSet { task: Task::Meeting, constraints: Vec::new() };
    set.push(
        ids::START.to_string(),
        ConstraintKind::StartCondition {
            location: p.start_location().to_string(),
            time: p.start_time(),
        },
        format!("Start at {} at {}", p.start_location(), p.start_time()),
    );
    for ((from, to), minutes) in p.travel_minutes() {
        set.push(
            ids::travel(from, to),
            ConstraintKind::TravelTime {
                from: from.clone(),
                to: to.clone(),
                minutes: *minutes,
            },
            format!("Travelling from {from} to {to} takes {minutes} minutes"),
        );
    }
    for f in p.friends() {
        set.push(
            ids::window(&f.name),
            ConstraintKind::AvailabilityWindow {
                person: f.name.clone(),
                location: f.location.clone(),
                start: f.window.start(),
                end: f.window.end(),
            },
            format!(
                "{} is at {} from {} to {}",
                f.name,
                f.location,
                f.window.start(),
                f.window.end()
            ),
        );
        set.push(
            ids::min_duration(&f.name),
            ConstraintKind::MinDuration { person: f.name.clone(), minutes: f.min_duration_minutes },
            format!("Meet {} for at least {} minutes", f.name, f.min_duration_minutes),
        );
    }
    set.push(
        ids::MAXIMAL_COUNT.to_string(),
        ConstraintKind::MaximalCount { count: max_meetable },
        format!("Meet {max_meetable} friends, the most that can be met"),
    );
    set
}

/// Number of stated atomic constraints in a problem.
pub fn complexity(problem: &Problem) -> usize {
    match problem {
        Problem::Calendar(p) => compile_calendar(p).complexity(),
        Problem::Trip(p) => compile_trip(p).complexity(),
        // The bound does not affect the count, so skip the solve.
        Problem::Meeting(p) => compile_meeting_with_bound(p, 0).complexity(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BucketError {
    #[error("cannot bucket an empty list")]
    EmptyInput,
    #[error("bucket count must be at least 1")]
    ZeroBuckets,
}

/// Rank-based quantile buckets. Items are ranked by value, ties broken by
/// input position, and rank `r` of `n` goes to bucket `r * k / n`.
pub fn assign_buckets(complexities: &[usize], k: usize) -> Result<Vec<usize>, BucketError> {
    if k == 0 {
        return Err(BucketError::ZeroBuckets);
    }
    if complexities.is_empty() {
        return Err(BucketError::EmptyInput);
    }
    let n = complexities.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (complexities[i], i));
    let mut buckets = vec![0; n];
    for (rank, idx) in order.into_iter().enumerate() {
        buckets[idx] = rank * k / n;
    }
    Ok(buckets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bucket_examples() {
        assert_eq!(assign_buckets(&[3, 5, 7, 9, 11], 5).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(assign_buckets(&[4, 4, 4, 4, 4], 5).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(assign_buckets(&[9, 3, 7, 5, 11], 5).unwrap(), vec![3, 0, 2, 1, 4]);
        assert_eq!(assign_buckets(&[], 5), Err(BucketError::EmptyInput));
        assert_eq!(assign_buckets(&[1], 0), Err(BucketError::ZeroBuckets));
    }

    #[test]
    fn fewer_items_than_buckets() {
        assert_eq!(assign_buckets(&[7, 2], 5).unwrap(), vec![2, 0]);
    }

    proptest! {
        #[test]
        fn bucket_sizes_differ_by_at_most_one(values in prop::collection::vec(0usize..40, 1..200), k in 1usize..8) {
            let b = assign_buckets(&values, k).unwrap();
            let mut sizes = vec![0usize; k];
            for &x in &b { sizes[x] += 1; }
            let used: Vec<usize> = if values.len() >= k { sizes.clone() } else { sizes.iter().copied().filter(|&s| s > 0).collect() };
            let (lo, hi) = (used.iter().min().unwrap(), used.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
        }

        #[test]
        fn buckets_are_monotone_in_value(values in prop::collection::vec(0usize..40, 1..100)) {
            let b = assign_buckets(&values, 5).unwrap();
            for i in 0..values.len() {
                for j in 0..values.len() {
                    if values[i] < values[j] {
                        prop_assert!(b[i] <= b[j]);
                    }
                }
            }
        }
    }
}
