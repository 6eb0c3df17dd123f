use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{compile, ids, ConstraintKind, ConstraintSet};
use crate::domain::{
    CalendarPlan, CalendarProblem, MeetingPlan, MeetingProblem, Plan, Problem, Task, TripPlan,
    TripProblem,
};
use crate::time::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("plan is for the {plan} task but the problem is a {problem} problem")]
    PlanTaskMismatch { problem: Task, plan: Task },
}

/// How calendar preferences are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreferenceMode {
    /// A slot overlapping a preference range is a violation.
    #[default]
    Hard,
    /// Preferences only order candidate slots; they never fail a plan.
    TieBreak,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub preferences: PreferenceMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Correct,
    WrongPlan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint_id: String,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub checked: usize,
}

impl VerificationReport {
    pub fn is_correct(&self) -> bool {
        self.verdict == Verdict::Correct
    }

    pub fn violates(&self, constraint_id: &str) -> bool {
        self.violations.iter().any(|v| v.constraint_id == constraint_id)
    }
}

pub fn verify(problem: &Problem, plan: &Plan) -> Result<VerificationReport, VerifyError> {
    verify_with(problem, plan, &VerifyOptions::default())
}

pub fn verify_with(
    problem: &Problem,
    plan: &Plan,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if problem.task() != plan.task() {
        return Err(VerifyError::PlanTaskMismatch { problem: problem.task(), plan: plan.task() });
    }
    let set = compile(problem);
    verify_against(&set, problem, plan, opts)
}

/// Verifies against an already compiled constraint set.
pub fn verify_against(
    set: &ConstraintSet,
    problem: &Problem,
    plan: &Plan,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let mut out = Violations::default();
    match (problem, plan) {
        (Problem::Calendar(p), Plan::Calendar(x)) => check_calendar(set, p, x, opts, &mut out),
        (Problem::Trip(p), Plan::Trip(x)) => check_trip(set, p, x, &mut out),
        (Problem::Meeting(p), Plan::Meeting(x)) => check_meeting(set, p, x, &mut out),
        _ => {
            return Err(VerifyError::PlanTaskMismatch { problem: problem.task(), plan: plan.task() })
        }
    }
    let violations = out.0;
    Ok(VerificationReport {
        verdict: if violations.is_empty() { Verdict::Correct } else { Verdict::WrongPlan },
        violations,
        checked: set.len(),
    })
}

#[derive(Default)]
struct Violations(Vec<Violation>);

impl Violations {
    fn add(&mut self, id: impl Into<String>, explanation: impl Into<String>) {
        self.0.push(Violation { constraint_id: id.into(), explanation: explanation.into() });
    }
}

fn check_calendar(
    set: &ConstraintSet,
    p: &CalendarProblem,
    plan: &CalendarPlan,
    opts: &VerifyOptions,
    out: &mut Violations,
) {
    if !p.allowed_days().contains(&plan.day) {
        out.add(ids::DOMAIN_DAY, format!("{} is not an allowed day", plan.day));
    }
    if !p.work_window().contains(&plan.slot) {
        out.add(
            ids::DOMAIN_WORK_WINDOW,
            format!("slot {} leaves the work hours {}", plan.slot, p.work_window()),
        );
    }
    for c in set.iter() {
        match &c.kind {
            ConstraintKind::BusyBlock { participant, day, start, end } => {
                let block = Interval::new(*start, *end).expect("compiled from a valid interval");
                if *day == plan.day && block.overlaps(&plan.slot) {
                    out.add(
                        &c.id,
                        format!("slot {} overlaps {participant}'s busy block {block}", plan.slot),
                    );
                }
            }
            ConstraintKind::MeetingDuration { minutes } => {
                let got = plan.slot.duration_minutes();
                if got != *minutes {
                    out.add(&c.id, format!("slot lasts {got} minutes, required {minutes}"));
                }
            }
            ConstraintKind::Preference { day, start, end, .. } => {
                let range = Interval::new(*start, *end).expect("compiled from a valid interval");
                if opts.preferences == PreferenceMode::Hard
                    && *day == plan.day
                    && range.overlaps(&plan.slot)
                {
                    out.add(&c.id, format!("slot {} falls in avoided range {range}", plan.slot));
                }
            }
            _ => {}
        }
    }
}

fn check_trip(set: &ConstraintSet, p: &TripProblem, plan: &TripPlan, out: &mut Violations) {
    let segs = plan.segments();
    for s in segs {
        if !p.city_durations().contains_key(&s.city) {
            out.add(ids::DOMAIN_CITY, format!("{} is not a city of this trip", s.city));
        }
    }
    for pair in segs.windows(2) {
        let (a, b) = (&pair[0].city, &pair[1].city);
        if a != b && !p.has_flight(a, b) {
            out.add(ids::flight(a, b), format!("no direct flight between {a} and {b}"));
        }
    }
    for c in set.iter() {
        match &c.kind {
            ConstraintKind::TotalDays { days } => {
                let mut problems = Vec::new();
                if segs[0].day_lo != 1 {
                    problems.push(format!("itinerary starts on day {}", segs[0].day_lo));
                }
                let last = segs[segs.len() - 1].day_hi;
                if last != *days {
                    problems.push(format!("itinerary ends on day {last}, expected {days}"));
                }
                for pair in segs.windows(2) {
                    if pair[1].day_lo != pair[0].day_hi {
                        problems.push(format!(
                            "segment starting day {} does not begin on the travel day {}",
                            pair[1].day_lo, pair[0].day_hi
                        ));
                    }
                }
                if !problems.is_empty() {
                    out.add(&c.id, problems.join("; "));
                }
            }
            ConstraintKind::CityDuration { city, days } => {
                let visits: Vec<_> = segs.iter().filter(|s| &s.city == city).collect();
                match visits.as_slice() {
                    [] => out.add(&c.id, format!("{city} is never visited")),
                    [one] => {
                        let got = one.day_hi - one.day_lo + 1;
                        if got != *days {
                            out.add(&c.id, format!("{city} gets {got} days, required {days}"));
                        }
                    }
                    many => out.add(&c.id, format!("{city} is visited {} times", many.len())),
                }
            }
            ConstraintKind::EventWindow { city, day_lo, day_hi } => {
                let covered = segs
                    .iter()
                    .any(|s| &s.city == city && s.day_lo <= *day_lo && *day_hi <= s.day_hi);
                if !covered {
                    out.add(
                        &c.id,
                        format!("no stay in {city} covers days {day_lo} to {day_hi}"),
                    );
                }
            }
            _ => {}
        }
    }
}

fn check_meeting(set: &ConstraintSet, p: &MeetingProblem, plan: &MeetingPlan, out: &mut Violations) {
    let meetings = plan.meetings();
    for m in meetings {
        if p.friend(&m.person).is_none() {
            out.add(ids::DOMAIN_PERSON, format!("{} is not one of the friends", m.person));
        }
    }
    // Legs as (from location, departure time, meeting).
    let mut legs = Vec::with_capacity(meetings.len());
    let (mut loc, mut free_at) = (p.start_location(), p.start_time().minutes());
    for m in meetings {
        if p.travel(loc, &m.location).is_none() {
            out.add(
                ids::DOMAIN_TRAVEL,
                format!("no known travel time from {loc} to {}", m.location),
            );
        }
        if m.slot.start().minutes() < free_at {
            out.add(
                ids::DOMAIN_CHRONOLOGY,
                format!("meeting with {} starts before the previous one ends", m.person),
            );
        }
        legs.push((loc, free_at, m));
        loc = &m.location;
        free_at = m.slot.end().minutes();
    }

    for c in set.iter() {
        match &c.kind {
            ConstraintKind::StartCondition { location, time } => {
                if let Some(m) = meetings.iter().find(|m| m.slot.start() < *time) {
                    out.add(
                        &c.id,
                        format!("meeting with {} starts before arriving at {location} at {time}", m.person),
                    );
                }
            }
            ConstraintKind::TravelTime { from, to, minutes } => {
                for (leg_from, depart, m) in &legs {
                    if *leg_from == from.as_str()
                        && &m.location == to
                        && m.slot.start().minutes() < depart + minutes
                    {
                        out.add(
                            &c.id,
                            format!(
                                "meeting with {} starts at {} but {from} to {to} takes {minutes} minutes",
                                m.person,
                                m.slot.start()
                            ),
                        );
                    }
                }
            }
            ConstraintKind::AvailabilityWindow { person, location, start, end } => {
                let window = Interval::new(*start, *end).expect("compiled from a valid interval");
                let with: Vec<_> = meetings.iter().filter(|m| &m.person == person).collect();
                if with.len() > 1 {
                    out.add(&c.id, format!("{person} is met {} times", with.len()));
                }
                for m in with {
                    if &m.location != location {
                        out.add(&c.id, format!("{person} is at {location}, not {}", m.location));
                    } else if !window.contains(&m.slot) {
                        out.add(&c.id, format!("meeting {} leaves {person}'s window {window}", m.slot));
                    }
                }
            }
            ConstraintKind::MinDuration { person, minutes } => {
                for m in meetings.iter().filter(|m| &m.person == person) {
                    let got = m.slot.duration_minutes();
                    if got < *minutes {
                        out.add(&c.id, format!("{person} is met for {got} minutes, minimum {minutes}"));
                    }
                }
            }
            ConstraintKind::MaximalCount { count } => {
                let met: HashSet<&str> = meetings
                    .iter()
                    .filter(|m| p.friend(&m.person).is_some())
                    .map(|m| m.person.as_str())
                    .collect();
                if met.len() != *count {
                    out.add(&c.id, format!("{} friends met, {count} can be met", met.len()));
                }
            }
            _ => {}
        }
    }
}
