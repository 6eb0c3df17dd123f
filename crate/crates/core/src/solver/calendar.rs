use super::{Search, SolveOptions, SolveOutcome, SolveStatus};
use crate::constraints::PreferenceMode;
use crate::domain::{CalendarPlan, CalendarProblem, Plan, Weekday};
use crate::time::Interval;

/// Scans `(day, start)` candidates on the step grid, days in weekday order,
/// and returns the earliest slot clear of every busy block (and, in hard
/// mode, every preference range).
///
/// In tie-break mode the scan first honours preferences and falls back to
/// ignoring them when no such slot exists.
pub fn solve_calendar(p: &CalendarProblem, opts: &SolveOptions) -> SolveOutcome {
    let mut search = Search::new(opts.budget);
    let found = scan(p, opts, true, &mut search).or_else(|| {
        if opts.preferences == PreferenceMode::TieBreak && !search.exhausted() {
            scan(p, opts, false, &mut search)
        } else {
            None
        }
    });
    let status = match found {
        Some(plan) => SolveStatus::Satisfiable(Plan::Calendar(plan)),
        None => SolveStatus::Unsatisfiable,
    };
    search.finish(status)
}

fn scan(
    p: &CalendarProblem,
    opts: &SolveOptions,
    honour_preferences: bool,
    search: &mut Search,
) -> Option<CalendarPlan> {
    let mut days: Vec<Weekday> = p.allowed_days().to_vec();
    days.sort();
    let window = p.work_window();
    let step = opts.step.get();
    for day in days {
        let blocked: Vec<Interval> = p
            .busy()
            .values()
            .flatten()
            .filter(|b| b.day == day)
            .map(|b| b.interval)
            .chain(
                p.preferences()
                    .iter()
                    .filter(|pref| honour_preferences && pref.day == day)
                    .map(|pref| pref.interval),
            )
            .collect();
        let mut start = window.start().minutes();
        while start + p.duration_minutes() <= window.end().minutes() {
            if !search.tick() {
                return None;
            }
            let slot = Interval::from_minutes(start, start + p.duration_minutes())
                .expect("slot lies inside the work window");
            if !blocked.iter().any(|b| b.overlaps(&slot)) {
                return Some(CalendarPlan { day, slot });
            }
            start += step;
        }
    }
    None
}
