//! Renders problems as prompt text in the benchmark's sentence forms.
//! `parse_problem(task, &render(p))` reproduces `p`.

use std::fmt::Write;

use crate::domain::{CalendarProblem, MeetingProblem, Problem, TripProblem};
use crate::time::{Interval, TimeOfDay, TimeStyle};

pub fn render(problem: &Problem) -> String {
    match problem {
        Problem::Calendar(p) => render_calendar(p),
        Problem::Trip(p) => render_trip(p),
        Problem::Meeting(p) => render_meeting(p),
    }
}

fn h24(t: TimeOfDay) -> String {
    format!("{}:{:02}", t.hour(), t.minute())
}

fn h12(t: TimeOfDay) -> String {
    t.format(TimeStyle::H12)
}

/// "A", "A and B", "A, B and C", with `joiner` in place of "and".
fn join_list(items: &[String], joiner: &str) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} {joiner} {last}", init.join(", ")),
    }
}

fn duration_phrase(minutes: u32) -> String {
    const WORDS: [&str; 9] = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight"];
    let (h, m) = (minutes / 60, minutes % 60);
    match (h, m) {
        (0, 30) => "half an hour".into(),
        (1, 0) => "one hour".into(),
        (h, 0) if (h as usize) < WORDS.len() => format!("{} hours", WORDS[h as usize]),
        (h, 30) if (h as usize) < WORDS.len() => format!("{} and a half hours", WORDS[h as usize]),
        (0, m) => format!("{m} minutes"),
        (1, m) => format!("1 hour and {m} minutes"),
        (h, m) => format!("{h} hours and {m} minutes"),
    }
}

pub fn render_calendar(p: &CalendarProblem) -> String {
    let window = p.work_window();
    let days: Vec<String> = p.allowed_days().iter().map(|d| d.to_string()).collect();
    let days = if days.len() == 1 {
        days[0].clone()
    } else {
        format!("either {}", join_list(&days, "or"))
    };
    let mut out = String::from(
        "You are an expert at scheduling meetings. You are given a few constraints on the existing \
         schedule of each participant, the meeting duration, and possibly some preferences on the \
         meeting time. Note there exists a solution that works with existing schedule of every \
         participant. TASK: ",
    );
    let _ = write!(
        out,
        "You need to schedule a meeting for {} for {} between the work hours of {} to {} on {}. ",
        join_list(p.participants(), "and"),
        duration_phrase(p.duration_minutes()),
        h24(window.start()),
        h24(window.end()),
        days,
    );
    out.push_str("Here are the existing schedules for everyone during the days: ");
    for (i, (who, blocks)) in p.busy().iter().enumerate() {
        if blocks.is_empty() {
            let _ = write!(out, "{who} has no meetings the whole week; ");
            continue;
        }
        let verb = if i % 2 == 0 { "has blocked their calendar" } else { "is busy" };
        let mut items = Vec::new();
        let mut current = None;
        for b in blocks {
            let range = format!("{} to {}", h24(b.interval.start()), h24(b.interval.end()));
            if current != Some(b.day) {
                current = Some(b.day);
                items.push(format!("{} during {range}", b.day));
            } else {
                items.push(range);
            }
        }
        let _ = write!(out, "{who} {verb} on {}; ", items.join(", "));
    }
    for pref in p.preferences() {
        let who = match &pref.participant {
            Some(name) => format!("{name} would like to avoid more meetings"),
            None => "Prefer not to meet".into(),
        };
        let _ = write!(out, "{who} on {}{}. ", pref.day, range_phrase(pref.interval, window));
    }
    out.push_str(
        "Find a time that works for everyone's schedule and constraints. Please provide your \
         solution in a JSON format as {\"start\":{\"day\":\"Monday\",\"time\":\"13:30\"},\
         \"end\":{\"day\":\"Monday\",\"time\":\"14:30\"}}.",
    );
    out
}

fn range_phrase(iv: Interval, window: Interval) -> String {
    match (iv.start() == window.start(), iv.end() == window.end()) {
        (true, true) => String::new(),
        (true, false) => format!(" before {}", h24(iv.end())),
        (false, true) => format!(" after {}", h24(iv.start())),
        (false, false) => format!(" between {} and {}", h24(iv.start()), h24(iv.end())),
    }
}

pub fn render_trip(p: &TripProblem) -> String {
    let total = p.total_days();
    let mut out = format!(
        "You plan to visit {} European cities for {total} days in total. You only take direct \
         flights to commute between cities. ",
        p.city_durations().len()
    );
    for (i, (city, days)) in p.city_durations().iter().enumerate() {
        let unit = if *days == 1 { "day" } else { "days" };
        let _ = match i % 3 {
            0 => write!(out, "You want to spend {days} {unit} in {city}. "),
            1 => write!(out, "You would like to visit {city} for {days} {unit}. "),
            _ => write!(out, "You plan to stay in {city} for {days} {unit}. "),
        };
    }
    for (j, e) in p.events().iter().enumerate() {
        let when = if e.day_lo == e.day_hi {
            format!("on day {}", e.day_lo)
        } else {
            format!("between day {} and day {}", e.day_lo, e.day_hi)
        };
        let city = &e.city;
        let _ = match j % 3 {
            0 => write!(out, "You have to attend a workshop in {city} {when}. "),
            1 => write!(out, "You want to meet your friends in {city} {when}. "),
            _ => write!(out, "There is a wedding in {city} {when}. "),
        };
    }
    if !p.flights().is_empty() {
        let pairs: Vec<String> = p.flights().iter().map(|f| format!("{} and {}", f.0, f.1)).collect();
        let _ = write!(out, "Here are the cities that have direct flights: {}. ", pairs.join(", "));
    }
    let _ = write!(
        out,
        "Find a trip plan of visiting the cities for {total} days by taking direct flights to \
         commute between them. Please provide your solution in a JSON format as \
         {{\"itinerary\": [{{\"day_range\": \"Day 1-2\", \"place\": \"Reykjavik\"}}, ...]}}."
    );
    out
}

pub fn render_meeting(p: &MeetingProblem) -> String {
    let mut out = String::from(
        "You are visiting San Francisco for the day and want to meet as many friends as possible. \
         Solve the problem by considering various different schedules and picking the best one to \
         optimize your goals. ",
    );
    if !p.travel_minutes().is_empty() {
        out.push_str("Travel distances (in minutes): ");
        for ((a, b), m) in p.travel_minutes() {
            let _ = write!(out, "{a} to {b}: {m}. ");
        }
    }
    let _ = write!(out, "CONSTRAINTS: You arrive at {} at {}. ", p.start_location(), h12(p.start_time()));
    for (i, f) in p.friends().iter().enumerate() {
        let _ = write!(
            out,
            "{} will be at {} from {} to {}. ",
            f.name,
            f.location,
            h12(f.window.start()),
            h12(f.window.end())
        );
        let _ = if i % 2 == 0 {
            write!(out, "You'd like to meet {} for a minimum of {} minutes. ", f.name, f.min_duration_minutes)
        } else {
            write!(out, "You would like to meet {} for a minimum of {} minutes. ", f.name, f.min_duration_minutes)
        };
    }
    out.push_str(
        "Please provide your solution in a JSON format as {\"itinerary\": [{\"action\": \"meet\", \
         \"location\": \"Golden Gate Park\", \"person\": \"David\", \"start_time\": \"13:00\", \
         \"end_time\": \"14:00\"}, ...]}.",
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Task;
    use crate::generator::{generate, GenParams};
    use crate::parser::parse_problem;

    #[test]
    fn durations() {
        assert_eq!(duration_phrase(30), "half an hour");
        assert_eq!(duration_phrase(90), "one and a half hours");
        assert_eq!(duration_phrase(45), "45 minutes");
        assert_eq!(duration_phrase(75), "1 hour and 15 minutes");
    }

    #[test]
    fn round_trip_across_seeds() {
        for seed in 0..200 {
            for task in Task::ALL {
                let params = GenParams {
                    days: 1 + (seed as usize % 5),
                    preferences: seed as usize % 4,
                    events: seed as usize % 3,
                    friends: seed as usize % 9,
                    locations: 1 + seed as usize % 6,
                    ..GenParams::with_seed(seed)
                };
                let (problem, _) = generate(task, &params).unwrap();
                let text = render(&problem);
                let parsed = parse_problem(task, &text)
                    .unwrap_or_else(|e| panic!("{task} seed {seed}: {e}\n{text}"));
                assert_eq!(parsed.problem, problem, "{task} seed {seed}\n{text}");
                assert!(parsed.diagnostics.warnings.is_empty(), "{:?}", parsed.diagnostics);
            }
        }
    }
}
