//! Naive exhaustive oracles and shared fixtures. The oracles deliberately
//! avoid the crate's solvers and verifier.

#![allow(dead_code)]

use std::path::PathBuf;

use itertools::Itertools;
use natplan::domain::{CalendarProblem, MeetingProblem, Problem, Task, TripProblem};
use natplan::parser::parse_problem;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn appendix(task: Task) -> Problem {
    let text = read_fixture(&format!("appendix_{task}.txt"));
    parse_problem(task, &text).expect("appendix text parses").problem
}

/// Calendar: any grid-aligned slot free for everyone and outside every
/// preference range.
pub fn calendar_satisfiable(p: &CalendarProblem, step: u32) -> bool {
    let (ws, we) = (p.work_window().start().minutes(), p.work_window().end().minutes());
    let d = p.duration_minutes();
    for &day in p.allowed_days() {
        let mut s = ws;
        while s + d <= we {
            let e = s + d;
            let clash = |a: u32, b: u32| s < b && a < e;
            let busy = p.busy().values().flatten().any(|b| {
                b.day == day && clash(b.interval.start().minutes(), b.interval.end().minutes())
            });
            let disliked = p.preferences().iter().any(|pr| {
                pr.day == day && clash(pr.interval.start().minutes(), pr.interval.end().minutes())
            });
            if !busy && !disliked {
                return true;
            }
            s += step;
        }
    }
    false
}

/// Trip: try every city ordering.
pub fn trip_orderings(p: &TripProblem) -> Vec<Vec<(u32, u32, String)>> {
    let cities: Vec<(&String, &u32)> = p.city_durations().iter().collect();
    let mut valid = Vec::new();
    for order in cities.iter().permutations(cities.len()) {
        let mut day = 1;
        let mut segs = Vec::new();
        for (city, stay) in &order {
            segs.push((day, day + **stay - 1, (*city).clone()));
            day += **stay - 1;
        }
        let flights_ok = order.windows(2).all(|w| {
            p.flights().iter().any(|f| {
                (&f.0 == w[0].0 && &f.1 == w[1].0) || (&f.1 == w[0].0 && &f.0 == w[1].0)
            })
        });
        let events_ok = p.events().iter().all(|e| {
            segs.iter()
                .any(|(lo, hi, c)| c == &e.city && *lo <= e.day_lo && e.day_hi <= *hi)
        });
        if flights_ok && events_ok && day == p.total_days() {
            valid.push(segs);
        }
    }
    valid
}

pub fn trip_satisfiable(p: &TripProblem) -> bool {
    !trip_orderings(p).is_empty()
}

/// Meeting: longest feasible sequence over every ordering of every subset,
/// meeting each friend as early as possible for exactly the minimum.
pub fn meeting_max(p: &MeetingProblem) -> usize {
    fn go(p: &MeetingProblem, at: &str, now: u32, used: &mut Vec<bool>) -> usize {
        let mut best = 0;
        for (i, f) in p.friends().iter().enumerate() {
            if used[i] {
                continue;
            }
            let leg = if at == f.location { 0 } else { p.travel(at, &f.location).expect("complete matrix") };
            let start = (now + leg).max(f.window.start().minutes());
            let end = start + f.min_duration_minutes;
            if end > f.window.end().minutes() {
                continue;
            }
            used[i] = true;
            best = best.max(1 + go(p, &f.location, end, used));
            used[i] = false;
            if best == p.friends().len() {
                break;
            }
        }
        best
    }
    let mut used = vec![false; p.friends().len()];
    go(p, p.start_location(), p.start_time().minutes(), &mut used)
}

pub fn oracle_satisfiable(problem: &Problem, step: u32) -> bool {
    match problem {
        Problem::Calendar(p) => calendar_satisfiable(p, step),
        Problem::Trip(p) => trip_satisfiable(p),
        // A meeting problem always admits the empty plan.
        Problem::Meeting(_) => true,
    }
}

use indexmap::IndexMap;
use natplan::domain::{DayInterval, Friend, Plan, TripEvent};
use natplan::generator::{generate, GenParams};
use natplan::time::Interval;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn iv(a: u32, b: u32) -> Interval {
    Interval::from_minutes(a, b).unwrap()
}

/// Generator knobs varied by seed across the small-instance ranges.
pub fn varied_params(seed: u64) -> GenParams {
    let s = seed as usize;
    GenParams {
        participants: 1 + s % 4,
        blocks: s % 6,
        days: 1 + (s / 3) % 3,
        preferences: s % 3,
        cities: 1 + s % 6,
        edge_density: (s % 5) as f64 / 4.0,
        events: s % 3 % (1 + s % 6),
        friends: s % 8,
        locations: 1 + s % 6,
        ..GenParams::with_seed(seed)
    }
}

/// Generated instances, half of them perturbed so that some become
/// unsatisfiable (calendar, trip) or lose meetable friends (meeting).
pub fn oracle_instances(task: Task, n: usize) -> Vec<Problem> {
    (0u64..).filter_map(|seed| oracle_instance(task, seed)).take(n).collect()
}

/// `None` when the seed's knob combination is infeasible for the generator.
pub fn oracle_instance(task: Task, seed: u64) -> Option<Problem> {
    let (problem, _) = generate(task, &varied_params(seed)).ok()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    Some(if seed.is_multiple_of(2) { problem } else { perturb(problem, &mut rng) })
}

fn perturb(problem: Problem, rng: &mut ChaCha8Rng) -> Problem {
    match problem {
        Problem::Calendar(p) => {
            let mut busy = p.busy().clone();
            for _ in 0..rng.gen_range(1..=6) {
                let who = p.participants().choose(rng).unwrap().clone();
                let day = *p.allowed_days().choose(rng).unwrap();
                let a = 9 * 60 + 30 * rng.gen_range(0..14u32);
                let b = (a + 30 * rng.gen_range(1..=8u32)).min(17 * 60);
                busy.get_mut(&who).unwrap().push(DayInterval::new(day, iv(a, b)));
            }
            CalendarProblem::new(
                p.participants().to_vec(),
                p.allowed_days().to_vec(),
                p.work_window(),
                p.duration_minutes(),
                busy,
                p.preferences().to_vec(),
            )
            .unwrap()
            .into()
        }
        Problem::Trip(p) => {
            let flights = p.flights().iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
            let mut events = p.events().to_vec();
            if rng.gen_bool(0.5) {
                let city = p.cities().collect::<Vec<_>>().choose(rng).unwrap().to_string();
                let lo = rng.gen_range(1..=p.total_days());
                let hi = rng.gen_range(lo..=p.total_days());
                events.push(TripEvent { city, day_lo: lo, day_hi: hi });
            }
            TripProblem::new(p.total_days(), p.city_durations().clone(), flights, events).unwrap().into()
        }
        Problem::Meeting(p) => {
            let friends = p
                .friends()
                .iter()
                .map(|f| {
                    if rng.gen_bool(0.5) {
                        let a = 8 * 60 + 15 * rng.gen_range(0..40u32);
                        let b = a + 15 * rng.gen_range(1..=16u32);
                        Friend { window: iv(a, b), ..f.clone() }
                    } else {
                        f.clone()
                    }
                })
                .collect();
            let travel: IndexMap<(String, String), u32> =
                p.travel_minutes().iter().map(|(k, v)| (k.clone(), v + rng.gen_range(0..20))).collect();
            MeetingProblem::with_locations(
                p.start_location().to_string(),
                p.start_time(),
                p.locations().to_vec(),
                travel,
                friends,
            )
            .unwrap()
            .into()
        }
    }
}

/// Single-constraint mutations of generated instances. Each entry holds the
/// mutated problem, the original witness, and the id of the constraint the
/// witness now violates.
pub fn mutations(per_task: u64) -> Vec<(Problem, Plan, String)> {
    let mut out = Vec::new();
    for seed in 0..per_task {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfeed);
        for task in Task::ALL {
            let params = GenParams { friends: 1 + seed as usize % 6, ..varied_params(seed) };
            let Ok((problem, witness)) = generate(task, &params) else { continue };
            if let Some((p, id)) = mutate(&problem, &witness, seed, &mut rng) {
                out.push((p, witness, id));
            }
        }
    }
    out
}

fn mutate(problem: &Problem, witness: &Plan, seed: u64, rng: &mut ChaCha8Rng) -> Option<(Problem, String)> {
    match (problem, witness) {
        (Problem::Calendar(p), Plan::Calendar(w)) => {
            let who = p.participants().choose(rng).unwrap().clone();
            match seed % 3 {
                0 => {
                    let a = w.slot.start().minutes().saturating_sub(30).max(9 * 60);
                    let block = iv(a, w.slot.start().minutes() + 30);
                    let mut busy = p.busy().clone();
                    busy.get_mut(&who).unwrap().push(DayInterval::new(w.day, block));
                    let id = format!("busy/{who}/{}/{}-{}", w.day, block.start(), block.end());
                    let q = CalendarProblem::new(
                        p.participants().to_vec(),
                        p.allowed_days().to_vec(),
                        p.work_window(),
                        p.duration_minutes(),
                        busy,
                        p.preferences().to_vec(),
                    )
                    .unwrap();
                    Some((q.into(), id))
                }
                1 => {
                    let mut prefs = p.preferences().to_vec();
                    let pref = natplan::domain::Preference {
                        participant: Some(who.clone()),
                        day: w.day,
                        interval: w.slot,
                    };
                    let id = format!("preference/{who}/{}/{}-{}", w.day, w.slot.start(), w.slot.end());
                    prefs.push(pref);
                    let q = CalendarProblem::new(
                        p.participants().to_vec(),
                        p.allowed_days().to_vec(),
                        p.work_window(),
                        p.duration_minutes(),
                        p.busy().clone(),
                        prefs,
                    )
                    .unwrap();
                    Some((q.into(), id))
                }
                _ => {
                    let q = CalendarProblem::new(
                        p.participants().to_vec(),
                        p.allowed_days().to_vec(),
                        p.work_window(),
                        p.duration_minutes() + 30,
                        p.busy().clone(),
                        p.preferences().to_vec(),
                    )
                    .unwrap();
                    Some((q.into(), "duration".to_string()))
                }
            }
        }
        (Problem::Trip(p), Plan::Trip(w)) => {
            let segs = w.segments();
            if segs.len() >= 2 && seed.is_multiple_of(2) {
                let i = rng.gen_range(0..segs.len() - 1);
                let (a, b) = (&segs[i].city, &segs[i + 1].city);
                let flights = p.flights().iter().filter(|f| !f.connects(a, b)).cloned().collect();
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                let q = TripProblem::new(p.total_days(), p.city_durations().clone(), flights, p.events().to_vec())
                    .unwrap();
                Some((q.into(), format!("flight/{x}-{y}")))
            } else {
                // An event for a city on a day the witness spends elsewhere.
                let seg = segs.choose(rng).unwrap();
                let outside: Vec<u32> =
                    (1..=p.total_days()).filter(|d| *d < seg.day_lo || *d > seg.day_hi).collect();
                let day = *outside.choose(rng)?;
                let mut events = p.events().to_vec();
                events.push(TripEvent { city: seg.city.clone(), day_lo: day, day_hi: day });
                let q = TripProblem::new(p.total_days(), p.city_durations().clone(), p.flights().to_vec(), events)
                    .unwrap();
                Some((q.into(), format!("event/{}/{day}-{day}", seg.city)))
            }
        }
        (Problem::Meeting(p), Plan::Meeting(w)) => {
            let m = w.meetings().choose(rng)?;
            if seed % 4 == 3 {
                // Arrive after the first planted meeting has begun.
                let first = w.meetings()[0].slot.start().minutes();
                let q = MeetingProblem::with_locations(
                    p.start_location().to_string(),
                    natplan::time::TimeOfDay::from_minutes(first + 1).unwrap(),
                    p.locations().to_vec(),
                    p.travel_minutes().clone(),
                    p.friends().to_vec(),
                )
                .unwrap();
                return Some((q.into(), "start".to_string()));
            }
            let mut friends = p.friends().to_vec();
            let f = friends.iter_mut().find(|f| f.name == m.person).unwrap();
            let id = match seed % 3 {
                0 => {
                    f.min_duration_minutes = m.slot.duration_minutes() + 15;
                    format!("min_duration/{}", f.name)
                }
                1 => {
                    // Window ends before the planted meeting does.
                    let end = m.slot.end().minutes() - 5;
                    let start = f.window.start().minutes().min(end - 1);
                    f.window = iv(start, end);
                    format!("window/{}", f.name)
                }
                _ => {
                    let idx = w.meetings().iter().position(|x| x.person == m.person).unwrap();
                    let from = if idx == 0 { p.start_location().to_string() } else { w.meetings()[idx - 1].location.clone() };
                    if from == m.location {
                        f.min_duration_minutes = m.slot.duration_minutes() + 15;
                        format!("min_duration/{}", f.name)
                    } else {
                        let mut travel = p.travel_minutes().clone();
                        *travel.get_mut(&(from.clone(), m.location.clone())).unwrap() += 600;
                        let q = MeetingProblem::with_locations(
                            p.start_location().to_string(),
                            p.start_time(),
                            p.locations().to_vec(),
                            travel,
                            friends,
                        )
                        .unwrap();
                        return Some((q.into(), format!("travel/{from}->{}", m.location)));
                    }
                }
            };
            let q = MeetingProblem::with_locations(
                p.start_location().to_string(),
                p.start_time(),
                p.locations().to_vec(),
                p.travel_minutes().clone(),
                friends,
            )
            .unwrap();
            Some((q.into(), id))
        }
        _ => None,
    }
}
