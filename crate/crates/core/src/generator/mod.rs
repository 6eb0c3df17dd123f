//! Seeded synthetic instances with planted witness plans.
//!
//! Each generator samples the witness first and then draws constraints that
//! the witness satisfies, so every instance is satisfiable by construction.
//! Knob ranges are kept small enough for the exhaustive test oracles.

mod template;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{
    CalendarPlan, CalendarProblem, DayInterval, FlightPair, Friend, Meeting, MeetingPlan,
    MeetingProblem, Plan, Preference, Problem, Segment, Task, TripEvent, TripPlan, TripProblem,
    ValidationError, Weekday,
};
use crate::time::{Interval, TimeOfDay};

pub use template::{render, render_calendar, render_meeting, render_trip};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
    #[error("generated instance failed validation: {0}")]
    Validation(#[from] ValidationError),
}

pub const MAX_PARTICIPANTS: usize = 5;
pub const MAX_BLOCKS: usize = 8;
pub const MAX_CITIES: usize = 6;
pub const MAX_FRIENDS: usize = 8;
pub const MAX_LOCATIONS: usize = 9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub seed: u64,
    /// Calendar: number of participants (1..=5).
    pub participants: usize,
    /// Calendar: busy blocks per participant (0..=8).
    pub blocks: usize,
    /// Calendar: number of allowed weekdays, starting from Monday (1..=5).
    pub days: usize,
    /// Calendar: preference statements (0..=3).
    pub preferences: usize,
    /// Trip: number of cities (1..=6).
    pub cities: usize,
    /// Trip: total days. Sampled from per-city stays when absent.
    pub total_days: Option<u32>,
    /// Trip: probability that a non-itinerary city pair gets a flight.
    pub edge_density: f64,
    /// Trip: number of dated events (at most one per city).
    pub events: usize,
    /// Meeting: number of friends (0..=8).
    pub friends: usize,
    /// Meeting: number of distinct locations including the start (1..=9).
    pub locations: usize,
    /// Overrides the size knobs so that the instance has exactly this many
    /// atomic constraints.
    pub target_constraint_count: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            participants: 2,
            blocks: 3,
            days: 1,
            preferences: 0,
            cities: 3,
            total_days: None,
            edge_density: 0.3,
            events: 1,
            friends: 3,
            locations: 4,
            target_constraint_count: None,
        }
    }
}

impl GenParams {
    pub fn with_seed(seed: u64) -> Self {
        GenParams { seed, ..Self::default() }
    }

    fn rng(&self, task: Task) -> ChaCha8Rng {
        // Separate streams per task so changing one task's knobs never
        // shifts another task's draws for the same seed.
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(task as u64);
        rng
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), GenError> {
    if ok {
        Ok(())
    } else {
        Err(GenError::InvalidParams(msg()))
    }
}

const PEOPLE: &[&str] = &[
    "Anthony", "Rebecca", "Melissa", "James", "John", "Olivia", "Daniel", "Sophia", "Kevin",
    "Laura", "Nathan", "Grace", "Peter", "Helen", "Victor", "Diane",
];

const CITIES: &[&str] = &[
    "Madrid", "Dublin", "Tallinn", "Reykjavik", "Stockholm", "Vienna", "Prague", "Lisbon", "Oslo",
    "Berlin", "Krakow", "Porto", "Florence", "Riga",
];

const PLACES: &[&str] = &[
    "Sunset District", "Chinatown", "Russian Hill", "North Beach", "Golden Gate Park",
    "The Castro", "Marina District", "Union Square", "Fisherman's Wharf", "Nob Hill",
    "Haight-Ashbury", "Mission District",
];

fn pick(rng: &mut ChaCha8Rng, pool: &[&str], n: usize) -> Vec<String> {
    pool.choose_multiple(rng, n).map(|s| s.to_string()).collect()
}

fn hm(minutes: u32) -> TimeOfDay {
    TimeOfDay::from_minutes(minutes).expect("generator keeps times within the day")
}

fn iv(a: u32, b: u32) -> Interval {
    Interval::from_minutes(a, b).expect("generator builds nonempty intervals")
}

pub fn generate(task: Task, params: &GenParams) -> Result<(Problem, Plan), GenError> {
    Ok(match task {
        Task::Calendar => {
            let (p, w) = gen_calendar(params)?;
            (p.into(), w.into())
        }
        Task::Trip => {
            let (p, w) = gen_trip(params)?;
            (p.into(), w.into())
        }
        Task::Meeting => {
            let (p, w) = gen_meeting(params)?;
            (p.into(), w.into())
        }
    })
}

const WORK_START: u32 = 9 * 60;
const WORK_END: u32 = 17 * 60;

pub fn gen_calendar(params: &GenParams) -> Result<(CalendarProblem, CalendarPlan), GenError> {
    check((1..=MAX_PARTICIPANTS).contains(&params.participants), || {
        format!("participants must be in 1..={MAX_PARTICIPANTS}")
    })?;
    check((1..=5).contains(&params.days), || "days must be in 1..=5".into())?;
    check(params.preferences <= 3, || "at most 3 preferences".into())?;
    let total_blocks = match params.target_constraint_count {
        // Busy blocks, preferences and the duration constraint.
        Some(t) => t
            .checked_sub(1 + params.preferences)
            .ok_or_else(|| GenError::InfeasibleParams(format!("{t} constraints leave no room for the duration")))?,
        None => {
            check(params.blocks <= MAX_BLOCKS, || format!("blocks must be at most {MAX_BLOCKS}"))?;
            params.blocks * params.participants
        }
    };
    if total_blocks > params.participants * MAX_BLOCKS {
        return Err(GenError::InfeasibleParams(format!(
            "{total_blocks} busy blocks exceed {MAX_BLOCKS} per participant"
        )));
    }

    let mut rng = params.rng(Task::Calendar);
    let participants = pick(&mut rng, PEOPLE, params.participants);
    let days: Vec<Weekday> = Weekday::ALL[..params.days].to_vec();
    let duration = 30 * rng.gen_range(1..=4u32);
    let day = *days.choose(&mut rng).expect("at least one day");
    let slots = (WORK_END - WORK_START - duration) / 30;
    let start = WORK_START + 30 * rng.gen_range(0..=slots);
    let witness = CalendarPlan { day, slot: iv(start, start + duration) };

    let mut busy: IndexMap<String, Vec<DayInterval>> =
        participants.iter().map(|p| (p.clone(), Vec::new())).collect();
    for i in 0..total_blocks {
        let who = &participants[i % participants.len()];
        let taken = &busy[who];
        let mut placed = None;
        for _ in 0..200 {
            let d = *days.choose(&mut rng).expect("at least one day");
            let len = 30 * rng.gen_range(1..=4u32);
            let a = WORK_START + 30 * rng.gen_range(0..=(WORK_END - WORK_START - len) / 30);
            let block = DayInterval::new(d, iv(a, a + len));
            let clashes_witness = d == witness.day && block.interval.overlaps(&witness.slot);
            let clashes_own = taken.iter().any(|b| b.day == d && b.interval.overlaps(&block.interval));
            if !clashes_witness && !clashes_own {
                placed = Some(block);
                break;
            }
        }
        let block = placed.ok_or_else(|| {
            GenError::InfeasibleParams(format!("no room for another busy block for {who}"))
        })?;
        busy[who].push(block);
    }
    for blocks in busy.values_mut() {
        blocks.sort_by_key(|b| (b.day, b.interval));
    }

    let mut preferences = Vec::new();
    for _ in 0..params.preferences {
        let who = participants.choose(&mut rng).cloned();
        let other_days: Vec<Weekday> = days.iter().copied().filter(|d| *d != witness.day).collect();
        let pref = if !other_days.is_empty() && rng.gen_bool(0.5) {
            let d = *other_days.choose(&mut rng).expect("nonempty");
            Preference { participant: who, day: d, interval: iv(WORK_START, WORK_END) }
        } else {
            let (ws, we) = (witness.slot.start().minutes(), witness.slot.end().minutes());
            let mut options = Vec::new();
            if ws > WORK_START {
                options.push(iv(WORK_START, ws));
            }
            if we < WORK_END {
                options.push(iv(we, WORK_END));
            }
            let Some(interval) = options.choose(&mut rng).copied() else {
                continue;
            };
            Preference { participant: who, day: witness.day, interval }
        };
        if !preferences.contains(&pref) {
            preferences.push(pref);
        }
    }
    if params.target_constraint_count.is_some() && preferences.len() != params.preferences {
        return Err(GenError::InfeasibleParams("could not place every preference".into()));
    }

    let problem = CalendarProblem::new(
        participants,
        days,
        iv(WORK_START, WORK_END),
        duration,
        busy,
        preferences,
    )?;
    Ok((problem, witness))
}

pub fn gen_trip(params: &GenParams) -> Result<(TripProblem, TripPlan), GenError> {
    let n = params.cities;
    check((1..=MAX_CITIES).contains(&n), || format!("cities must be in 1..={MAX_CITIES}"))?;
    check((0.0..=1.0).contains(&params.edge_density), || "edge_density must be in [0, 1]".into())?;
    check(params.events <= n, || "at most one event per city".into())?;

    let mut rng = params.rng(Task::Trip);
    let order = pick(&mut rng, CITIES, n);
    let stays: Vec<u32> = match params.total_days {
        Some(total) => {
            // Every stay is at least one day; spread the remainder.
            let segment_days = total + n as u32 - 1;
            if total == 0 || segment_days < n as u32 {
                return Err(GenError::InfeasibleParams(format!("{total} days cannot hold {n} cities")));
            }
            let mut stays = vec![1u32; n];
            for _ in 0..segment_days - n as u32 {
                stays[rng.gen_range(0..n)] += 1;
            }
            stays
        }
        None => (0..n).map(|_| rng.gen_range(2..=5)).collect(),
    };
    let total: u32 = stays.iter().sum::<u32>() + 1 - n as u32;

    let mut segments = Vec::with_capacity(n);
    let mut day = 1;
    for (city, stay) in order.iter().zip(&stays) {
        segments.push(Segment { day_lo: day, day_hi: day + stay - 1, city: city.clone() });
        day += stay - 1;
    }

    let mut required: Vec<FlightPair> =
        order.windows(2).map(|w| FlightPair(w[0].clone(), w[1].clone())).collect();
    let mut optional = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if j != i + 1 {
                optional.push(FlightPair(order[i].clone(), order[j].clone()));
            }
        }
    }
    let noise: Vec<FlightPair> = match params.target_constraint_count {
        Some(t) => {
            // Total days, flights, stays and events.
            let extra = t
                .checked_sub(1 + n + params.events + required.len())
                .filter(|e| *e <= optional.len())
                .ok_or_else(|| {
                    GenError::InfeasibleParams(format!(
                        "{t} constraints impossible with {n} cities and {} events",
                        params.events
                    ))
                })?;
            optional.choose_multiple(&mut rng, extra).cloned().collect()
        }
        None => optional.into_iter().filter(|_| rng.gen_bool(params.edge_density)).collect(),
    };
    required.extend(noise);
    required.shuffle(&mut rng);
    for f in required.iter_mut() {
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut f.0, &mut f.1);
        }
    }

    let mut events = Vec::new();
    for seg in segments.choose_multiple(&mut rng, params.events) {
        let lo = rng.gen_range(seg.day_lo..=seg.day_hi);
        let hi = rng.gen_range(lo..=seg.day_hi);
        events.push(TripEvent { city: seg.city.clone(), day_lo: lo, day_hi: hi });
    }

    // Stays are listed in a shuffled order so the statement does not spell
    // out the itinerary.
    let mut listed: Vec<(String, u32)> = order.iter().cloned().zip(stays).collect();
    listed.shuffle(&mut rng);
    let problem = TripProblem::new(total, listed.into_iter().collect(), required, events)?;
    Ok((problem, TripPlan::new(segments)?))
}

const DAY_START: u32 = 9 * 60;
const DAY_END: u32 = 24 * 60 - 1;

pub fn gen_meeting(params: &GenParams) -> Result<(MeetingProblem, MeetingPlan), GenError> {
    let (friends, locations) = match params.target_constraint_count {
        Some(t) => meeting_shape(t, params.friends, params.locations)?,
        None => (params.friends, params.locations),
    };
    check(friends <= MAX_FRIENDS, || format!("friends must be at most {MAX_FRIENDS}"))?;
    check((1..=MAX_LOCATIONS).contains(&locations), || {
        format!("locations must be in 1..={MAX_LOCATIONS}")
    })?;

    let mut rng = params.rng(Task::Meeting);
    let places = pick(&mut rng, PLACES, locations);
    let names = pick(&mut rng, PEOPLE, friends);
    let mut travel = IndexMap::new();
    for a in &places {
        for b in &places {
            if a != b {
                travel.insert((a.clone(), b.clone()), rng.gen_range(3..=25u32));
            }
        }
    }

    // Bounds keep the whole chain inside one day: at most
    // 8 * (25 + 15 + 60) minutes after 9:00.
    let max_min = if friends <= 4 { 120 } else { 60 };
    let start_location = places[0].clone();
    let mut here = start_location.clone();
    let mut now = DAY_START;
    let mut planned = Vec::with_capacity(friends);
    let mut meetings = Vec::with_capacity(friends);
    for name in names {
        let location = places.choose(&mut rng).expect("at least one place").clone();
        let leg = if location == here { 0 } else { travel[&(here.clone(), location.clone())] };
        let start = now + leg + 5 * rng.gen_range(0..=3u32);
        let min = 15 * rng.gen_range(1..=max_min / 15);
        let end = start + min;
        let lo = start.saturating_sub(15 * rng.gen_range(0..=4u32)).max(7 * 60);
        let hi = (end + 15 * rng.gen_range(0..=4u32)).min(DAY_END);
        if end > DAY_END {
            return Err(GenError::InfeasibleParams("meeting chain runs past midnight".into()));
        }
        planned.push(Friend {
            name: name.clone(),
            location: location.clone(),
            window: iv(lo.min(start), hi),
            min_duration_minutes: min,
        });
        meetings.push(Meeting { person: name, location: location.clone(), slot: iv(start, end) });
        here = location;
        now = end;
    }
    // The statement lists friends in a different order from the witness chain.
    planned.shuffle(&mut rng);

    let problem = MeetingProblem::with_locations(start_location, hm(DAY_START), places, travel, planned)?;
    Ok((problem, MeetingPlan::new(meetings)))
}

/// Picks (friends, locations) with `1 + L(L-1) + 2F = target`, preferring the
/// shape closest to the requested knobs.
fn meeting_shape(target: usize, friends: usize, locations: usize) -> Result<(usize, usize), GenError> {
    let mut best: Option<(usize, (usize, usize))> = None;
    for l in 1..=MAX_LOCATIONS {
        for f in 0..=MAX_FRIENDS {
            if 1 + l * (l - 1) + 2 * f == target {
                let dist = f.abs_diff(friends) + l.abs_diff(locations);
                if best.is_none_or(|(d, _)| dist < d) {
                    best = Some((dist, (f, l)));
                }
            }
        }
    }
    best.map(|(_, shape)| shape).ok_or_else(|| {
        GenError::InfeasibleParams(format!("no meeting instance has exactly {target} constraints"))
    })
}
