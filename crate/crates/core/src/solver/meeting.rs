use std::collections::HashMap;

use super::{Budget, Search, SolveOptions, SolveOutcome, SolveStatus};
use crate::domain::{Meeting, MeetingPlan, MeetingProblem, Plan};
use crate::time::Interval;

/// Exact maximum number of friends that can be met.
///
/// Runs without a budget; the dominance table keeps the search to at most
/// one live state per (friend subset, last friend, arrival time) frontier.
pub fn max_meetable(p: &MeetingProblem) -> usize {
    let mut search = Search::new(Budget::UNLIMITED);
    MeetingSearch::new(p).run(&mut search).len()
}

/// Returns a schedule meeting exactly [`max_meetable`] friends, each for
/// their minimum duration, starting as early as travel and their window
/// allow. Ties between orderings go to the first in friend-name order.
pub fn solve_meeting(p: &MeetingProblem, opts: &SolveOptions) -> SolveOutcome {
    let mut search = Search::new(opts.budget);
    let best = MeetingSearch::new(p).run(&mut search);
    search.finish(SolveStatus::Satisfiable(Plan::Meeting(MeetingPlan::new(best))))
}

struct Candidate {
    name: String,
    location: String,
    window_start: u32,
    window_end: u32,
    min: u32,
}

struct MeetingSearch {
    friends: Vec<Candidate>,
    /// travel[from][to], where index `friends.len()` is the start location.
    travel: Vec<Vec<u32>>,
    start_time: u32,
}

struct State {
    best: Vec<usize>,
    best_times: Vec<(u32, u32)>,
    path: Vec<usize>,
    times: Vec<(u32, u32)>,
    /// Earliest free time seen for (met set, last position).
    seen: HashMap<(u64, usize), u32>,
}

impl MeetingSearch {
    fn new(p: &MeetingProblem) -> Self {
        let mut friends: Vec<Candidate> = p
            .friends()
            .iter()
            .map(|f| Candidate {
                name: f.name.clone(),
                location: f.location.clone(),
                window_start: f.window.start().minutes(),
                window_end: f.window.end().minutes(),
                min: f.min_duration_minutes,
            })
            .collect();
        friends.sort_by(|a, b| a.name.cmp(&b.name));
        assert!(friends.len() < 64, "meeting search supports at most 63 friends");
        let mut locs: Vec<&str> = friends.iter().map(|f| f.location.as_str()).collect();
        locs.push(p.start_location());
        let travel = locs
            .iter()
            .map(|from| {
                locs.iter()
                    .map(|to| p.travel(from, to).expect("travel matrix is complete"))
                    .collect()
            })
            .collect();
        MeetingSearch { friends, travel, start_time: p.start_time().minutes() }
    }

    /// Earliest `(start, end)` for meeting friend `f` when free at `time`
    /// at position `from`.
    fn schedule(&self, from: usize, time: u32, f: usize) -> Option<(u32, u32)> {
        let c = &self.friends[f];
        let start = (time + self.travel[from][f]).max(c.window_start);
        let end = start + c.min;
        (end <= c.window_end).then_some((start, end))
    }

    fn run(&self, search: &mut Search) -> Vec<Meeting> {
        let mut st = State {
            best: Vec::new(),
            best_times: Vec::new(),
            path: Vec::new(),
            times: Vec::new(),
            seen: HashMap::new(),
        };
        let origin = self.friends.len();
        self.dfs(origin, self.start_time, 0, &mut st, search);
        st.best
            .iter()
            .zip(&st.best_times)
            .map(|(&f, &(s, e))| Meeting {
                person: self.friends[f].name.clone(),
                location: self.friends[f].location.clone(),
                slot: Interval::from_minutes(s, e).expect("window bounds the meeting"),
            })
            .collect()
    }

    fn dfs(&self, at: usize, time: u32, met: u64, st: &mut State, search: &mut Search) {
        if !search.tick() {
            return;
        }
        if st.path.len() > st.best.len() {
            st.best = st.path.clone();
            st.best_times = st.times.clone();
        }
        match st.seen.get(&(met, at)) {
            Some(&t) if t <= time => return,
            _ => {
                st.seen.insert((met, at), time);
            }
        }
        let options: Vec<(usize, (u32, u32))> = (0..self.friends.len())
            .filter(|f| met & (1 << f) == 0)
            .filter_map(|f| self.schedule(at, time, f).map(|slot| (f, slot)))
            .collect();
        // Each reachable friend adds at most one meeting.
        if st.path.len() + options.len() <= st.best.len() {
            return;
        }
        for (f, slot) in options {
            st.path.push(f);
            st.times.push(slot);
            self.dfs(f, slot.1, met | (1 << f), st, search);
            st.path.pop();
            st.times.pop();
            if search.exhausted() {
                return;
            }
        }
    }
}
