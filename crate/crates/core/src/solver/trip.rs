use super::{Search, SolveOptions, SolveOutcome, SolveStatus};
use crate::domain::{Plan, Segment, TripPlan, TripProblem};

/// Depth-first search over city orderings, branching on city names in
/// lexicographic order. Each ordering forces its day ranges: a city entered
/// on day `d` with a stay of `n` days occupies `d..=d+n-1`, and the last day
/// doubles as the travel day into the next city. Every city is visited
/// exactly once.
pub fn solve_trip(p: &TripProblem, opts: &SolveOptions) -> SolveOutcome {
    let mut cities: Vec<(&str, u32)> = p.city_durations().iter().map(|(c, d)| (c.as_str(), *d)).collect();
    cities.sort();
    let mut search = Search::new(opts.budget);
    let mut path: Vec<Segment> = Vec::with_capacity(cities.len());
    let mut used = vec![false; cities.len()];
    let found = dfs(p, &cities, &mut used, &mut path, 1, &mut search);
    let status = if found {
        SolveStatus::Satisfiable(Plan::Trip(TripPlan::new(path).expect("search builds nonempty plans")))
    } else {
        SolveStatus::Unsatisfiable
    };
    search.finish(status)
}

fn dfs(
    p: &TripProblem,
    cities: &[(&str, u32)],
    used: &mut [bool],
    path: &mut Vec<Segment>,
    day: u32,
    search: &mut Search,
) -> bool {
    if path.len() == cities.len() {
        return true;
    }
    for (i, &(city, stay)) in cities.iter().enumerate() {
        if used[i] {
            continue;
        }
        if !search.tick() {
            return false;
        }
        if let Some(prev) = path.last() {
            if !p.has_flight(&prev.city, city) {
                continue;
            }
        }
        let (lo, hi) = (day, day + stay - 1);
        let events_fit = p
            .events()
            .iter()
            .filter(|e| e.city == city)
            .all(|e| lo <= e.day_lo && e.day_hi <= hi);
        if !events_fit {
            continue;
        }
        used[i] = true;
        path.push(Segment { day_lo: lo, day_hi: hi, city: city.to_string() });
        if dfs(p, cities, used, path, hi, search) {
            return true;
        }
        path.pop();
        used[i] = false;
    }
    false
}
