use std::sync::LazyLock;

use indexmap::IndexMap;
use regex::Regex;

use super::{
    mentions, sentences, settle_leftovers, ParseDiagnostics, ParseError, Parsed, Sentence, NAME,
};
use crate::domain::{FlightPair, TripEvent, TripProblem};

static TOTAL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^You plan to visit (?P<n>\d+) (?:\w+ )?cities for (?P<d>\d+) days in total$").unwrap()
});

static STAY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^You (?:(?:want|would like|plan) to spend (?P<d1>\d+) days? in (?P<c1>{NAME})|(?:would like|want|plan) to (?:visit|stay in) (?P<c2>{NAME}) for (?P<d2>\d+) days?)(?P<tail>.*)$"
    ))
    .unwrap()
});

static FLIGHTS: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^Here are the cities that have direct flights:?\s*(?P<list>.+)$").unwrap()
});

static FLIGHT_ITEM: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(r"^(?P<from>from )?(?P<a>{NAME}) (?:and|to) (?P<b>{NAME})$")).unwrap()
});

static WINDOW: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)(?:(?:between|during|from) day (?P<lo>\d+) (?:and|to) day (?P<hi>\d+)|on day (?P<one>\d+))").unwrap()
});

pub fn parse_trip(text: &str) -> Result<Parsed<TripProblem>, ParseError> {
    let mut diagnostics = ParseDiagnostics::default();
    let mut total: Option<(u32, u32)> = None;
    let mut durations: IndexMap<String, u32> = IndexMap::new();
    let mut flights = Vec::new();
    // Unmatched sentences with the city of the last stay sentence before them.
    let mut pending: Vec<(Sentence, Option<String>)> = Vec::new();
    let mut last_city: Option<String> = None;

    for s in sentences(text) {
        if let Some(c) = TOTAL.captures(&s.text) {
            if total.is_some() {
                return Err(ParseError::Inconsistent("more than one trip length statement".into()));
            }
            total = Some((num(&c["n"])?, num(&c["d"])?));
        } else if let Some(c) = STAY.captures(&s.text) {
            let (city, days) = match c.name("c1") {
                Some(city) => (city.as_str().to_string(), num(&c["d1"])?),
                None => (c["c2"].to_string(), num(&c["d2"])?),
            };
            if durations.insert(city.clone(), days).is_some() {
                return Err(ParseError::Inconsistent(format!("stay in {city} stated twice")));
            }
            last_city = Some(city.clone());
            let tail = c["tail"].trim();
            if !tail.is_empty() {
                // "..., and you want to meet a friend there between day 2 and day 4"
                pending.push((Sentence { text: tail.to_string(), span: s.span }, Some(city)));
            }
        } else if let Some(c) = FLIGHTS.captures(&s.text) {
            for item in c["list"].split(',').map(str::trim).filter(|i| !i.is_empty()) {
                let f = FLIGHT_ITEM.captures(item).ok_or_else(|| {
                    ParseError::Inconsistent(format!("unreadable flight entry {item:?}"))
                })?;
                if f.name("from").is_some() {
                    diagnostics
                        .warnings
                        .push((s.span, format!("flight {item:?} treated as bidirectional")));
                }
                flights.push(FlightPair(f["a"].to_string(), f["b"].to_string()));
            }
        } else {
            pending.push((s, last_city.clone()));
        }
    }

    let (n_cities, total_days) = total.ok_or(ParseError::MissingStatement("trip length sentence"))?;
    if n_cities as usize != durations.len() {
        return Err(ParseError::Inconsistent(format!(
            "{n_cities} cities announced but {} stays given",
            durations.len()
        )));
    }

    let cities: Vec<&str> = durations.keys().map(String::as_str).collect();
    let mut events = Vec::new();
    let mut leftovers = Vec::new();
    for (s, context_city) in pending {
        let Some(w) = WINDOW.captures(&s.text) else {
            leftovers.push(s);
            continue;
        };
        let named: Vec<&str> = cities.iter().copied().filter(|c| mentions(&s.text, c)).collect();
        let city = match (named.as_slice(), context_city) {
            ([one], _) => one.to_string(),
            ([], Some(ctx)) => ctx,
            _ => {
                leftovers.push(s);
                continue;
            }
        };
        let (lo, hi) = match w.name("one") {
            Some(d) => (num(d.as_str())?, num(d.as_str())?),
            None => (num(&w["lo"])?, num(&w["hi"])?),
        };
        events.push(TripEvent { city, day_lo: lo, day_hi: hi });
    }
    settle_leftovers(leftovers, &cities, &mut diagnostics)?;

    let problem = TripProblem::new(total_days, durations, flights, events)?;
    Ok(Parsed { problem, diagnostics })
}

fn num(s: &str) -> Result<u32, ParseError> {
    s.parse().map_err(|_| ParseError::Inconsistent(format!("bad number {s:?}")))
}
