//! Exact solvers for the three planning tasks.
//!
//! Every solver is deterministic: branches are explored in a fixed order
//! (weekday then time for calendars, city and friend names otherwise) and
//! the first optimal answer found is returned. Search is bounded by a
//! [`Budget`]; running out yields [`SolveStatus::Timeout`].

mod calendar;
mod meeting;
mod trip;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::PreferenceMode;
use crate::domain::{Plan, Problem};

pub use calendar::solve_calendar;
pub use meeting::{max_meetable, solve_meeting};
pub use trip::solve_trip;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("step of {0} minutes does not divide 60")]
    InvalidStep(u32),
}

/// Candidate-start spacing for calendar search. Always divides 60.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepMinutes(u32);

impl StepMinutes {
    pub fn new(minutes: u32) -> Result<Self, SolveError> {
        if minutes > 0 && 60 % minutes == 0 {
            Ok(StepMinutes(minutes))
        } else {
            Err(SolveError::InvalidStep(minutes))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for StepMinutes {
    fn default() -> Self {
        StepMinutes(30)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_wall: Duration,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { max_nodes: u64::MAX, max_wall: Duration::MAX };
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000, max_wall: Duration::from_secs(30) }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub step: StepMinutes,
    pub budget: Budget,
    pub preferences: PreferenceMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "plan", rename_all = "snake_case")]
pub enum SolveStatus {
    Satisfiable(Plan),
    Unsatisfiable,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    #[serde(flatten)]
    pub status: SolveStatus,
    pub explored_nodes: u64,
    pub wall_ms: u64,
}

impl SolveOutcome {
    pub fn plan(&self) -> Option<&Plan> {
        match &self.status {
            SolveStatus::Satisfiable(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_satisfiable(&self) -> bool {
        matches!(self.status, SolveStatus::Satisfiable(_))
    }
}

pub fn solve(problem: &Problem, opts: &SolveOptions) -> SolveOutcome {
    match problem {
        Problem::Calendar(p) => solve_calendar(p, opts),
        Problem::Trip(p) => solve_trip(p, opts),
        Problem::Meeting(p) => solve_meeting(p, opts),
    }
}

/// Node and wall-clock accounting for one search.
pub(crate) struct Search {
    budget: Budget,
    started: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Search {
    pub(crate) fn new(budget: Budget) -> Self {
        Search { budget, started: Instant::now(), nodes: 0, exhausted: false }
    }

    /// Counts a node; returns false once the budget is spent.
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes.is_multiple_of(1024) && self.started.elapsed() > self.budget.max_wall)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub(crate) fn finish(self, status: SolveStatus) -> SolveOutcome {
        let status = if self.exhausted { SolveStatus::Timeout } else { status };
        SolveOutcome {
            status,
            explored_nodes: self.nodes,
            wall_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_must_divide_sixty() {
        assert!(StepMinutes::new(30).is_ok());
        assert!(StepMinutes::new(1).is_ok());
        assert_eq!(StepMinutes::new(25), Err(SolveError::InvalidStep(25)));
        assert_eq!(StepMinutes::new(0), Err(SolveError::InvalidStep(0)));
    }

    #[test]
    fn outcome_json_shape() {
        let o = SolveOutcome { status: SolveStatus::Unsatisfiable, explored_nodes: 3, wall_ms: 0 };
        let v = serde_json::to_value(&o).unwrap();
        assert_eq!(v["status"], "unsatisfiable");
        assert_eq!(v["explored_nodes"], 3);
    }
}
