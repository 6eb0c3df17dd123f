//! Typed models, parsers, solvers and an evaluation harness for natural
//! language planning problems: calendar scheduling, trip planning and
//! meeting planning.
//!
//! A problem is parsed from its templated English statement (or loaded as
//! canonical JSON), compiled into atomic constraints, and either solved
//! exactly or used to verify a candidate plan extracted from model output.

pub mod constraints;
pub mod domain;
pub mod exec;
pub mod generator;
pub mod harness;
pub mod parser;
pub mod solver;
pub mod time;

pub use constraints::{compile, verify, AtomicConstraint, ConstraintSet};
pub use domain::{Plan, Problem, Task};
pub use parser::{extract_plan, parse_problem};
pub use solver::{solve, SolveOptions, SolveOutcome, SolveStatus};
