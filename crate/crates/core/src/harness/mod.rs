//! Evaluation of externally generated outputs.
//!
//! Records carry either a plan written in prose or a program that prints
//! one. Programs go through a [`Runner`]; whatever text comes back is
//! searched for a plan, which is verified against the problem. Each record
//! ends up in exactly one [`Category`].

mod hardcode;
mod report;
mod runner;

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::{complexity, verify_with, VerifyOptions, Violation};
use crate::domain::{Plan, Problem, Task};
use crate::exec::map_batch_with_workers;
use crate::parser::{extract_plan, parse_problem, ExtractError};

pub use hardcode::{detect_hardcoding, HardcodeVerdict, HARDCODE_THRESHOLD};
pub use report::{aggregate, aggregate_outcomes, BucketRow, GroupReport, Histogram, Report};
pub use runner::{
    CannedRunner, ProcessRunner, RunMode, RunStatus, Runner, RunnerError, RunnerRequest,
    RunnerResponse,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("record {id:?}: cannot resolve problem: {reason}")]
    ProblemResolutionFailed { id: String, reason: String },
    #[error("record {id:?}: {source}")]
    Runner { id: String, source: RunnerError },
    #[error("no complexity for record {0:?}")]
    MissingComplexity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// What the model was asked to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Plan,
    #[serde(alias = "python")]
    NativeCode,
    #[serde(alias = "z3")]
    SolverCode,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Plan => "plan",
            Method::NativeCode => "native_code",
            Method::SolverCode => "solver_code",
        }
    }

    fn run_mode(self) -> Option<RunMode> {
        match self {
            Method::Plan => None,
            Method::NativeCode => Some(RunMode::NativeCode),
            Method::SolverCode => Some(RunMode::SolverCode),
        }
    }
}

/// A path (relative to the problems directory) or the problem inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemRef {
    Path(PathBuf),
    Inline(serde_json::Value),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRecord {
    pub id: String,
    pub task: Task,
    pub method: Method,
    #[serde(alias = "model")]
    pub model_name: String,
    pub output_text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reasoning_token_count: Option<u64>,
    pub problem_ref: ProblemRef,
}

/// Reads a JSON-Lines file of records. Blank lines are skipped; any bad line
/// rejects the whole batch.
pub fn load_records(path: &Path) -> Result<Vec<EvalRecord>, HarnessError> {
    read_records(BufReader::new(fs::File::open(path)?))
}

pub fn read_records(reader: impl BufRead) -> Result<Vec<EvalRecord>, HarnessError> {
    let mut records = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: EvalRecord = serde_json::from_str(&line)
            .map_err(|e| HarnessError::MalformedRecord { line: i + 1, message: e.to_string() })?;
        if !ids.insert(record.id.clone()) {
            return Err(HarnessError::DuplicateId(record.id));
        }
        records.push(record);
    }
    Ok(records)
}

/// Resolves problem references against a directory. `.txt` files hold
/// template text; anything else is canonical problem JSON.
#[derive(Debug, Clone)]
pub struct ProblemSource {
    root: PathBuf,
}

impl ProblemSource {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ProblemSource { root: root.into() }
    }

    pub fn resolve(&self, record: &EvalRecord) -> Result<Problem, HarnessError> {
        let fail = |reason: String| HarnessError::ProblemResolutionFailed { id: record.id.clone(), reason };
        let problem = match &record.problem_ref {
            ProblemRef::Inline(value) => {
                Problem::from_value(record.task, value.clone()).map_err(|e| fail(e.to_string()))?
            }
            ProblemRef::Path(rel) => {
                let path = self.root.join(rel);
                let text = fs::read_to_string(&path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
                if path.extension().is_some_and(|e| e == "txt") {
                    parse_problem(record.task, &text).map_err(|e| fail(e.to_string()))?.problem
                } else {
                    Problem::from_json(record.task, &text).map_err(|e| fail(e.to_string()))?
                }
            }
        };
        Ok(problem)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Error,
    NoPlan,
    WrongPlan,
    Correct,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Error, Category::NoPlan, Category::WrongPlan, Category::Correct];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Error => "error",
            Category::NoPlan => "no_plan",
            Category::WrongPlan => "wrong_plan",
            Category::Correct => "correct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub category: Category,
    /// Violated constraints; empty unless the category is `WrongPlan`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
    /// Runner status, extraction failure or other explanation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardcode: Option<HardcodeVerdict>,
}

impl Outcome {
    fn bare(category: Category, diagnostic: impl Into<String>) -> Self {
        Outcome { category, violations: Vec::new(), diagnostic: Some(diagnostic.into()), hardcode: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub timeout_ms: u64,
    pub memory_mb: u64,
    pub workers: usize,
    pub verify: VerifyOptions,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            timeout_ms: 30_000,
            memory_mb: 2048,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            verify: VerifyOptions::default(),
        }
    }
}

/// Classifies free text that should contain a plan.
pub fn classify_text(text: &str, problem: &Problem) -> Outcome {
    classify_text_with(text, problem, VerifyOptions::default()).0
}

fn classify_text_with(text: &str, problem: &Problem, opts: VerifyOptions) -> (Outcome, Option<Plan>) {
    let plan = match extract_plan(text, problem.task()) {
        Ok(plan) => plan,
        Err(ExtractError::NoPlanFound { truncated: true }) => {
            return (Outcome::bare(Category::NoPlan, "output ends inside unclosed JSON"), None);
        }
        Err(e) => return (Outcome::bare(Category::NoPlan, e.to_string()), None),
    };
    let report = verify_with(problem, &plan, &opts).expect("extracted plan matches the problem's task");
    let outcome = if report.is_correct() {
        Outcome { category: Category::Correct, violations: Vec::new(), diagnostic: None, hardcode: None }
    } else {
        Outcome { category: Category::WrongPlan, violations: report.violations, diagnostic: None, hardcode: None }
    };
    (outcome, Some(plan))
}

/// Classifies a runner response. Only `ok` responses are searched for a plan.
pub fn classify_output(response: &RunnerResponse, problem: &Problem) -> Outcome {
    classify_response(response, problem, VerifyOptions::default()).0
}

fn classify_response(response: &RunnerResponse, problem: &Problem, opts: VerifyOptions) -> (Outcome, Option<Plan>) {
    match response.status {
        RunStatus::Ok => classify_text_with(&response.stdout, problem, opts),
        RunStatus::Timeout => (Outcome::bare(Category::Error, "timeout"), None),
        status => {
            let first = response.stderr.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or("");
            let detail = if first.is_empty() {
                status.as_str().to_string()
            } else {
                format!("{}: {}", status.as_str(), first.trim())
            };
            (Outcome::bare(Category::Error, detail), None)
        }
    }
}

/// Evaluates one record. Plan records never reach the runner.
pub fn evaluate_record(
    record: &EvalRecord,
    problem: &Problem,
    runner: &dyn Runner,
    config: &EvalConfig,
) -> Result<Outcome, HarnessError> {
    let Some(mode) = record.method.run_mode() else {
        return Ok(classify_text_with(&record.output_text, problem, config.verify).0);
    };
    let request = RunnerRequest {
        source: record.output_text.clone(),
        timeout_ms: config.timeout_ms,
        memory_mb: config.memory_mb,
        mode,
    };
    let response = runner
        .run(&request)
        .map_err(|source| HarnessError::Runner { id: record.id.clone(), source })?;
    let (mut outcome, plan) = classify_response(&response, problem, config.verify);
    if let Some(plan) = plan {
        outcome.hardcode = Some(detect_hardcoding(&record.output_text, &plan));
    }
    Ok(outcome)
}

/// One line of the outcome dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub id: String,
    pub model_name: String,
    pub task: Task,
    pub method: Method,
    pub complexity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reasoning_token_count: Option<u64>,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// Resolves every problem first, then evaluates records on up to
/// `config.workers` threads. Output order follows input order.
pub fn evaluate_batch(
    records: &[EvalRecord],
    source: &ProblemSource,
    runner: &dyn Runner,
    config: &EvalConfig,
) -> Result<Vec<OutcomeRecord>, HarnessError> {
    let jobs: Vec<(&EvalRecord, Problem)> = records
        .iter()
        .map(|r| source.resolve(r).map(|p| (r, p)))
        .collect::<Result<_, _>>()?;
    let results = map_batch_with_workers(&jobs, config.workers, |(record, problem)| {
        let outcome = evaluate_record(record, problem, runner, config)?;
        Ok(OutcomeRecord {
            id: record.id.clone(),
            model_name: record.model_name.clone(),
            task: record.task,
            method: record.method,
            complexity: complexity(problem),
            reasoning_token_count: record.reasoning_token_count,
            outcome,
        })
    });
    results.into_iter().collect()
}

pub fn write_outcomes(mut out: impl Write, outcomes: &[OutcomeRecord]) -> Result<(), HarnessError> {
    for o in outcomes {
        serde_json::to_writer(&mut out, o).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_outcomes(reader: impl BufRead) -> Result<Vec<OutcomeRecord>, HarnessError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| HarnessError::MalformedRecord { line: i + 1, message: e.to_string() })?,
        );
    }
    Ok(out)
}
