//! Command-line front end.
//!
//! Exit codes: 0 success or correct plan, 1 wrong plan or no plan,
//! 2 usage or input error, 3 internal error.

use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use natplan::constraints::{verify_with, PreferenceMode, VerifyOptions};
use natplan::domain::{Plan, Problem, Task};
use natplan::generator::{generate, render, GenParams};
use natplan::harness::{
    aggregate_outcomes, evaluate_batch, load_records, read_outcomes, write_outcomes, EvalConfig,
    Method, ProblemSource, ProcessRunner, Runner, RunnerError, RunnerRequest, RunnerResponse,
};
use natplan::parser::{detect_task, extract_plan, parse_problem};
use natplan::solver::{solve, Budget, SolveOptions, StepMinutes};

#[derive(Parser)]
#[command(name = "natplan", version, about = "Parse, solve, verify and evaluate natural-language planning problems")]
struct Cli {
    /// Suppress diagnostics on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Template text to canonical problem JSON.
    Parse {
        /// Task family; guessed from the text when omitted.
        #[arg(long)]
        task: Option<Task>,
        /// Input file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Solve a problem exactly.
    Solve {
        #[arg(long)]
        task: Task,
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Check a plan against every constraint of a problem.
    Verify {
        #[arg(long)]
        task: Task,
        #[arg(long)]
        problem: PathBuf,
        /// Canonical plan JSON, answer-format JSON, or free text containing it.
        #[arg(long)]
        plan: PathBuf,
        /// Treat calendar preferences as tie-breakers instead of constraints.
        #[arg(long)]
        soft_preferences: bool,
    },
    /// Generate seeded instances with planted witnesses.
    Gen {
        #[arg(long)]
        task: Task,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances, using consecutive seeds.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        knobs: GenKnobs,
    },
    /// Evaluate model outputs; writes outcome JSON lines.
    Eval {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        problems: PathBuf,
        /// Runner executable for program records.
        #[arg(long, env = "NATPLAN_RUNNER")]
        runner: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 30_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 2048)]
        memory_mb: u64,
        #[arg(long)]
        soft_preferences: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate an outcome dump into CSV and markdown.
    Report {
        #[arg(long)]
        outcomes: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Markdown output file; standard output when omitted.
        #[arg(long)]
        markdown: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveFlags {
    /// Calendar grid step; must divide 60.
    #[arg(long, default_value_t = 30)]
    step_minutes: u32,
    #[arg(long, default_value_t = 10_000_000)]
    max_nodes: u64,
    #[arg(long, default_value_t = 30_000)]
    timeout_ms: u64,
    #[arg(long)]
    soft_preferences: bool,
}

#[derive(Args)]
struct GenKnobs {
    #[arg(long)]
    participants: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    days: Option<usize>,
    #[arg(long)]
    preferences: Option<usize>,
    #[arg(long)]
    cities: Option<usize>,
    #[arg(long)]
    total_days: Option<u32>,
    #[arg(long)]
    edge_density: Option<f64>,
    #[arg(long)]
    events: Option<usize>,
    #[arg(long)]
    friends: Option<usize>,
    #[arg(long)]
    locations: Option<usize>,
    #[arg(long)]
    target_constraints: Option<usize>,
}

impl GenKnobs {
    fn params(&self, seed: u64) -> GenParams {
        let d = GenParams::with_seed(seed);
        GenParams {
            seed,
            participants: self.participants.unwrap_or(d.participants),
            blocks: self.blocks.unwrap_or(d.blocks),
            days: self.days.unwrap_or(d.days),
            preferences: self.preferences.unwrap_or(d.preferences),
            cities: self.cities.unwrap_or(d.cities),
            total_days: self.total_days.or(d.total_days),
            edge_density: self.edge_density.unwrap_or(d.edge_density),
            events: self.events.unwrap_or(d.events),
            friends: self.friends.unwrap_or(d.friends),
            locations: self.locations.unwrap_or(d.locations),
            target_constraint_count: self.target_constraints,
        }
    }
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 3, error }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if !quiet || f.code == 3 {
                eprintln!("error: {:#}", f.error);
            }
            ExitCode::from(f.code)
        }
    }
}

fn note(quiet: bool, msg: impl std::fmt::Display) {
    if !quiet {
        eprintln!("{msg}");
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input").map_err(usage)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)
}

/// Loads canonical problem JSON, falling back to template text.
fn load_problem(task: Task, path: &Path) -> Result<Problem, Failure> {
    let text = read_input(path)?;
    match Problem::from_json(task, &text) {
        Ok(p) => Ok(p),
        Err(json_err) if text.trim_start().starts_with('{') => {
            Err(usage(anyhow!("{}: {json_err}", path.display())))
        }
        Err(_) => parse_problem(task, &text)
            .map(|p| p.problem)
            .map_err(|e| usage(anyhow!("{}: {e}", path.display()))),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).context("writing output")?;
    writeln!(out).context("writing output")?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let quiet = cli.quiet;
    match cli.command {
        Command::Parse { task, input } => {
            let text = read_input(&input)?;
            let task = match task.or_else(|| detect_task(&text)) {
                Some(t) => t,
                None => return Err(usage(anyhow!("cannot tell the task from the text; pass --task"))),
            };
            let parsed = parse_problem(task, &text).map_err(usage)?;
            for ((a, b), msg) in &parsed.diagnostics.warnings {
                note(quiet, format!("warning [{a}..{b}]: {msg}"));
            }
            print_json(&parsed.problem)?;
            Ok(0)
        }
        Command::Solve { task, problem, solve: flags } => {
            let problem = load_problem(task, &problem)?;
            let opts = SolveOptions {
                step: StepMinutes::new(flags.step_minutes).map_err(usage)?,
                budget: Budget { max_nodes: flags.max_nodes, max_wall: Duration::from_millis(flags.timeout_ms) },
                preferences: preference_mode(flags.soft_preferences),
            };
            let outcome = solve(&problem, &opts);
            let answer = outcome.plan().map(Plan::to_answer_json);
            let mut json = serde_json::to_value(&outcome).context("serializing outcome")?;
            json["answer"] = answer.unwrap_or(serde_json::Value::Null);
            print_json(&json)?;
            Ok(if outcome.is_satisfiable() { 0 } else { 1 })
        }
        Command::Verify { task, problem, plan, soft_preferences } => {
            let problem = load_problem(task, &problem)?;
            let text = read_input(&plan)?;
            let plan = match Plan::from_json(task, &text) {
                Ok(p) => p,
                Err(_) => match extract_plan(&text, task) {
                    Ok(p) => p,
                    Err(e) => {
                        note(quiet, format!("no plan: {e}"));
                        return Ok(1);
                    }
                },
            };
            let opts = VerifyOptions { preferences: preference_mode(soft_preferences) };
            let report = verify_with(&problem, &plan, &opts).map_err(usage)?;
            print_json(&report)?;
            for v in &report.violations {
                note(quiet, format!("violated {}: {}", v.constraint_id, v.explanation));
            }
            Ok(if report.is_correct() { 0 } else { 1 })
        }
        Command::Gen { task, seed, count, out, knobs } => {
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display())).map_err(usage)?;
            for s in seed..seed.saturating_add(count) {
                let (problem, witness) = generate(task, &knobs.params(s)).map_err(usage)?;
                let stem = out.join(format!("{task}-{s}"));
                let write = |ext: &str, body: String| {
                    let path = stem.with_extension(ext);
                    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
                };
                write("json", serde_json::to_string_pretty(&problem).context("serializing problem")?)?;
                write("txt", render(&problem))?;
                write("plan.json", serde_json::to_string_pretty(&witness.to_answer_json()).context("serializing plan")?)?;
                println!("{}", stem.display());
            }
            Ok(0)
        }
        Command::Eval { records, problems, runner, workers, timeout_ms, memory_mb, soft_preferences, out } => {
            let records = load_records(&records).map_err(usage)?;
            let needs_runner = records.iter().any(|r| r.method != Method::Plan);
            let runner: Box<dyn Runner> = match runner {
                Some(path) => Box::new(ProcessRunner::new(path)),
                None if needs_runner => {
                    return Err(usage(anyhow!("program records need --runner or NATPLAN_RUNNER")));
                }
                None => Box::new(NoRunner),
            };
            let mut config = EvalConfig {
                timeout_ms,
                memory_mb,
                verify: VerifyOptions { preferences: preference_mode(soft_preferences) },
                ..EvalConfig::default()
            };
            if let Some(w) = workers {
                if w == 0 {
                    return Err(usage(anyhow!("--workers must be at least 1")));
                }
                config.workers = w;
            }
            let outcomes = evaluate_batch(&records, &ProblemSource::new(problems), runner.as_ref(), &config)
                .map_err(|e| match e {
                    natplan::harness::HarnessError::Runner { .. } => Failure::from(anyhow!(e)),
                    other => usage(other),
                })?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_outcomes(io::BufWriter::new(file), &outcomes).context("writing outcomes")?;
                }
                None => write_outcomes(io::stdout().lock(), &outcomes).context("writing outcomes")?,
            }
            note(quiet, format!("evaluated {} records", outcomes.len()));
            Ok(0)
        }
        Command::Report { outcomes, csv, markdown } => {
            let file = fs::File::open(&outcomes)
                .with_context(|| format!("opening {}", outcomes.display()))
                .map_err(usage)?;
            let rows = read_outcomes(BufReader::new(file)).map_err(usage)?;
            let report = aggregate_outcomes(&rows);
            if let Some(path) = csv {
                let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                report.write_csv(file).context("writing csv")?;
            }
            let md = report.to_markdown();
            match markdown {
                Some(path) => fs::write(&path, md).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{md}"),
            }
            Ok(0)
        }
    }
}

fn preference_mode(soft: bool) -> PreferenceMode {
    if soft {
        PreferenceMode::TieBreak
    } else {
        PreferenceMode::Hard
    }
}

/// Stands in when every record is a plan record and no runner is needed.
struct NoRunner;

impl Runner for NoRunner {
    fn run(&self, _: &RunnerRequest) -> Result<RunnerResponse, RunnerError> {
        Err(RunnerError::Protocol("no runner configured".into()))
    }
}
