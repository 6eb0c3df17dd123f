//! Wire protocol for executing candidate programs.
//!
//! A runner is an executable that reads one [`RunnerRequest`] as JSON on
//! stdin and writes one [`RunnerResponse`] as JSON on stdout.
//! [`ProcessRunner`] speaks that protocol; [`CannedRunner`] is an in-process
//! double that returns preset responses.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Child, Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    NativeCode,
    SolverCode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunnerRequest {
    pub source: String,
    pub timeout_ms: u64,
    pub memory_mb: u64,
    pub mode: RunMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    SyntaxError,
    RuntimeError,
    Timeout,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::SyntaxError => "syntax_error",
            RunStatus::RuntimeError => "runtime_error",
            RunStatus::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunnerResponse {
    pub status: RunStatus,
    #[serde(default)]
    pub stdout: String,
    #[serde(default)]
    pub stderr: String,
    #[serde(default)]
    pub wall_ms: u64,
}

impl RunnerResponse {
    pub fn ok(stdout: impl Into<String>) -> Self {
        RunnerResponse { status: RunStatus::Ok, stdout: stdout.into(), stderr: String::new(), wall_ms: 0 }
    }

    pub fn failed(status: RunStatus, stderr: impl Into<String>) -> Self {
        RunnerResponse { status, stdout: String::new(), stderr: stderr.into(), wall_ms: 0 }
    }
}

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("could not start runner {program:?}: {source}")]
    Spawn { program: PathBuf, source: std::io::Error },
    #[error("runner i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("runner broke the protocol: {0}")]
    Protocol(String),
}

/// Executes candidate source. Implementations must accept concurrent calls.
pub trait Runner: Send + Sync {
    fn run(&self, request: &RunnerRequest) -> Result<RunnerResponse, RunnerError>;
}

/// Spawns one runner process per request.
#[derive(Debug, Clone)]
pub struct ProcessRunner {
    program: PathBuf,
    args: Vec<String>,
}

impl ProcessRunner {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ProcessRunner { program: program.into(), args: Vec::new() }
    }

    pub fn with_args(mut self, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.args = args.into_iter().map(Into::into).collect();
        self
    }
}

/// Grace period on top of twice the candidate timeout before the runner
/// process itself is killed.
const SUPERVISOR_GRACE: Duration = Duration::from_millis(500);

impl Runner for ProcessRunner {
    fn run(&self, request: &RunnerRequest) -> Result<RunnerResponse, RunnerError> {
        let payload = serde_json::to_vec(request).map_err(|e| RunnerError::Protocol(e.to_string()))?;
        let started = Instant::now();
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| RunnerError::Spawn { program: self.program.clone(), source })?;

        let mut stdin = child.stdin.take().expect("stdin is piped");
        let writer = thread::spawn(move || stdin.write_all(&payload));
        let stdout = drain(child.stdout.take().expect("stdout is piped"));
        let stderr = drain(child.stderr.take().expect("stderr is piped"));

        let deadline = Duration::from_millis(request.timeout_ms.saturating_mul(2)) + SUPERVISOR_GRACE;
        let status = match wait_until(&mut child, started + deadline)? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(RunnerResponse {
                    status: RunStatus::Timeout,
                    stdout: String::new(),
                    stderr: "runner killed by supervisor".into(),
                    wall_ms: started.elapsed().as_millis() as u64,
                });
            }
        };
        // A runner may exit without reading stdin; a broken pipe is fine then.
        let _ = writer.join();
        let out = stdout.join().map_err(|_| RunnerError::Protocol("stdout reader panicked".into()))??;
        let err = stderr.join().map_err(|_| RunnerError::Protocol("stderr reader panicked".into()))??;

        match serde_json::from_slice::<RunnerResponse>(&out) {
            Ok(resp) => Ok(resp),
            Err(e) => Err(RunnerError::Protocol(format!(
                "exit {status}, unreadable response ({e}); stderr: {}",
                String::from_utf8_lossy(&err).trim()
            ))),
        }
    }
}

fn drain(mut pipe: impl Read + Send + 'static) -> thread::JoinHandle<std::io::Result<Vec<u8>>> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        pipe.read_to_end(&mut buf)?;
        Ok(buf)
    })
}

fn wait_until(child: &mut Child, deadline: Instant) -> std::io::Result<Option<std::process::ExitStatus>> {
    loop {
        if let Some(status) = child.try_wait()? {
            return Ok(Some(status));
        }
        if Instant::now() >= deadline {
            return Ok(None);
        }
        thread::sleep(Duration::from_millis(5));
    }
}

/// Test double: answers from a table keyed by source text and never
/// executes anything.
#[derive(Debug, Default)]
pub struct CannedRunner {
    responses: HashMap<String, RunnerResponse>,
    fallback: Option<RunnerResponse>,
    calls: AtomicUsize,
    requests: Mutex<Vec<RunnerRequest>>,
}

impl CannedRunner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, source: impl Into<String>, response: RunnerResponse) -> Self {
        self.responses.insert(source.into(), response);
        self
    }

    pub fn with_fallback(mut self, response: RunnerResponse) -> Self {
        self.fallback = Some(response);
        self
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn requests(&self) -> Vec<RunnerRequest> {
        self.requests.lock().expect("request log poisoned").clone()
    }
}

impl Runner for CannedRunner {
    fn run(&self, request: &RunnerRequest) -> Result<RunnerResponse, RunnerError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.requests.lock().expect("request log poisoned").push(request.clone());
        self.responses
            .get(&request.source)
            .or(self.fallback.as_ref())
            .cloned()
            .ok_or_else(|| RunnerError::Protocol(format!("no canned response for {:?}", request.source)))
    }
}
