//! The `verify` front end: check files, the built-in example suite, and
//! text/JSON reports.

mod eval;
mod suite;
mod syntax;

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

pub use eval::{Env, EvalError, Outcome, Value, CHECK_KINDS};
pub use suite::{example_suite, SUITE_SEED};
pub use syntax::{parse_checkfile, CheckFile, Expect, Line, NodeDisplay, ParseError, Stmt, VExpr};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: unknown reference `{name}`")]
    UnknownReference { line: usize, name: String },
    #[error("line {line}: {message}")]
    Type { line: usize, message: String },
    #[error("line {line}: duplicate name `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: {source}")]
    Check { line: usize, source: crate::Error },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl RunError {
    fn at(line: usize, e: EvalError) -> Self {
        match e {
            EvalError::Unknown(name) => RunError::UnknownReference { line, name },
            EvalError::Type(message) => RunError::Type { line, message },
            EvalError::Module(source) => RunError::Check { line, source },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub expected: Expect,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

impl CheckResult {
    /// A check passes when what it found matches what was expected.
    pub fn passed(&self) -> bool {
        matches!(
            (&self.outcome, self.expected),
            (Outcome::Holds, Expect::Pass) | (Outcome::Violated(_), Expect::Fail) | (Outcome::Errored(_), Expect::Error)
        )
    }

    pub fn witness(&self) -> Option<String> {
        match &self.outcome {
            Outcome::Holds => None,
            Outcome::Violated(w) => Some(w.clone()),
            Outcome::Errored(e) => Some(format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub checks: Vec<CheckResult>,
}

impl RunReport {
    pub fn pass_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn fail_count(&self) -> usize {
        self.checks.len() - self.pass_count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.fail_count() == 0 {
            0
        } else {
            1
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: RunReport) {
        self.checks.extend(other.checks);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    name: &'a str,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

#[derive(Serialize)]
struct JsonSummary {
    pass: usize,
    fail: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    checks: Vec<JsonCheck<'a>>,
    summary: JsonSummary,
}

fn verdict(c: &CheckResult) -> &'static str {
    if c.passed() {
        "pass"
    } else {
        "fail"
    }
}

/// Renders a report. Timings are only printed in text mode when asked for,
/// so that default output is reproducible byte for byte.
pub fn emit_report(r: &RunReport, format: Format, timings: bool) -> String {
    match format {
        Format::Json => {
            let doc = JsonReport {
                checks: r
                    .checks
                    .iter()
                    .map(|c| JsonCheck {
                        name: &c.name,
                        verdict: verdict(c),
                        expected: (c.expected != Expect::Pass).then(|| c.expected.as_str()),
                        witness: c.witness(),
                    })
                    .collect(),
                summary: JsonSummary {
                    pass: r.pass_count(),
                    fail: r.fail_count(),
                },
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &r.checks {
                let _ = write!(s, "{:<4}  {}", verdict(c).to_uppercase(), c.name);
                if c.expected != Expect::Pass {
                    let _ = write!(s, "  [expect {}]", c.expected.as_str());
                }
                if timings {
                    let _ = write!(s, "  ({:.1} ms)", c.elapsed.as_secs_f64() * 1e3);
                }
                s.push('\n');
                if let Some(w) = c.witness() {
                    let _ = writeln!(s, "      witness: {w}");
                }
            }
            let _ = writeln!(s, "{} passed, {} failed", r.pass_count(), r.fail_count());
            s
        }
    }
}

struct Prepared {
    name: String,
    kind: String,
    args: Vec<Value>,
    current: crate::symalg::Patch,
    expected: Expect,
}

/// A let-bound name may not hide a coordinate of the patch being entered.
fn shadowed(env: &Env, p: &crate::symalg::Patch, line: usize) -> Result<(), RunError> {
    match p.coords().iter().find(|c| env.values.contains_key(*c)) {
        Some(c) => Err(RunError::Duplicate { line, name: c.clone() }),
        None => Ok(()),
    }
}

/// Executes a parsed check file. Declarations run in order; the checks then
/// run in parallel and are reported in file order.
pub fn run_checkfile_parsed(cf: &CheckFile) -> Result<RunReport, RunError> {
    let mut env = Env::default();
    let mut prepared = Vec::new();
    for Line { line, stmt } in &cf.lines {
        let line = *line;
        match stmt {
            Stmt::Patch { name, coords } => {
                if env.is_bound(name) {
                    return Err(RunError::Duplicate { line, name: name.clone() });
                }
                let p = crate::symalg::Patch::new(name.as_str(), coords.iter().map(String::as_str))
                    .map_err(|source| RunError::Check { line, source })?;
                shadowed(&env, &p, line)?;
                env.patches.insert(name.clone(), p.clone());
                env.current = p;
            }
            Stmt::Use(name) => {
                let p = if let Some(p) = env.patches.get(name) {
                    p.clone()
                } else if let Some(v) = env.values.get(name) {
                    v.patch().ok_or_else(|| RunError::Type {
                        line,
                        message: format!("`{name}` does not live on a patch"),
                    })?
                } else {
                    return Err(RunError::UnknownReference { line, name: name.clone() });
                };
                shadowed(&env, &p, line)?;
                env.current = p;
            }
            Stmt::Let { name, value } => {
                if env.is_bound(name) || env.current.index_of(name).is_some() {
                    return Err(RunError::Duplicate { line, name: name.clone() });
                }
                let v = env.eval(value).map_err(|e| RunError::at(line, e))?;
                env.values.insert(name.clone(), v);
            }
            Stmt::Check {
                kind,
                args,
                expect,
                label,
            } => {
                if !CHECK_KINDS.contains(&kind.as_str()) {
                    return Err(RunError::UnknownReference {
                        line,
                        name: format!("check kind `{kind}`"),
                    });
                }
                // Constructor failures inside a check line count as the
                // check's outcome, like failures of the check itself.
                let mut values = Vec::with_capacity(args.len());
                let mut failed = None;
                for a in args {
                    match env.eval(a) {
                        Ok(v) => values.push(v),
                        Err(EvalError::Module(e)) => {
                            failed = Some(e);
                            break;
                        }
                        Err(e) => return Err(RunError::at(line, e)),
                    }
                }
                let name = label.clone().unwrap_or_else(|| {
                    let s = stmt.to_string();
                    let s = s.strip_prefix("check ").unwrap_or(&s);
                    match s.rfind(" expect ") {
                        Some(i) => s[..i].to_string(),
                        None => s.to_string(),
                    }
                });
                if let Some(e) = failed {
                    prepared.push(Err((name, *expect, e)));
                } else {
                    prepared.push(Ok(Prepared {
                        name,
                        kind: kind.clone(),
                        args: values,
                        current: env.current.clone(),
                        expected: *expect,
                    }));
                }
            }
        }
    }
    let results: Vec<Result<CheckResult, (usize, EvalError)>> = prepared
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| match p {
            Err((name, expected, e)) => Ok(CheckResult {
                name,
                expected,
                outcome: Outcome::Errored(e.to_string()),
                elapsed: Duration::ZERO,
            }),
            Ok(p) => {
                let t0 = Instant::now();
                let outcome = eval::run_check(&p.kind, &p.args, &p.current).map_err(|e| (i, e))?;
                Ok(CheckResult {
                    name: p.name,
                    expected: p.expected,
                    outcome,
                    elapsed: t0.elapsed(),
                })
            }
        })
        .collect();
    let check_lines: Vec<usize> = cf
        .lines
        .iter()
        .filter(|l| matches!(l.stmt, Stmt::Check { .. }))
        .map(|l| l.line)
        .collect();
    let mut report = RunReport::default();
    for r in results {
        report
            .checks
            .push(r.map_err(|(i, e)| RunError::at(check_lines[i], e))?);
    }
    Ok(report)
}

pub fn run_source(src: &str) -> Result<RunReport, RunError> {
    run_checkfile_parsed(&parse_checkfile(src)?)
}

pub fn run_checkfile(path: impl AsRef<Path>) -> Result<RunReport, RunError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|e| RunError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    run_source(&src)
}

/// Runs the built-in example library.
pub fn run_example_suite() -> RunReport {
    run_source(&example_suite()).expect("built-in suite is well formed")
}
