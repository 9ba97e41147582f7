//! Check records, run configuration, and the suites behind the `gspin6` binary.
//!
//! Output is JSON lines: one record per check, sorted by name, then a summary line.
//! Nothing time- or host-dependent goes into a record, so a fixed config gives the
//! same bytes on every run.

mod config;
mod fixtures;
pub mod suites;

pub use config::{ArchWhich, ConfigError, Rep, RunConfig, Subcommand, KEYS};
pub use fixtures::{fixture, FIXTURES};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arch_quadrature::ArchError;
use crate::dual_lfactors::LFactorError;
use crate::exact_rings::RingError;
use crate::gu_groups::GroupError;
use crate::herm_modform::ModFormError;
use crate::padic_verify::PadicError;
use crate::ait_quaternion::AitError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    LFactor(#[from] LFactorError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    ModForm(#[from] ModFormError),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Ait(#[from] AitError),
}

/// One check. `pass` is `lhs == rhs` for exact checks (`tolerance` 0) and
/// `|lhs - rhs| <= tolerance` otherwise, with `tolerance` absolute.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub anchor: &'static str,
    pub inputs: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Record {
    pub fn exact<T: Serialize + PartialEq>(
        name: impl Into<String>,
        anchor: &'static str,
        inputs: Value,
        lhs: T,
        rhs: T,
    ) -> Self {
        let pass = lhs == rhs;
        Record {
            name: name.into(),
            anchor,
            inputs,
            lhs: json!(lhs),
            rhs: json!(rhs),
            tolerance: 0.0,
            pass,
            detail: None,
        }
    }

    pub fn close(name: impl Into<String>, anchor: &'static str, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        Record {
            name: name.into(),
            anchor,
            inputs,
            lhs: json!(lhs),
            rhs: json!(rhs),
            tolerance: tol,
            pass: (lhs - rhs).abs() <= tol,
            detail: None,
        }
    }

    pub fn close_c(
        name: impl Into<String>,
        anchor: &'static str,
        inputs: Value,
        lhs: Complex64,
        rhs: Complex64,
        tol: f64,
    ) -> Self {
        Record {
            name: name.into(),
            anchor,
            inputs,
            lhs: json!([lhs.re, lhs.im]),
            rhs: json!([rhs.re, rhs.im]),
            tolerance: tol,
            pass: (lhs - rhs).norm() <= tol,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    /// Sorts by name; the sort is stable, so equal names keep suite order.
    pub fn new(mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        Report { records }
    }

    pub fn summary(&self) -> Summary {
        let passed = self.records.iter().filter(|r| r.pass).count();
        Summary { total: self.records.len(), passed, failed: self.records.len() - passed }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out.push_str(&json!({ "summary": self.summary() }).to_string());
        out.push('\n');
        out
    }
}

/// A check report, or plain data for the computing subcommands.
#[derive(Clone, Debug, PartialEq)]
pub enum RunOutput {
    Report(Report),
    Data(Value),
}

impl RunOutput {
    pub fn to_text(&self) -> String {
        match self {
            RunOutput::Report(r) => r.to_jsonl(),
            RunOutput::Data(v) => format!("{v}\n"),
        }
    }

    pub fn success(&self) -> bool {
        match self {
            RunOutput::Report(r) => r.all_pass(),
            RunOutput::Data(_) => true,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput, HarnessError> {
    use Subcommand::*;
    let report = |recs: Vec<Record>| Ok(RunOutput::Report(Report::new(recs)));
    match cfg.subcommand {
        Euler => suites::euler(cfg).map(RunOutput::Data),
        Reps => suites::reps(cfg).map(RunOutput::Data),
        EvalPt => suites::eval_pt(cfg).map(RunOutput::Data),
        EmitFixture => {
            let name = cfg.fixture.as_deref().ok_or_else(|| HarnessError::Input("fixture name missing".into()))?;
            fixture(name, cfg.seed).map(RunOutput::Data)
        }
        VerifyEuler => report(suites::euler_identities(cfg.seed, 25)?),
        VerifyGroup => {
            let mut recs = suites::group(cfg.seed, cfg.d)?;
            recs.extend(suites::rstar(cfg.seed)?);
            if cfg.modularity {
                recs.extend(suites::modularity(cfg.bound.unwrap_or(10))?);
            }
            report(recs)
        }
        VerifyAit => report(suites::ait(cfg.seed, cfg.d, Some(&cfg.t))?),
        VerifyPadic => {
            let mut recs = Vec::new();
            for &p in &cfg.primes {
                for &s in &cfg.splittings {
                    let place = crate::padic_verify::LocalPlace::new(p, s)?;
                    recs.extend(suites::padic(&place, &cfg.windows, cfg.seed)?);
                }
            }
            report(recs)
        }
        VerifyArch => report(suites::arch(cfg.which, cfg.r.unwrap_or(8), &cfg.grid, &cfg.quadrature, cfg.seed)?),
    }
}
