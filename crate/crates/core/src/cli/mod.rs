//! Library side of the `jschmidt` command-line tool. Every command returns a
//! [`RunReport`]; the binary prints it as JSON and exits nonzero exactly when
//! `failures` is non-empty.

mod commands;
mod selftest;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;
use crate::random::HaarSampler;
use crate::state::BipartiteState;

pub use commands::{cmd_appendix, cmd_bloch, cmd_joint, cmd_purity, cmd_schmidt, BlochOptions, Method};
pub use selftest::{cmd_selftest, SelftestMode};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub name: String,
    pub gap: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch; omitted under `--no-timestamp`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub results: Value,
    pub failures: Vec<Failure>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Vec<String>, seed: Option<u64>, results: Value, failures: Vec<Failure>) -> Self {
        Self { command: command.into(), inputs, seed, timestamp: None, results, failures }
    }

    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn stamp(mut self) -> Self {
        self.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One named numerical check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Collects checks; `--tol` replaces every default tolerance.
#[derive(Clone, Debug, Default)]
pub struct Checks {
    tol_override: Option<f64>,
    items: Vec<Check>,
}

impl Checks {
    pub fn new(tol_override: Option<f64>) -> Self {
        Self { tol_override, items: Vec::new() }
    }

    /// Passes when `gap ≤ tolerance`.
    pub fn gap(&mut self, name: &str, gap: f64, default_tol: f64) {
        let tolerance = self.tol_override.unwrap_or(default_tol);
        self.items.push(Check { name: name.into(), value: gap, tolerance, passed: gap <= tolerance });
    }

    /// A count that must be zero; not affected by `--tol`.
    pub fn zero(&mut self, name: &str, count: usize) {
        self.items.push(Check { name: name.into(), value: count as f64, tolerance: 0.0, passed: count == 0 });
    }

    pub fn items(&self) -> &[Check] {
        &self.items
    }

    pub fn failures(&self) -> Vec<Failure> {
        self.items
            .iter()
            .filter(|c| !c.passed)
            .map(|c| Failure { name: c.name.clone(), gap: c.value, tolerance: c.tolerance })
            .collect()
    }
}

/// Running maximum, tolerant of NaN (which always wins so it is reported).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Worst(pub f64);

impl Worst {
    pub fn new() -> Self {
        Self(0.0)
    }

    pub fn add(&mut self, x: f64) {
        if x.is_nan() || x > self.0 {
            self.0 = x;
        }
    }
}

/// Where states come from: files, or Haar samples for the given dims/seed.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub files: Vec<PathBuf>,
    pub random: Option<usize>,
    pub dims: (usize, usize),
    pub seed: u64,
    /// Normalize file states instead of rejecting unnormalized ones.
    pub normalize: bool,
    pub tol: Option<f64>,
}

impl Default for Inputs {
    fn default() -> Self {
        Self { files: Vec::new(), random: None, dims: (2, 2), seed: 0, normalize: false, tol: None }
    }
}

impl Inputs {
    /// States from files when given, else `count` (or `--random N`) Haar
    /// states. Also returns input labels for the report.
    pub fn states(&self, count: usize) -> Result<(Vec<BipartiteState>, Vec<String>)> {
        if !self.files.is_empty() {
            let states = self.files.iter().map(|p| json::read_state(p, self.normalize)).collect::<Result<Vec<_>>>()?;
            let labels = self.files.iter().map(|p| p.display().to_string()).collect();
            return Ok((states, labels));
        }
        let n = self.random.unwrap_or(count);
        if n == 0 {
            return Err(Error::InvalidParameter("--random must be at least 1".into()));
        }
        let (da, db) = self.dims;
        let mut rng = HaarSampler::new(self.seed);
        let states = (0..n).map(|_| rng.state(da, db)).collect::<Result<Vec<_>>>()?;
        Ok((states, vec![format!("haar(dims={da}x{db}, count={n}, seed={})", self.seed)]))
    }

    pub(crate) fn seed_if_random(&self) -> Option<u64> {
        if self.files.is_empty() {
            Some(self.seed)
        } else {
            None
        }
    }
}
