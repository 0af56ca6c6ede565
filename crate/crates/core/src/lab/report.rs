use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::format::sig;
use crate::fibercount::FiberError;
use crate::polycore::json::MapJson;
use crate::volmetric::VolError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

/// One computed quantity.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Measurement {
    pub operation: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub extra: serde_json::Value,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    /// Root finding or fiber solving failed to converge or stabilise.
    Numerical,
    Module,
}

impl ErrorClass {
    pub fn of_fiber(e: &FiberError) -> Self {
        match e {
            FiberError::NonConvergence { .. } | FiberError::Unstable { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Module,
        }
    }

    pub fn of_vol(e: &VolError) -> Self {
        match e {
            VolError::Fiber(f) => Self::of_fiber(f),
            VolError::BoxOverflow(_) => ErrorClass::Numerical,
            _ => ErrorClass::Module,
        }
    }

    /// Process exit code for a run that stopped on this error.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Numerical => EXIT_NONCONVERGENCE,
            ErrorClass::Module => EXIT_ASSERTION,
        }
    }
}

/// A module error, captured instead of aborting the run.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CapturedError {
    pub operation: String,
    pub inputs: Vec<String>,
    pub class: ErrorClass,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MapRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub map: MapJson,
}

/// Wall-clock data; the only part of a report that may differ between runs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Timing {
    pub wall_time_ms: u64,
    pub workers: usize,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub kind: ExperimentKind,
    pub property: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    /// Every catalog map the experiment used, by name.
    pub maps: BTreeMap<String, MapRecord>,
    pub measurements: Vec<Measurement>,
    pub assertions: Vec<Assertion>,
    pub errors: Vec<CapturedError>,
    pub passed: bool,
    pub exit_code: i32,
    pub timing: Timing,
}

impl Report {
    pub(crate) fn new(config: &ExperimentConfig) -> Self {
        Report {
            kind: config.kind,
            property: config.kind.property().to_string(),
            config: config.clone(),
            seed: config.seed,
            maps: BTreeMap::new(),
            measurements: Vec::new(),
            assertions: Vec::new(),
            errors: Vec::new(),
            passed: false,
            exit_code: EXIT_ASSERTION,
            timing: Timing::default(),
        }
    }

    pub(crate) fn assert(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.assertions.push(Assertion { name: name.into(), pass, detail: detail.into() });
        pass
    }

    /// Fixes `passed` and `exit_code` from assertions and errors.
    pub(crate) fn finish(&mut self) {
        let failed = self.assertions.iter().any(|a| !a.pass) || self.assertions.is_empty();
        let numerical = self.errors.iter().any(|e| e.class == ErrorClass::Numerical);
        self.exit_code = if numerical {
            EXIT_NONCONVERGENCE
        } else if failed || !self.errors.is_empty() {
            EXIT_ASSERTION
        } else {
            EXIT_PASS
        };
        self.passed = self.exit_code == EXIT_PASS;
    }

    /// The report without its timing section: identical across reruns.
    pub fn results(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing");
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn failed_assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    /// Plain-text summary for a terminal.
    pub fn summary(&self) -> String {
        let mut out = format!("experiment {} (seed {})\nproperty: {}\n", self.kind, self.seed, self.property);
        for m in &self.measurements {
            let se = m.stderr.map(|s| format!(" ± {}", sig(s))).unwrap_or_default();
            let extra = if m.extra.is_null() { String::new() } else { format!("  {}", m.extra) };
            out.push_str(&format!("  {}({}) = {}{se}{extra}\n", m.operation, m.inputs.join(", "), sig(m.value)));
        }
        for e in &self.errors {
            out.push_str(&format!("  ERROR {}({}): {}\n", e.operation, e.inputs.join(", "), e.message));
        }
        let passed = self.assertions.iter().filter(|a| a.pass).count();
        out.push_str(&format!("assertions: {passed}/{} passed\n", self.assertions.len()));
        for a in self.failed_assertions() {
            out.push_str(&format!("  FAIL {}: {}\n", a.name, a.detail));
        }
        out.push_str(&format!("wall time: {} ms\n", self.timing.wall_time_ms));
        out
    }
}
