//! Report records and their JSON, CSV and text renderings.
//!
//! Every numeric value is an exact rational string (`num/den`). Maps are
//! `BTreeMap`s and records keep suite order, so equal inputs serialize to
//! identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use teich_core::Rat;

use crate::config::OutputFormat;
use crate::CliError;

pub const SCHEMA: &str = "teich-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    /// The mathematical statement this check exercises.
    pub anchor: String,
    pub pass: bool,
    pub witness: BTreeMap<String, String>,
}

impl CheckRecord {
    pub fn new(suite: &str, name: impl Into<String>, anchor: &str, pass: bool) -> CheckRecord {
        CheckRecord {
            suite: suite.into(),
            name: name.into(),
            anchor: anchor.into(),
            pass,
            witness: BTreeMap::new(),
        }
    }

    pub fn rat(mut self, key: &str, value: &Rat) -> Self {
        self.witness.insert(key.into(), value.to_string());
        self
    }

    pub fn int(self, key: &str, value: i64) -> Self {
        self.rat(key, &Rat::int(value))
    }

    pub fn rats(mut self, key: &str, values: &[Rat]) -> Self {
        let joined = values.iter().map(Rat::to_string).collect::<Vec<_>>().join(" ");
        self.witness.insert(key.into(), joined);
        self
    }

    pub fn note(mut self, key: &str, text: impl Into<String>) -> Self {
        self.witness.insert(key.into(), text.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub gauges: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub status: Status,
    /// Only present when timing was requested; keeps default output
    /// reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<String>,
}

pub fn gauges() -> BTreeMap<String, String> {
    BTreeMap::from([
        (
            "valuation".into(),
            "tilt units: v_F(t) = 1; p-normalized units: v_K(p) = 1".into(),
        ),
        (
            "norm".into(),
            "additive form: |x| corresponds to v(x); rho = |t|^r, rho = 1 is r = 0".into(),
        ),
        (
            "theta".into(),
            "signed series sum (-1)^n q^(n(n+1)/2) u^(2n+1); theta values in base q^(1/l)".into(),
        ),
        (
            "galois".into(),
            "valuation-level substitutions only (t -> c t); no faithful Galois action".into(),
        ),
    ])
}

impl Report {
    pub fn new(suite: &str, config: Vec<(String, String)>, checks: Vec<CheckRecord>) -> Report {
        let status = if checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            schema: SCHEMA,
            suite: suite.into(),
            config: config.into_iter().collect(),
            gauges: gauges(),
            checks,
            status,
            wall_time_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => Ok(self.to_text()),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// One row per check; the witness map is flattened to `key=value` pairs.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(["schema", "suite", "name", "anchor", "pass", "witness"])
            .map_err(io)?;
        for c in &self.checks {
            let witness = c
                .witness
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                SCHEMA,
                &c.suite,
                &c.name,
                &c.anchor,
                if c.pass { "true" } else { "false" },
                &witness,
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]", self.suite, SCHEMA);
        for (k, v) in &self.gauges {
            let _ = writeln!(out, "  gauge {k}: {v}");
        }
        for (k, v) in &self.config {
            let _ = writeln!(out, "  config {k} = {v}");
        }
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{mark}] {}/{}  ({})", c.suite, c.name, c.anchor);
            for (k, v) in &c.witness {
                let _ = writeln!(out, "         {k} = {v}");
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(
            out,
            "status: {:?} ({passed}/{} checks)",
            self.status,
            self.checks.len()
        );
        if let Some(t) = &self.wall_time_ms {
            let _ = writeln!(out, "wall time: {t} ms");
        }
        out
    }
}
