//! Run configuration: one flat JSON document. Rationals are `"num/den"`
//! strings; JSON floats are rejected.

use std::path::Path;

use serde::{Deserialize, Deserializer};
use teich_core::loglink::min_precision;
use teich_core::rat::{check_odd_prime, ell_star, is_prime};
use teich_core::theta::SignConvention;
use teich_core::Rat;

use crate::CliError;

fn rat<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

fn rats<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| s.parse().map_err(serde::de::Error::custom))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Signed,
    Unsigned,
}

impl From<Convention> for SignConvention {
    fn from(c: Convention) -> SignConvention {
        match c {
            Convention::Signed => SignConvention::Signed,
            Convention::Unsigned => SignConvention::Unsigned,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub p: u32,
    pub ell: u32,
    /// Upper end of the odd-prime range for `sweep-ell`.
    pub ell_sweep_max: u32,
    #[serde(deserialize_with = "rat")]
    pub v_q: Rat,
    pub theta_truncation: u32,
    pub theta_convention: Convention,
    pub frobenius_depth: u32,
    #[serde(deserialize_with = "rat")]
    pub rho_weight: Rat,
    pub padic_precision: u32,
    pub log_trials: usize,
    pub chain_window: (i64, i64),
    #[serde(deserialize_with = "rats")]
    pub epsilon_grid: Vec<Rat>,
    #[serde(deserialize_with = "rat")]
    pub corollary_c: Rat,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            ell: 5,
            ell_sweep_max: 97,
            v_q: Rat::one(),
            theta_truncation: 12,
            theta_convention: Convention::Signed,
            frobenius_depth: 3,
            rho_weight: Rat::one(),
            padic_precision: 14,
            log_trials: 500,
            chain_window: (-4, 4),
            epsilon_grid: vec![Rat::new(1, 2), Rat::new(1, 3), Rat::new(1, 10)],
            corollary_c: Rat::new(1, 2),
            output_format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !is_prime(self.p as u64) {
            return bad(format!("p = {} is not prime", self.p));
        }
        check_odd_prime(self.ell, Some(self.p)).map_err(|e| CliError::Config(e.to_string()))?;
        if !self.v_q.is_positive() {
            return bad("v_q must be positive (|q| < 1)".into());
        }
        if self.theta_truncation < 1 {
            return bad("theta_truncation must be at least 1".into());
        }
        if !self.rho_weight.is_positive() {
            return bad("rho_weight must be positive".into());
        }
        if !self.corollary_c.is_positive() {
            return bad("corollary_c must be positive".into());
        }
        if self.chain_window.0 > self.chain_window.1 {
            return bad("chain_window must be [lo, hi] with lo <= hi".into());
        }
        if self.ell_sweep_max < 3 {
            return bad("ell_sweep_max must be at least 3".into());
        }
        Ok(())
    }

    /// Quasi-periodicity shifts up to `ℓ*` must fit in the truncation.
    pub fn require_theta_window(&self) -> Result<(), CliError> {
        let need = ell_star(self.ell);
        if self.theta_truncation < need {
            return Err(CliError::Config(format!(
                "window error: theta_truncation {} < l* = {need}",
                self.theta_truncation
            )));
        }
        Ok(())
    }

    pub fn require_precision(&self) -> Result<(), CliError> {
        let need = min_precision(self.p);
        if self.padic_precision < need {
            return Err(CliError::Config(format!(
                "insufficient precision: padic_precision {} < {need} (use at least {need})",
                self.padic_precision
            )));
        }
        Ok(())
    }

    /// The config echo written into every report.
    pub fn echo(&self) -> Vec<(String, String)> {
        let r = |n: i64| Rat::int(n).to_string();
        vec![
            ("p".into(), r(self.p as i64)),
            ("ell".into(), r(self.ell as i64)),
            ("ell_sweep_max".into(), r(self.ell_sweep_max as i64)),
            ("v_q".into(), self.v_q.to_string()),
            ("theta_truncation".into(), r(self.theta_truncation as i64)),
            (
                "theta_convention".into(),
                format!("{:?}", self.theta_convention).to_lowercase(),
            ),
            ("frobenius_depth".into(), r(self.frobenius_depth as i64)),
            ("rho_weight".into(), self.rho_weight.to_string()),
            ("padic_precision".into(), r(self.padic_precision as i64)),
            ("log_trials".into(), r(self.log_trials as i64)),
            (
                "chain_window".into(),
                format!("{}..{}", r(self.chain_window.0), r(self.chain_window.1)),
            ),
            (
                "epsilon_grid".into(),
                self.epsilon_grid
                    .iter()
                    .map(Rat::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            ("corollary_c".into(), self.corollary_c.to_string()),
        ]
    }
}
