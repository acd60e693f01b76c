//! Pipeline configuration and the `key = value` file that mirrors the
//! command-line flags.

use std::time::Duration;

use tandem_core::lemma::FilterQuotas;
use tandem_core::problem::StartMode;
use tandem_core::subgoal::{SelectionWeights, WeightsError};
use tandem_core::tableau::Bound;

use crate::report::Format;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Variant {
    One,
    #[default]
    Two,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderingKind {
    #[default]
    None,
    /// LPO over the symbols in order of first occurrence.
    Precedence,
}

/// When the bottom-up preprocessing stops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sync {
    /// Exactly `activations` activations.
    #[default]
    Fixed,
    /// Until the top-down preprocessing finishes.
    UntilTopDown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CooperationConfig {
    pub mode: StartMode,
    pub variant: Variant,
    pub weights: SelectionWeights,
    pub quotas: FilterQuotas,
    /// Activations of the bottom-up preprocessing.
    pub activations: usize,
    pub fifo_period: usize,
    pub bound: Bound,
    /// First resource of the iterative deepening.
    pub initial: usize,
    pub step: usize,
    pub max_resource: usize,
    /// Inference cap of the ME engine over all rounds.
    pub me_max_work: Option<u64>,
    pub sat_max_activations: Option<usize>,
    pub ordering: OrderingKind,
    pub timeout: Duration,
    pub deterministic: bool,
    pub sync: Sync,
    pub output: Format,
}

impl Default for CooperationConfig {
    fn default() -> Self {
        CooperationConfig {
            mode: StartMode::CtcNeg,
            variant: Variant::Two,
            weights: SelectionWeights::default(),
            quotas: FilterQuotas::default(),
            activations: 2000,
            fifo_period: 5,
            bound: Bound::Depth,
            initial: 1,
            step: 1,
            max_resource: 64,
            me_max_work: Some(10_000_000),
            sat_max_activations: Some(100_000),
            ordering: OrderingKind::None,
            timeout: Duration::from_secs(300),
            deterministic: false,
            sync: Sync::Fixed,
            output: Format::Json,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error(transparent)]
    Weights(#[from] WeightsError),
}

fn bad(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into(), reason: reason.into() }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| bad(key, value, e.to_string()))
}

fn flag(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn limit<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    if value == "none" {
        Ok(None)
    } else {
        num(key, value).map(Some)
    }
}

impl CooperationConfig {
    /// Set one option; keys are the long flag names without dashes.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key.trim().replace('_', "-").as_str() {
            "mode" => {
                self.mode = match value {
                    "ctc" => StartMode::Ctc,
                    "ctcneg" | "ctc-neg" => StartMode::CtcNeg,
                    _ => return Err(bad(key, value, "expected ctc or ctcneg")),
                }
            }
            "variant" => {
                self.variant = match value {
                    "1" => Variant::One,
                    "2" => Variant::Two,
                    _ => return Err(bad(key, value, "expected 1 or 2")),
                }
            }
            "bound" => {
                self.bound = match value {
                    "depth" => Bound::Depth,
                    "inference" => Bound::Inference,
                    "weighted" => Bound::Weighted { depth_factor: 1.0, inference_factor: 3.0 },
                    _ => return Err(bad(key, value, "expected depth, inference or weighted")),
                }
            }
            "depth-factor" | "inference-factor" => {
                let x: f64 = num(key, value)?;
                if !(x > 0.0) {
                    return Err(bad(key, value, "must be positive"));
                }
                let (mut d, mut i) = match self.bound {
                    Bound::Weighted { depth_factor, inference_factor } => (depth_factor, inference_factor),
                    _ => (1.0, 3.0),
                };
                if key.starts_with("depth") {
                    d = x;
                } else {
                    i = x;
                }
                self.bound = Bound::Weighted { depth_factor: d, inference_factor: i };
            }
            "resource" => self.max_resource = num(key, value)?,
            "initial" => self.initial = num(key, value)?,
            "step" => {
                self.step = num(key, value)?;
                if self.step == 0 {
                    return Err(bad(key, value, "must be at least 1"));
                }
            }
            "k" => self.weights.k = num(key, value)?,
            "nsg" => self.weights.nsg = num(key, value)?,
            "k1" => self.weights.k1 = num(key, value)?,
            "k2" => self.weights.k2 = num(key, value)?,
            "nref" => self.weights.nref = num(key, value)?,
            "max-subgoals" => self.weights.m = num(key, value)?,
            "enumeration-nodes" => self.weights.max_nodes = limit(key, value)?,
            "alpha" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(bad(key, value, "expected three comma-separated weights"));
                }
                for (slot, p) in self.weights.alpha.iter_mut().zip(parts) {
                    *slot = num(key, p)?;
                }
            }
            "lemmas-per-filter" => self.quotas.per_filter = num(key, value)?,
            "activations" => self.activations = num(key, value)?,
            "fifo-period" => {
                self.fifo_period = num(key, value)?;
                if self.fifo_period == 0 {
                    return Err(bad(key, value, "must be at least 1"));
                }
            }
            "me-max-work" => self.me_max_work = limit(key, value)?,
            "sat-max-activations" => self.sat_max_activations = limit(key, value)?,
            "ordering" => {
                self.ordering = match value {
                    "none" => OrderingKind::None,
                    "precedence" => OrderingKind::Precedence,
                    _ => return Err(bad(key, value, "expected none or precedence")),
                }
            }
            "timeout" => {
                let secs: f64 = num(key, value)?;
                if !(secs >= 0.0) || !secs.is_finite() {
                    return Err(bad(key, value, "expected a nonnegative number of seconds"));
                }
                self.timeout = Duration::from_secs_f64(secs);
            }
            "deterministic" => self.deterministic = flag(key, value)?,
            "sync" => {
                self.sync = match value {
                    "fixed" => Sync::Fixed,
                    "until-td" => Sync::UntilTopDown,
                    _ => return Err(bad(key, value, "expected fixed or until-td")),
                }
            }
            "output" => {
                self.output = match value {
                    "json" => Format::Json,
                    "text" => Format::Text,
                    _ => return Err(bad(key, value, "expected json or text")),
                }
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Apply a configuration file: `key = value` lines, `#` comments.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.apply(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.variant {
            Variant::One if self.weights.k < 2 => Err(WeightsError::Resource.into()),
            _ => Ok(self.weights.validate()?),
        }
    }

    /// Deterministic runs synchronize on the activation count.
    pub fn effective_sync(&self) -> Sync {
        if self.deterministic {
            Sync::Fixed
        } else {
            self.sync
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = CooperationConfig::default();
        assert_eq!(c.variant, Variant::Two);
        assert_eq!(c.mode, StartMode::CtcNeg);
        assert_eq!((c.weights.k, c.weights.nsg, c.weights.k1, c.weights.k2, c.weights.nref, c.weights.m), (10, 500, 9, 9, 5, 30));
        assert_eq!(c.activations, 2000);
        assert_eq!(c.quotas.per_filter, 10);
        assert_eq!(c.fifo_period, 5);
        assert_eq!(c.bound, Bound::Depth);
        assert_eq!(c.timeout, Duration::from_secs(300));
        c.validate().unwrap();
    }

    #[test]
    fn file_mirrors_flags() {
        let mut c = CooperationConfig::default();
        c.apply_file("# tuned\nmode = ctc\nvariant=1\nbound = weighted\ninference-factor = 2.5\nmax-subgoals = 100\nlemmas_per_filter = 4\ntimeout = 1.5\ndeterministic = true\nsat-max-activations = none\n")
            .unwrap();
        assert_eq!(c.mode, StartMode::Ctc);
        assert_eq!(c.variant, Variant::One);
        assert_eq!(c.bound, Bound::Weighted { depth_factor: 1.0, inference_factor: 2.5 });
        assert_eq!(c.weights.m, 100);
        assert_eq!(c.quotas.per_filter, 4);
        assert_eq!(c.timeout, Duration::from_millis(1500));
        assert!(c.deterministic);
        assert_eq!(c.sat_max_activations, None);
        assert_eq!(c.effective_sync(), Sync::Fixed);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = CooperationConfig::default();
        assert!(matches!(c.apply("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(c.apply("k", "-1"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.apply("timeout", "-2"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(c.apply_file("mode ctc"), Err(ConfigError::Syntax { line: 1 })));
        c.apply("alpha", "1, 5, 10").unwrap();
        assert!(c.validate().is_err());
    }
}
