//! Scenario files (TOML).

use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelConfig, Preset};
use crate::codec::{CodecConfig, Rnti};
use crate::dci::DciFormat;
use crate::error::{Error, Result};
use crate::sim::{RntiClass, C_RNTI_FIRST};

/// Distribution of per-UE SNR in dB.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SnrDistribution {
    Fixed { value: f64 },
    Uniform { min: f64, max: f64 },
    Normal { mean: f64, std: f64 },
}

impl SnrDistribution {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            SnrDistribution::Fixed { value } => value,
            SnrDistribution::Uniform { min, max } if max > min => rng.random_range(min..max),
            SnrDistribution::Uniform { min, .. } => min,
            SnrDistribution::Normal { mean, std } => Normal::new(mean, std)
                .map(|d| d.sample(rng))
                .unwrap_or(mean),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SnrDistribution::Fixed { value } => value.is_finite(),
            SnrDistribution::Uniform { min, max } => {
                min.is_finite() && max.is_finite() && min <= max
            }
            SnrDistribution::Normal { mean, std } => {
                mean.is_finite() && std.is_finite() && std >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid SNR distribution {self:?}")))
        }
    }
}

/// Closed range of per-subframe scheduling probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActivityRange {
    pub min: f64,
    pub max: f64,
}

impl ActivityRange {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.max > self.min {
            rng.random_range(self.min..=self.max)
        } else {
            self.min
        }
    }
}

/// Fields missing from a scenario file take their `Default` values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub duration_ms: u64,
    pub n_rb: u16,
    pub n_cce: usize,
    /// Expected new UEs per second.
    pub arrival_rate: f64,
    /// Sessions present at ms 0 (no RAR is sent for them).
    pub initial_sessions: usize,
    /// Mean time a session keeps generating traffic; `inf` means forever.
    pub mean_active_s: f64,
    pub inactivity_timeout_ms: u64,
    /// Value handed out by the first RNTI assignment.
    pub first_rnti: u16,
    /// Share of downlink grants using format 2A.
    pub format2a_fraction: f64,
    pub snr: SnrDistribution,
    pub dl_activity: ActivityRange,
    pub ul_activity: ActivityRange,
    /// Largest downlink/uplink grant in RBs.
    pub max_grant_rbs: u16,
    pub channel: ChannelConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            duration_ms: 5000,
            n_rb: 50,
            n_cce: 44,
            arrival_rate: 2.0,
            initial_sessions: 10,
            mean_active_s: 20.0,
            inactivity_timeout_ms: 10_000,
            first_rnti: C_RNTI_FIRST,
            format2a_fraction: 0.3,
            snr: SnrDistribution::Uniform {
                min: -3.0,
                max: 18.0,
            },
            dl_activity: ActivityRange {
                min: 0.02,
                max: 0.2,
            },
            ul_activity: ActivityRange {
                min: 0.01,
                max: 0.1,
            },
            max_grant_rbs: 25,
            channel: ChannelConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        let seed = self.channel.seed;
        self.channel = ChannelConfig {
            seed,
            ..preset.channel()
        };
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        let codec = CodecConfig::default();
        if codec.payload_len(DciFormat::Format1A, self.n_rb).is_none() {
            return bad("n_rb has no configured DCI sizes (use 50 or 100)");
        }
        if self.n_cce == 0 || self.n_cce > 1024 {
            return bad("n_cce must lie in 1..=1024");
        }
        if !(self.arrival_rate >= 0.0 && self.arrival_rate.is_finite()) {
            return bad("arrival_rate must be finite and non-negative");
        }
        if self.mean_active_s.is_nan() || self.mean_active_s <= 0.0 {
            return bad("mean_active_s must be positive");
        }
        if RntiClass::of(Rnti(self.first_rnti)) != RntiClass::CRnti {
            return bad("first_rnti must be a C-RNTI value");
        }
        if !(0.0..=1.0).contains(&self.format2a_fraction) {
            return bad("format2a_fraction must lie in [0, 1]");
        }
        for (name, a) in [
            ("dl_activity", self.dl_activity),
            ("ul_activity", self.ul_activity),
        ] {
            if !(0.0 <= a.min && a.min <= a.max && a.max <= 1.0) {
                return Err(Error::Config(format!(
                    "{name} must satisfy 0 <= min <= max <= 1"
                )));
            }
        }
        if self.max_grant_rbs == 0 {
            return bad("max_grant_rbs must be positive");
        }
        self.snr.validate()?;
        self.channel.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = ScenarioConfig::default();
        let text = cfg.to_toml_string();
        assert_eq!(ScenarioConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn minimal_file_parses() {
        let text = r#"
            duration_ms = 100
            snr = { kind = "fixed", value = 12.0 }
            dl_activity = { min = 0.1, max = 0.1 }
            ul_activity = { min = 0.0, max = 0.0 }
            [channel]
            snr_db = inf
        "#;
        let cfg = ScenarioConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.n_cce, 44);
        assert_eq!(cfg.channel.snr_db, f64::INFINITY);
    }

    #[test]
    fn missing_fields_take_defaults() {
        let cfg =
            ScenarioConfig::from_toml_str("duration_ms = 400\nmean_active_s = inf\n").unwrap();
        assert_eq!(cfg.duration_ms, 400);
        assert_eq!(cfg.mean_active_s, f64::INFINITY);
        assert_eq!(
            ScenarioConfig {
                duration_ms: 5000,
                mean_active_s: 20.0,
                ..cfg
            },
            ScenarioConfig::default()
        );
        assert_eq!(
            ScenarioConfig::from_toml_str("").unwrap(),
            ScenarioConfig::default()
        );
        assert!(ScenarioConfig::from_toml_str("mean_active_s = 0.0").is_err());
    }

    #[test]
    fn rejects_bad_values() {
        for patch in [
            "n_rb = 42",
            "format2a_fraction = 2.0",
            "first_rnti = 5",
            "bogus = 1",
        ] {
            let text = format!(
                "duration_ms = 1\n{patch}\nsnr = {{ kind = \"fixed\", value = 1.0 }}\n\
                 dl_activity = {{ min = 0.0, max = 0.0 }}\nul_activity = {{ min = 0.0, max = 0.0 }}\n\
                 [channel]\nsnr_db = 3.0\n"
            );
            assert!(ScenarioConfig::from_toml_str(&text).is_err(), "{patch}");
        }
    }
}
