//! AWGN channel over antipodal soft symbols, with optional interference in
//! empty CCEs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::codec::CCE_BITS;
use crate::error::{Error, Result};
use crate::grid::PdcchSubframe;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    /// Cell SNR in dB; `inf` disables noise.
    pub snr_db: f64,
    /// Scale the noise on occupied CCEs by the owning UE's SNR.
    #[serde(default)]
    pub per_ue_snr: bool,
    #[serde(default)]
    pub interference_prob: f64,
    /// Interferer power relative to the reference.
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_rho() -> f64 {
    1.0
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Preset::Good.channel()
    }
}

impl ChannelConfig {
    pub fn noiseless() -> Self {
        Preset::Noiseless.channel()
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.interference_prob) {
            return Err(Error::Config("interference_prob must lie in [0, 1]".into()));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(Error::Config("rho must be finite and non-negative".into()));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::Config("snr_db must be a number or inf".into()));
        }
        Ok(())
    }
}

/// Noise standard deviation for an SNR in dB.
pub fn noise_sigma(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 20.0)
    }
}

/// Named channel conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Noiseless,
    Good,
    Fair,
    Poor,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Noiseless, Preset::Good, Preset::Fair, Preset::Poor];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Noiseless => "noiseless",
            Preset::Good => "good",
            Preset::Fair => "fair",
            Preset::Poor => "poor",
        }
    }

    pub fn channel(self) -> ChannelConfig {
        let (snr_db, interference_prob, rho) = match self {
            Preset::Noiseless => (f64::INFINITY, 0.0, 1.0),
            Preset::Good => (12.0, 0.0, 1.0),
            Preset::Fair => (5.0, 0.05, 1.0),
            // interference-limited: neighbour PDCCH in 30% of empty CCEs
            Preset::Poor => (4.5, 0.3, 1.0),
        };
        ChannelConfig {
            snr_db,
            per_ue_snr: false,
            interference_prob,
            rho,
            seed: 0,
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

/// Adds noise (and interference in empty CCEs) to a transmitted subframe.
/// The random stream depends only on `cfg.seed` and `sf.ms`.
pub fn apply_channel(sf: &PdcchSubframe, cfg: &ChannelConfig) -> PdcchSubframe {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(sf.ms);
    let cell_sigma = noise_sigma(cfg.snr_db) as f32;
    let amp = cfg.rho.sqrt() as f32;
    let mut out = sf.clone();
    for i in 0..sf.n_cce {
        let occupied = sf.occupied.get(i).copied().unwrap_or(false);
        let cce = &mut out.soft[i * CCE_BITS..(i + 1) * CCE_BITS];
        let sigma = match sf.owner_snr_db.get(i).copied().flatten() {
            Some(snr) if occupied && cfg.per_ue_snr => noise_sigma(snr as f64) as f32,
            _ => cell_sigma,
        };
        if !occupied && cfg.interference_prob > 0.0 && rng.random_bool(cfg.interference_prob) {
            for v in cce.iter_mut() {
                *v = if rng.random_bool(0.5) { amp } else { -amp };
            }
        }
        if sigma > 0.0 {
            for v in cce.iter_mut() {
                let n: f32 = StandardNormal.sample(&mut rng);
                *v += sigma * n;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::AggregationLevel;
    use crate::grid::{cce_power, CandidateLocation};
    use statrs::distribution::{ContinuousCDF, Normal};

    fn one_occupied_cce(bits: &[u8]) -> PdcchSubframe {
        let mut sf = PdcchSubframe::empty(3, 2).unwrap();
        sf.place(&CandidateLocation::new(0, AggregationLevel::L1), bits, None)
            .unwrap();
        sf
    }

    fn bits(seed: u64) -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..72).map(|_| rng.random_range(0..2)).collect()
    }

    #[test]
    fn noiseless_keeps_signs() {
        let b = bits(1);
        let sf = one_occupied_cce(&b);
        let rx = apply_channel(&sf, &ChannelConfig::noiseless());
        for (v, &x) in rx.cce(0).iter().zip(&b) {
            assert_eq!(*v < 0.0, x == 1);
        }
        assert!(rx.cce(1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hard_decision_error_rate_matches_q_function() {
        let cfg = ChannelConfig {
            snr_db: 0.0,
            interference_prob: 0.0,
            ..ChannelConfig::noiseless()
        };
        let mut errors = 0usize;
        let mut total = 0usize;
        for ms in 0..1400u64 {
            let b = bits(ms);
            let mut sf = one_occupied_cce(&b);
            sf.ms = ms;
            let rx = apply_channel(&sf, &cfg);
            for (v, &x) in rx.cce(0).iter().zip(&b) {
                errors += ((*v < 0.0) != (x == 1)) as usize;
                total += 1;
            }
        }
        let std_normal = Normal::new(0.0, 1.0).unwrap();
        // amplitude 1 against unit noise: Q(1) = Q(sqrt(2 Es/N0)) with Es/N0 = 1/2
        let q = 1.0 - std_normal.cdf(1.0);
        let measured = errors as f64 / total as f64;
        assert!(
            (measured - q).abs() <= 0.15 * q,
            "measured {measured}, expected {q}"
        );
    }

    #[test]
    fn empty_cce_power_is_noise_variance() {
        let cfg = ChannelConfig {
            snr_db: 3.0,
            interference_prob: 0.0,
            ..ChannelConfig::noiseless()
        };
        let sigma2 = noise_sigma(3.0).powi(2);
        let loc = CandidateLocation::new(1, AggregationLevel::L1);
        let mut sum = 0.0;
        let trials = 10_000u64;
        for ms in 0..trials {
            let mut sf = one_occupied_cce(&bits(7));
            sf.ms = ms;
            sum += cce_power(&apply_channel(&sf, &cfg), &loc)[0] as f64;
        }
        let mean = sum / trials as f64;
        assert!((mean - sigma2).abs() <= 0.1 * sigma2, "{mean} vs {sigma2}");
    }

    #[test]
    fn occupied_cces_carry_more_power() {
        let cfg = ChannelConfig {
            snr_db: 0.0,
            interference_prob: 0.0,
            ..ChannelConfig::noiseless()
        };
        let (mut occ, mut emp) = (0.0, 0.0);
        for ms in 0..2000 {
            let mut sf = one_occupied_cce(&bits(ms));
            sf.ms = ms;
            let rx = apply_channel(&sf, &cfg);
            occ += cce_power(&rx, &CandidateLocation::new(0, AggregationLevel::L1))[0];
            emp += cce_power(&rx, &CandidateLocation::new(1, AggregationLevel::L1))[0];
        }
        assert!(occ > emp);
    }

    #[test]
    fn presets_degrade_in_order() {
        let c: Vec<ChannelConfig> = Preset::ALL.iter().map(|p| p.channel()).collect();
        for w in c.windows(2) {
            assert!(w[0].snr_db > w[1].snr_db);
            assert!(w[0].interference_prob <= w[1].interference_prob);
        }
    }

    #[test]
    fn deterministic_per_seed_and_ms() {
        let sf = one_occupied_cce(&bits(2));
        let cfg = Preset::Poor.channel();
        assert_eq!(apply_channel(&sf, &cfg), apply_channel(&sf, &cfg));
        let other = ChannelConfig {
            seed: 1,
            ..cfg.clone()
        };
        assert_ne!(apply_channel(&sf, &cfg), apply_channel(&sf, &other));
    }

    #[test]
    fn per_ue_snr_uses_owner_snr() {
        let mut sf = PdcchSubframe::empty(0, 1).unwrap();
        sf.place(
            &CandidateLocation::new(0, AggregationLevel::L1),
            &[0; 72],
            Some(f32::INFINITY),
        )
        .unwrap();
        let cfg = ChannelConfig {
            snr_db: -5.0,
            per_ue_snr: true,
            ..ChannelConfig::noiseless()
        };
        let rx = apply_channel(&sf, &cfg);
        assert!(rx.cce(0).iter().all(|&v| v == 1.0));
    }

    #[test]
    fn validation() {
        assert!(ChannelConfig {
            interference_prob: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(ChannelConfig {
            rho: -1.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!("poor".parse::<Preset>().is_ok());
        assert!("awful".parse::<Preset>().is_err());
    }
}
