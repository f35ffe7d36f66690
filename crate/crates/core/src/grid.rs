//! CCE grid of one control region, search spaces and candidate enumeration.

use serde::{Deserialize, Serialize};

use crate::codec::{AggregationLevel, Rnti, CCE_BITS};
use crate::error::{invalid, Result};

/// Power of a noiseless occupied CCE (unit-amplitude antipodal symbols).
pub const REFERENCE_POWER: f32 = 1.0;

/// One blind-decoding attempt: `level` consecutive CCEs from `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateLocation {
    #[serde(rename = "start_cce")]
    pub start: u16,
    #[serde(rename = "L")]
    pub level: AggregationLevel,
}

impl CandidateLocation {
    pub fn new(start: u16, level: AggregationLevel) -> Self {
        Self { start, level }
    }

    pub fn end(&self) -> usize {
        self.start as usize + self.level.cces()
    }

    pub fn fits(&self, n_cce: usize) -> bool {
        (self.start as usize).is_multiple_of(self.level.cces()) && self.end() <= n_cce
    }

    pub fn overlaps(&self, other: &CandidateLocation) -> bool {
        (self.start as usize) < other.end() && (other.start as usize) < self.end()
    }

    pub fn cces(&self) -> std::ops::Range<usize> {
        self.start as usize..self.end()
    }

    /// Left and right halves, or `None` at L = 1.
    pub fn halves(&self) -> Option<(CandidateLocation, CandidateLocation)> {
        let half = self.level.half()?;
        let left = CandidateLocation::new(self.start, half);
        let right = CandidateLocation::new(self.start + half.cces() as u16, half);
        Some((left, right))
    }
}

/// The control region of one subframe.
#[derive(Clone, Debug, PartialEq)]
pub struct PdcchSubframe {
    /// Absolute millisecond index; the subframe number is `ms % 10`.
    pub ms: u64,
    pub n_cce: usize,
    /// `n_cce * 72` soft values, CCE after CCE.
    pub soft: Vec<f32>,
    /// Ground truth occupancy, filled on the simulator side only.
    pub occupied: Vec<bool>,
    /// SNR of the UE owning each occupied CCE, for per-UE channel scaling.
    pub owner_snr_db: Vec<Option<f32>>,
}

impl PdcchSubframe {
    /// An all-empty region (soft values zero).
    pub fn empty(ms: u64, n_cce: usize) -> Result<Self> {
        if n_cce == 0 {
            return Err(invalid("n_cce must be positive"));
        }
        Ok(Self {
            ms,
            n_cce,
            soft: vec![0.0; n_cce * CCE_BITS],
            occupied: vec![false; n_cce],
            owner_snr_db: vec![None; n_cce],
        })
    }

    /// A received region without ground truth.
    pub fn from_soft(ms: u64, n_cce: usize, soft: Vec<f32>) -> Result<Self> {
        if n_cce == 0 || soft.len() != n_cce * CCE_BITS {
            return Err(invalid(format!(
                "{} soft values do not fill {n_cce} CCEs",
                soft.len()
            )));
        }
        Ok(Self {
            ms,
            n_cce,
            soft,
            occupied: Vec::new(),
            owner_snr_db: Vec::new(),
        })
    }

    pub fn subframe(&self) -> u8 {
        (self.ms % 10) as u8
    }

    pub fn cce(&self, i: usize) -> &[f32] {
        &self.soft[i * CCE_BITS..(i + 1) * CCE_BITS]
    }

    pub fn location_soft(&self, loc: &CandidateLocation) -> &[f32] {
        &self.soft[loc.start as usize * CCE_BITS..loc.end() * CCE_BITS]
    }

    /// Writes hard bits as unit soft symbols into `loc` and marks it occupied.
    pub fn place(
        &mut self,
        loc: &CandidateLocation,
        bits: &[u8],
        snr_db: Option<f32>,
    ) -> Result<()> {
        if !loc.fits(self.n_cce) || bits.len() != loc.level.bits() {
            return Err(invalid("encoded block does not match its location"));
        }
        let dst = &mut self.soft[loc.start as usize * CCE_BITS..loc.end() * CCE_BITS];
        for (d, &b) in dst.iter_mut().zip(bits) {
            *d = if b == 0 { 1.0 } else { -1.0 };
        }
        for i in loc.cces() {
            self.occupied[i] = true;
            self.owner_snr_db[i] = snr_db;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpaceConfig {
    pub hash_multiplier: u32,
    pub hash_modulus: u32,
    /// Candidates per level, indexed like [`AggregationLevel::index`].
    pub ue_candidates: [usize; 4],
    pub common_candidates: [usize; 4],
}

impl Default for SearchSpaceConfig {
    fn default() -> Self {
        Self {
            hash_multiplier: 39827,
            hash_modulus: 65537,
            ue_candidates: [6, 6, 2, 2],
            common_candidates: [0, 0, 4, 2],
        }
    }
}

impl SearchSpaceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ue_candidates.iter().sum::<usize>() != 16 {
            return Err(crate::Error::Config(
                "UE-specific space must hold 16 candidates".into(),
            ));
        }
        if self.common_candidates.iter().sum::<usize>() != 6 {
            return Err(crate::Error::Config(
                "common space must hold 6 candidates".into(),
            ));
        }
        if self.hash_modulus < 2 {
            return Err(crate::Error::Config("hash modulus must exceed 1".into()));
        }
        Ok(())
    }

    /// Y_k for subframe `k`, starting from Y_{-1} = rnti.
    pub fn hash(&self, rnti: Rnti, subframe: u8) -> u32 {
        let (a, d) = (self.hash_multiplier as u64, self.hash_modulus as u64);
        let mut y = rnti.0 as u64;
        for _ in 0..=subframe {
            y = a * y % d;
        }
        y as u32
    }
}

pub fn ue_search_space(
    rnti: Rnti,
    subframe: u8,
    n_cce: usize,
    cfg: &SearchSpaceConfig,
) -> Result<Vec<CandidateLocation>> {
    if rnti.0 == 0 {
        return Err(invalid("RNTI 0 has no search space"));
    }
    if n_cce < 1 {
        return Err(invalid("n_cce must be positive"));
    }
    if subframe > 9 {
        return Err(invalid(format!("subframe {subframe} outside 0..=9")));
    }
    let y = cfg.hash(rnti, subframe) as usize;
    let mut out: Vec<CandidateLocation> = Vec::with_capacity(16);
    for level in AggregationLevel::ASCENDING {
        let l = level.cces();
        let q = n_cce / l;
        if q == 0 {
            continue;
        }
        for m in 0..cfg.ue_candidates[level.index()] {
            let loc = CandidateLocation::new((l * ((y + m) % q)) as u16, level);
            if !out.contains(&loc) {
                out.push(loc);
            }
        }
    }
    Ok(out)
}

pub fn common_search_space(n_cce: usize) -> Vec<CandidateLocation> {
    use AggregationLevel::{L4, L8};
    [(0, L4), (4, L4), (8, L4), (12, L4), (0, L8), (8, L8)]
        .into_iter()
        .map(|(s, l)| CandidateLocation::new(s, l))
        .filter(|loc| loc.fits(n_cce))
        .collect()
}

pub fn in_common_space(loc: &CandidateLocation, n_cce: usize) -> bool {
    use AggregationLevel::*;
    loc.fits(n_cce) && loc.end() <= 16 && matches!(loc.level, L4 | L8)
}

/// Whether `loc` lies in the UE-specific space of `rnti`, computed directly
/// from the hash instead of listing the space.
pub fn in_ue_space(
    rnti: Rnti,
    loc: &CandidateLocation,
    subframe: u8,
    n_cce: usize,
    cfg: &SearchSpaceConfig,
) -> bool {
    if rnti.0 == 0 || !loc.fits(n_cce) {
        return false;
    }
    let l = loc.level.cces();
    let q = n_cce / l;
    let idx = loc.start as usize / l;
    let y = cfg.hash(rnti, subframe) as usize % q;
    (idx + q - y) % q < cfg.ue_candidates[loc.level.index()]
}

pub fn coherence_check(
    rnti: Rnti,
    loc: &CandidateLocation,
    subframe: u8,
    n_cce: usize,
    cfg: &SearchSpaceConfig,
) -> bool {
    in_common_space(loc, n_cce) || in_ue_space(rnti, loc, subframe, n_cce, cfg)
}

/// Every aligned location, L = 8 first, then by start.
pub fn enumerate_candidates(n_cce: usize) -> Vec<CandidateLocation> {
    AggregationLevel::DESCENDING
        .into_iter()
        .flat_map(|level| {
            let l = level.cces();
            (0..n_cce / l).map(move |i| CandidateLocation::new((i * l) as u16, level))
        })
        .collect()
}

/// Mean squared soft value of each covered CCE, relative to the reference.
pub fn cce_power(sf: &PdcchSubframe, loc: &CandidateLocation) -> Vec<f32> {
    loc.cces()
        .map(|i| {
            let cce = sf.cce(i);
            cce.iter().map(|v| v * v).sum::<f32>() / cce.len() as f32 / REFERENCE_POWER
        })
        .collect()
}
