//! Blind decoders.
//!
//! All three pipelines decode candidate locations for every configured
//! payload size and require search-space coherence. They differ in how an
//! unknown RNTI earns trust:
//!
//! | technique        | FALCON | OWL | LTEye |
//! |------------------|--------|-----|-------|
//! | power gate       | yes    | yes | yes   |
//! | coherence        | yes    | yes | yes   |
//! | RAR tracking     | yes    | yes | no    |
//! | re-encoding      | no     | yes | yes   |
//! | shortcut decode  | yes    | no  | no    |
//! | RNTI histogram   | yes    | no  | no    |
//!
//! Accepted candidates are shrunk to the extent they were sent at, see
//! [`settle_location`].

mod candidate;
mod falcon;
mod owl;
mod state;

use serde::{Deserialize, Serialize};

pub use candidate::{
    class_coherent, power_gate, reencode_match, settle_location, try_decode, validate_reencode,
    DciCandidate, DecodeCache,
};
pub use state::{ActiveEntry, ActiveRntiSet, RntiHistogram, RntiOrigin, RntiState};

use crate::codec::{AggregationLevel, Codec, CodecConfig, Rnti};
use crate::dci::{self, Direction};
use crate::error::{Error, Result};
use crate::grid::{CandidateLocation, PdcchSubframe, SearchSpaceConfig};
use crate::sim::RntiClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Falcon,
    Owl,
    Lteye,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [Pipeline::Falcon, Pipeline::Owl, Pipeline::Lteye];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Falcon => "falcon",
            Pipeline::Owl => "owl",
            Pipeline::Lteye => "lteye",
        }
    }
}

impl std::str::FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown pipeline {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub pipeline: Pipeline,
    /// Minimum CCE power as a fraction of the reference.
    pub power_gate_threshold: f32,
    pub reencode_match_threshold: f32,
    pub histogram_window_ms: u64,
    pub histogram_threshold: usize,
    pub active_expiry_ms: u64,
    pub n_rb: u16,
}

impl DecoderConfig {
    pub fn new(pipeline: Pipeline) -> Self {
        Self {
            pipeline,
            power_gate_threshold: 0.5,
            reencode_match_threshold: 0.97,
            histogram_window_ms: 200,
            histogram_threshold: 5,
            active_expiry_ms: 10_000,
            n_rb: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f32| v > 0.0 && v <= 1.0;
        if !unit(self.power_gate_threshold) || !unit(self.reencode_match_threshold) {
            return Err(Error::Config(
                "decoder thresholds must lie in (0, 1]".into(),
            ));
        }
        if self.histogram_threshold == 0 || self.histogram_window_ms == 0 {
            return Err(Error::Config(
                "histogram window and threshold must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// An accepted candidate and the reason its RNTI was trusted.
#[derive(Clone, Debug, PartialEq)]
pub struct Accepted {
    pub cand: DciCandidate,
    pub origin: RntiOrigin,
}

/// One decoded DCI as written to traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodedDci {
    pub ms: u64,
    pub dir: Direction,
    pub rnti: Rnti,
    pub rnti_origin: RntiOrigin,
    pub loc_start: u16,
    #[serde(rename = "loc_L")]
    pub loc_l: AggregationLevel,
    /// Zero-length when the allocation field was not a valid RIV.
    pub rb_start: u16,
    pub rb_len: u16,
    pub pipeline: Pipeline,
}

impl DecodedDci {
    pub fn location(&self) -> CandidateLocation {
        CandidateLocation::new(self.loc_start, self.loc_l)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecoderStats {
    pub subframes: u64,
    pub decode_requests: u64,
    pub reencode_calls: u64,
    pub shortcut_accepts: u64,
    pub histogram_promotions: u64,
    pub rar_tracked: u64,
}

/// A stateful decoder for one stream.
pub struct Decoder {
    pub cfg: DecoderConfig,
    codec: Codec,
    search: SearchSpaceConfig,
    sizes: Vec<usize>,
    pub state: RntiState,
    pub stats: DecoderStats,
}

impl Decoder {
    pub fn new(cfg: DecoderConfig) -> Result<Self> {
        cfg.validate()?;
        let codec = Codec::new(CodecConfig::default())?;
        let sizes = codec.config().payload_sizes(cfg.n_rb);
        if sizes.is_empty() {
            return Err(Error::Config(format!("no DCI sizes for {} RBs", cfg.n_rb)));
        }
        let state = RntiState::new(
            cfg.active_expiry_ms,
            cfg.histogram_window_ms,
            cfg.histogram_threshold,
        );
        Ok(Self {
            cfg,
            codec,
            search: SearchSpaceConfig::default(),
            sizes,
            state,
            stats: Default::default(),
        })
    }

    pub fn pipeline(&self) -> Pipeline {
        self.cfg.pipeline
    }

    /// Decodes one subframe, carrying state forward. `cache` may be shared
    /// with other decoders looking at the same subframe.
    pub fn decode_subframe(
        &mut self,
        sf: &PdcchSubframe,
        cache: &mut DecodeCache,
    ) -> Vec<Accepted> {
        self.stats.subframes += 1;
        if sf.ms.is_multiple_of(1000) {
            self.state.active.purge(sf.ms);
        }
        match self.cfg.pipeline {
            Pipeline::Falcon => self.falcon(sf, cache),
            Pipeline::Owl => self.owl(sf, cache, true),
            Pipeline::Lteye => self.owl(sf, cache, false),
        }
    }

    /// Trace records for a subframe's accepted candidates.
    pub fn records(&self, ms: u64, accepted: &[Accepted]) -> Vec<DecodedDci> {
        accepted
            .iter()
            .filter_map(|a| {
                let format = a.cand.format?;
                let alloc = a.cand.allocation.unwrap_or(dci::Allocation {
                    rb_start: 0,
                    rb_len: 0,
                });
                Some(DecodedDci {
                    ms,
                    dir: format.direction(),
                    rnti: a.cand.rnti,
                    rnti_origin: a.origin,
                    loc_start: a.cand.loc.start,
                    loc_l: a.cand.loc.level,
                    rb_start: alloc.rb_start,
                    rb_len: alloc.rb_len,
                    pipeline: self.cfg.pipeline,
                })
            })
            .collect()
    }

    /// Why `rnti` is already trusted, if it is.
    fn knowledge(&self, rnti: Rnti, now: u64) -> Option<RntiOrigin> {
        match RntiClass::of(rnti) {
            c if c.is_special() => Some(RntiOrigin::Special),
            RntiClass::CRnti => self.state.active.get(rnti, now).map(|e| e.origin),
            _ => None,
        }
    }

    fn coherent(&self, cand: &DciCandidate, sf: &PdcchSubframe) -> bool {
        class_coherent(cand, sf.subframe(), sf.n_cce, &self.search)
    }

    /// Shrinks an accepted candidate to the extent it was transmitted at,
    /// when that extent is itself a coherent location.
    fn settle(&self, mut cand: DciCandidate, sf: &PdcchSubframe) -> DciCandidate {
        let loc = settle_location(&cand, sf, &self.codec);
        if loc != cand.loc {
            let original = std::mem::replace(&mut cand.loc, loc);
            if !self.coherent(&cand, sf) {
                cand.loc = original;
            }
        }
        cand
    }

    fn decode(
        &mut self,
        sf: &PdcchSubframe,
        cache: &mut DecodeCache,
        loc: &CandidateLocation,
        size: usize,
    ) -> DciCandidate {
        self.stats.decode_requests += 1;
        cache.decode(sf, loc, size, self.cfg.n_rb, &self.codec)
    }
}

/// Adds C-RNTIs announced by accepted random access responses to the active
/// set. Returns the number of malformed announcements.
pub fn rar_track(accepted: &[Accepted], active: &mut ActiveRntiSet, ms: u64, n_rb: u16) -> usize {
    let mut malformed = 0;
    for a in accepted {
        if RntiClass::of(a.cand.rnti) != RntiClass::RandomAccess {
            continue;
        }
        match dci::extract_rar_rnti(&a.cand.payload, n_rb) {
            Some(r) if RntiClass::of(r) == RntiClass::CRnti => {
                active.insert(r, ms, RntiOrigin::Rar)
            }
            _ => malformed += 1,
        }
    }
    malformed
}

fn overlaps_any(loc: &CandidateLocation, accepted: &[Accepted]) -> bool {
    accepted.iter().any(|a| a.cand.loc.overlaps(loc))
}

/// Runs one pipeline over a subframe stream.
pub fn decode_stream<I>(subframes: I, cfg: &DecoderConfig) -> Result<Vec<DecodedDci>>
where
    I: IntoIterator<Item = PdcchSubframe>,
{
    let mut dec = Decoder::new(cfg.clone())?;
    let mut cache = DecodeCache::new();
    let mut out = Vec::new();
    for sf in subframes {
        let acc = dec.decode_subframe(&sf, &mut cache);
        out.extend(dec.records(sf.ms, &acc));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
