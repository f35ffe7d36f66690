//! Candidate decoding shared by all pipelines.

use std::collections::HashMap;
use std::ops::Range;

use crate::codec::{AggregationLevel, Codec, PayloadBits, Rnti};
use crate::dci::{self, Allocation, DciFormat};
use crate::grid::{
    cce_power, coherence_check, in_common_space, in_ue_space, CandidateLocation, PdcchSubframe,
    SearchSpaceConfig, REFERENCE_POWER,
};
use crate::sim::RntiClass;

/// One trial decode of a location for one payload size.
#[derive(Clone, Debug, PartialEq)]
pub struct DciCandidate {
    pub loc: CandidateLocation,
    /// Computed CRC XOR received CRC field.
    pub rnti: Rnti,
    pub payload: PayloadBits,
    /// `None` when the payload size is not configured for the bandwidth.
    pub format: Option<DciFormat>,
    /// `None` when the RIV field holds no valid allocation.
    pub allocation: Option<Allocation>,
    pub metric: f32,
    /// Accepted through a matching half-location decode.
    pub halved: bool,
}

impl DciCandidate {
    pub fn size(&self) -> usize {
        self.payload.len()
    }
}

/// Power gate: every covered CCE must reach `threshold` times the reference.
pub fn power_gate(sf: &PdcchSubframe, loc: &CandidateLocation, threshold: f32) -> bool {
    cce_power(sf, loc)
        .iter()
        .all(|&p| p >= threshold * REFERENCE_POWER)
}

pub fn try_decode(
    sf: &PdcchSubframe,
    loc: &CandidateLocation,
    payload_len: usize,
    n_rb: u16,
    codec: &Codec,
) -> DciCandidate {
    let dec = codec
        .decode_dci(sf.location_soft(loc), payload_len)
        .expect("location and size are valid by construction");
    let parsed = dci::parse_payload(&dec.payload, n_rb, codec.config());
    DciCandidate {
        loc: *loc,
        rnti: dec.rnti,
        format: parsed.map(|p| p.format),
        allocation: parsed.and_then(|p| p.allocation),
        payload: dec.payload,
        metric: dec.metric,
        halved: false,
    }
}

/// Fraction of hard-sliced received bits matching the re-encoded candidate.
/// A soft value of exactly zero counts as a mismatch.
pub fn reencode_match(cand: &DciCandidate, sf: &PdcchSubframe, codec: &Codec) -> f32 {
    let Ok(bits) = codec.encode_dci(&cand.payload, cand.rnti, cand.loc.level) else {
        return 0.0;
    };
    let rx = sf.location_soft(&cand.loc);
    let matches = bits
        .iter()
        .zip(rx)
        .filter(|&(&b, &y)| (b == 0 && y > 0.0) || (b == 1 && y < 0.0))
        .count();
    matches as f32 / bits.len() as f32
}

/// Hard-decision agreement below which received bits are taken to be
/// unrelated to a codeword.
pub const SETTLE_AGREEMENT: f32 = 0.7;

/// Circular repetition lets a DCI sent at level L decode from any larger
/// location starting at the same CCE. Returns the longest prefix of the
/// candidate's location over which the received bits agree with it.
pub fn settle_location(
    cand: &DciCandidate,
    sf: &PdcchSubframe,
    codec: &Codec,
) -> CandidateLocation {
    let Ok(bits) = codec.encode_dci(&cand.payload, cand.rnti, cand.loc.level) else {
        return cand.loc;
    };
    let rx = sf.location_soft(&cand.loc);
    let agreement = |r: Range<usize>| {
        let n = r.len();
        let hits = bits[r.clone()]
            .iter()
            .zip(&rx[r])
            .filter(|&(&b, &y)| (b == 0 && y > 0.0) || (b == 1 && y < 0.0))
            .count();
        hits as f32 / n as f32
    };
    // grow from one CCE while each doubling still agrees
    let mut level = AggregationLevel::L1;
    if agreement(0..level.bits()) < SETTLE_AGREEMENT {
        return cand.loc;
    }
    while level < cand.loc.level {
        let next = level.double().expect("below the candidate level");
        if agreement(level.bits()..next.bits()) < SETTLE_AGREEMENT {
            break;
        }
        level = next;
    }
    CandidateLocation::new(cand.loc.start, level)
}

pub fn validate_reencode(
    cand: &DciCandidate,
    sf: &PdcchSubframe,
    codec: &Codec,
    threshold: f32,
) -> bool {
    reencode_match(cand, sf, codec) >= threshold
}

/// Search-space coherence refined by RNTI class: special RNTIs use the
/// common space with the compact downlink format only, format 2A is confined
/// to the UE-specific space, reserved values never validate.
pub fn class_coherent(
    cand: &DciCandidate,
    subframe: u8,
    n_cce: usize,
    search: &SearchSpaceConfig,
) -> bool {
    let Some(format) = cand.format else {
        return false;
    };
    match RntiClass::of(cand.rnti) {
        RntiClass::Reserved => false,
        class if class.is_special() => {
            format == DciFormat::Format1A && in_common_space(&cand.loc, n_cce)
        }
        _ if format == DciFormat::Format2A => {
            in_ue_space(cand.rnti, &cand.loc, subframe, n_cce, search)
        }
        _ => coherence_check(cand.rnti, &cand.loc, subframe, n_cce, search),
    }
}

/// Per-subframe memo of decodes and re-encoding results. Both are pure
/// functions of the received soft values, so pipelines that see the same
/// subframe may share one cache.
#[derive(Debug, Default)]
pub struct DecodeCache {
    ms: Option<u64>,
    decodes: HashMap<(CandidateLocation, usize), DciCandidate>,
    power: HashMap<CandidateLocation, bool>,
    reencode: HashMap<(CandidateLocation, usize), f32>,
    /// Viterbi runs actually performed.
    pub viterbi_runs: u64,
}

impl DecodeCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn sync(&mut self, sf: &PdcchSubframe) {
        if self.ms != Some(sf.ms) {
            self.ms = Some(sf.ms);
            self.decodes.clear();
            self.power.clear();
            self.reencode.clear();
        }
    }

    pub fn decode(
        &mut self,
        sf: &PdcchSubframe,
        loc: &CandidateLocation,
        payload_len: usize,
        n_rb: u16,
        codec: &Codec,
    ) -> DciCandidate {
        self.sync(sf);
        if let Some(c) = self.decodes.get(&(*loc, payload_len)) {
            return c.clone();
        }
        self.viterbi_runs += 1;
        let c = try_decode(sf, loc, payload_len, n_rb, codec);
        self.decodes.insert((*loc, payload_len), c.clone());
        c
    }

    pub fn gate(&mut self, sf: &PdcchSubframe, loc: &CandidateLocation, threshold: f32) -> bool {
        self.sync(sf);
        *self
            .power
            .entry(*loc)
            .or_insert_with(|| power_gate(sf, loc, threshold))
    }

    pub fn reencode(&mut self, cand: &DciCandidate, sf: &PdcchSubframe, codec: &Codec) -> f32 {
        self.sync(sf);
        *self
            .reencode
            .entry((cand.loc, cand.size()))
            .or_insert_with(|| reencode_match(cand, sf, codec))
    }
}
