//! Breadth-first decoding with re-encoding validation (OWL, and LTEye
//! without RAR tracking).

use super::{overlaps_any, rar_track, Accepted, DecodeCache, Decoder, RntiOrigin};
use crate::grid::{enumerate_candidates, PdcchSubframe};

impl Decoder {
    pub(super) fn owl(
        &mut self,
        sf: &PdcchSubframe,
        cache: &mut DecodeCache,
        track_rar: bool,
    ) -> Vec<Accepted> {
        let mut accepted: Vec<Accepted> = Vec::new();
        for loc in enumerate_candidates(sf.n_cce) {
            if overlaps_any(&loc, &accepted) || !cache.gate(sf, &loc, self.cfg.power_gate_threshold)
            {
                continue;
            }
            for size in self.sizes.clone() {
                let cand = self.decode(sf, cache, &loc, size);
                if !self.coherent(&cand, sf) {
                    continue;
                }
                let origin = match self.knowledge(cand.rnti, sf.ms) {
                    Some(o) => Some(o),
                    None => {
                        self.stats.reencode_calls += 1;
                        let m = cache.reencode(&cand, sf, &self.codec);
                        (m >= self.cfg.reencode_match_threshold).then_some(RntiOrigin::Reencode)
                    }
                };
                if let Some(origin) = origin {
                    let cand = self.settle(cand, sf);
                    self.state.active.touch(cand.rnti, sf.ms);
                    accepted.push(Accepted { cand, origin });
                    break;
                }
            }
        }
        if track_rar {
            self.state.rar_malformed +=
                rar_track(&accepted, &mut self.state.active, sf.ms, self.cfg.n_rb);
        }
        accepted
    }
}
