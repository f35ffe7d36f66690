//! Depth-first decoding with shortcut acceptance and histogram promotion.

use std::collections::BTreeSet;

use super::{overlaps_any, rar_track, Accepted, DciCandidate, DecodeCache, Decoder, RntiOrigin};
use crate::codec::{AggregationLevel, Rnti};
use crate::grid::{CandidateLocation, PdcchSubframe};
use crate::sim::RntiClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Visit {
    Nothing,
    Accepted,
    /// The half-location matched its parent; the parent was accepted.
    ParentAccepted,
}

#[derive(Default)]
struct Run {
    accepted: Vec<Accepted>,
    /// Coherent candidates with unknown RNTIs, in traversal order.
    pending: Vec<DciCandidate>,
}

/// Largest aligned blocks tiling the grid: L = 8 where it fits, then the
/// biggest level that fits the remainder.
pub(super) fn root_blocks(n_cce: usize) -> Vec<CandidateLocation> {
    let mut roots = Vec::new();
    let mut start = 0;
    while start < n_cce {
        let level = AggregationLevel::DESCENDING
            .into_iter()
            .find(|l| start % l.cces() == 0 && start + l.cces() <= n_cce)
            .expect("L = 1 always fits");
        roots.push(CandidateLocation::new(start as u16, level));
        start += level.cces();
    }
    roots
}

impl Decoder {
    pub(super) fn falcon(&mut self, sf: &PdcchSubframe, cache: &mut DecodeCache) -> Vec<Accepted> {
        let mut run = Run::default();
        for root in root_blocks(sf.n_cce) {
            self.visit(sf, cache, root, None, &mut run);
        }

        // One histogram entry per (location, RNTI) this subframe.
        let ms = sf.ms;
        let mut seen: BTreeSet<(CandidateLocation, Rnti)> = BTreeSet::new();
        let mut promoted: BTreeSet<Rnti> = BTreeSet::new();
        for cand in &run.pending {
            if !seen.insert((cand.loc, cand.rnti)) {
                continue;
            }
            let count = self.state.histogram.record(ms, cand.rnti);
            if self.state.histogram.reaches_threshold(count) && promoted.insert(cand.rnti) {
                self.state
                    .active
                    .insert(cand.rnti, ms, RntiOrigin::Histogram);
                self.stats.histogram_promotions += 1;
            }
        }
        for cand in run.pending {
            if promoted.contains(&cand.rnti) && !overlaps_any(&cand.loc, &run.accepted) {
                let cand = self.settle(cand, sf);
                if !overlaps_any(&cand.loc, &run.accepted) {
                    run.accepted.push(Accepted {
                        cand,
                        origin: RntiOrigin::Histogram,
                    });
                }
            }
        }

        let tracked = self.state.active.live(ms).len();
        self.state.rar_malformed +=
            rar_track(&run.accepted, &mut self.state.active, ms, self.cfg.n_rb);
        self.stats.rar_tracked += self.state.active.live(ms).len().saturating_sub(tracked) as u64;
        run.accepted
    }

    fn visit(
        &mut self,
        sf: &PdcchSubframe,
        cache: &mut DecodeCache,
        loc: CandidateLocation,
        parent: Option<&[DciCandidate]>,
        run: &mut Run,
    ) -> Visit {
        if overlaps_any(&loc, &run.accepted) {
            return Visit::Nothing;
        }
        let mut rejected: Vec<DciCandidate> = Vec::new();
        if cache.gate(sf, &loc, self.cfg.power_gate_threshold) {
            let cands: Vec<DciCandidate> = self
                .sizes
                .clone()
                .into_iter()
                .map(|size| self.decode(sf, cache, &loc, size))
                .collect();
            // Only the half's best-fitting size may confirm the parent: a
            // codeword decoded at the wrong size gives repeatable garbage.
            let best = cands
                .iter()
                .reduce(|a, b| if b.metric > a.metric { b } else { a })
                .expect("at least one size");
            if let Some(p) = parent.and_then(|p| {
                p.iter()
                    .find(|p| p.rnti == best.rnti && p.payload == best.payload)
            }) {
                let mut parent_cand = self.settle(p.clone(), sf);
                parent_cand.halved = true;
                self.state
                    .active
                    .insert(parent_cand.rnti, sf.ms, RntiOrigin::Shortcut);
                self.stats.shortcut_accepts += 1;
                run.accepted.push(Accepted {
                    cand: parent_cand,
                    origin: RntiOrigin::Shortcut,
                });
                return Visit::ParentAccepted;
            }
            for cand in cands {
                if !self.coherent(&cand, sf) {
                    continue;
                }
                if let Some(origin) = self.knowledge(cand.rnti, sf.ms) {
                    self.state.active.touch(cand.rnti, sf.ms);
                    let cand = self.settle(cand, sf);
                    let settled = cand.loc;
                    run.accepted.push(Accepted { cand, origin });
                    self.visit_uncovered(sf, cache, loc, settled, run);
                    return Visit::Accepted;
                }
                if RntiClass::of(cand.rnti) == RntiClass::CRnti {
                    rejected.push(cand);
                }
            }
        }

        let mut found = false;
        if let Some((left, right)) = loc.halves() {
            match self.visit(sf, cache, left, Some(&rejected), run) {
                Visit::ParentAccepted => {
                    let settled = run.accepted.last().expect("parent was accepted").cand.loc;
                    self.visit_uncovered(sf, cache, loc, settled, run);
                    return Visit::Accepted;
                }
                Visit::Accepted => found = true,
                Visit::Nothing => {}
            }
            found |= self.visit(sf, cache, right, None, run) == Visit::Accepted;
        }
        run.pending.extend(rejected);
        if found {
            Visit::Accepted
        } else {
            Visit::Nothing
        }
    }

    /// Visits the parts of `outer` to the right of the prefix `inner` that an
    /// accept settled into.
    fn visit_uncovered(
        &mut self,
        sf: &PdcchSubframe,
        cache: &mut DecodeCache,
        outer: CandidateLocation,
        inner: CandidateLocation,
        run: &mut Run,
    ) {
        let mut cur = inner;
        while cur.level < outer.level {
            let sibling = CandidateLocation::new(cur.start + cur.level.cces() as u16, cur.level);
            self.visit(sf, cache, sibling, None, run);
            cur = CandidateLocation::new(cur.start, cur.level.double().expect("below outer level"));
        }
    }
}
