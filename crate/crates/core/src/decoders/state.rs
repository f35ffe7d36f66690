//! Decoder-side RNTI knowledge: the active set and the histogram of
//! uncertain RNTIs.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::codec::Rnti;

/// How the decoder came to trust an RNTI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RntiOrigin {
    Rar,
    Histogram,
    Shortcut,
    /// SI, paging and RA identities are known a priori.
    Special,
    /// Accepted by re-encoding without prior knowledge (OWL, LTEye).
    Reencode,
}

impl RntiOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            RntiOrigin::Rar => "rar",
            RntiOrigin::Histogram => "histogram",
            RntiOrigin::Shortcut => "shortcut",
            RntiOrigin::Special => "special",
            RntiOrigin::Reencode => "reencode",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActiveEntry {
    pub last_seen: u64,
    pub origin: RntiOrigin,
}

/// RNTIs considered live, each expiring `expiry_ms` after it was last seen.
#[derive(Clone, Debug)]
pub struct ActiveRntiSet {
    entries: BTreeMap<Rnti, ActiveEntry>,
    pub expiry_ms: u64,
}

impl ActiveRntiSet {
    pub fn new(expiry_ms: u64) -> Self {
        Self {
            entries: BTreeMap::new(),
            expiry_ms,
        }
    }

    pub fn get(&self, rnti: Rnti, now: u64) -> Option<ActiveEntry> {
        self.entries
            .get(&rnti)
            .filter(|e| now.saturating_sub(e.last_seen) <= self.expiry_ms)
            .copied()
    }

    pub fn contains(&self, rnti: Rnti, now: u64) -> bool {
        self.get(rnti, now).is_some()
    }

    /// Adds `rnti`, or refreshes it keeping the original origin.
    pub fn insert(&mut self, rnti: Rnti, now: u64, origin: RntiOrigin) {
        self.entries
            .entry(rnti)
            .and_modify(|e| {
                if now.saturating_sub(e.last_seen) > self.expiry_ms {
                    e.origin = origin;
                }
                e.last_seen = e.last_seen.max(now);
            })
            .or_insert(ActiveEntry {
                last_seen: now,
                origin,
            });
    }

    pub fn touch(&mut self, rnti: Rnti, now: u64) {
        if let Some(e) = self.entries.get_mut(&rnti) {
            e.last_seen = e.last_seen.max(now);
        }
    }

    pub fn purge(&mut self, now: u64) {
        let expiry = self.expiry_ms;
        self.entries
            .retain(|_, e| now.saturating_sub(e.last_seen) <= expiry);
    }

    /// Live RNTIs in ascending order.
    pub fn live(&self, now: u64) -> Vec<Rnti> {
        self.entries
            .iter()
            .filter(|(_, e)| now.saturating_sub(e.last_seen) <= self.expiry_ms)
            .map(|(r, _)| *r)
            .collect()
    }
}

/// Sliding-window occurrence counts. An occurrence at `t` is inside the
/// window at `now` when `now - t <= window_ms`.
#[derive(Clone, Debug)]
pub struct RntiHistogram {
    pub window_ms: u64,
    pub threshold: usize,
    ring: VecDeque<(u64, Rnti)>,
    counts: BTreeMap<Rnti, usize>,
}

impl RntiHistogram {
    pub fn new(window_ms: u64, threshold: usize) -> Self {
        Self {
            window_ms,
            threshold,
            ring: VecDeque::new(),
            counts: BTreeMap::new(),
        }
    }

    fn evict(&mut self, now: u64) {
        while let Some(&(t, r)) = self.ring.front() {
            if now.saturating_sub(t) <= self.window_ms {
                break;
            }
            self.ring.pop_front();
            let c = self.counts.get_mut(&r).expect("counted");
            *c -= 1;
            if *c == 0 {
                self.counts.remove(&r);
            }
        }
    }

    /// Records one occurrence and returns the count inside the window.
    /// Occurrences must arrive in non-decreasing time order.
    pub fn record(&mut self, now: u64, rnti: Rnti) -> usize {
        self.evict(now);
        self.ring.push_back((now, rnti));
        let c = self.counts.entry(rnti).or_insert(0);
        *c += 1;
        *c
    }

    pub fn count(&mut self, now: u64, rnti: Rnti) -> usize {
        self.evict(now);
        self.counts.get(&rnti).copied().unwrap_or(0)
    }

    pub fn reaches_threshold(&self, count: usize) -> bool {
        count >= self.threshold
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }
}

/// Per-stream decoder state.
#[derive(Clone, Debug)]
pub struct RntiState {
    pub active: ActiveRntiSet,
    pub histogram: RntiHistogram,
    /// RAR payloads whose announced value was not a C-RNTI.
    pub rar_malformed: usize,
}

impl RntiState {
    pub fn new(expiry_ms: u64, window_ms: u64, threshold: usize) -> Self {
        Self {
            active: ActiveRntiSet::new(expiry_ms),
            histogram: RntiHistogram::new(window_ms, threshold),
            rar_malformed: 0,
        }
    }
}
