//! Ground-truth cell scheduler.
//!
//! Each millisecond new UEs arrive (Poisson), receive the next sequential
//! C-RNTI through a random access response, and are then scheduled per
//! direction with their own Bernoulli activity. Every grant is encoded into a
//! free location of the UE's search space; grants that find no room are
//! dropped.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};
use serde::{Deserialize, Serialize};

use crate::channel::apply_channel;
use crate::codec::{AggregationLevel, Codec, CodecConfig, Rnti};
use crate::config::ScenarioConfig;
use crate::dci::{self, Allocation, DciFields, DciFormat, Direction};
use crate::error::{Error, Result};
use crate::grid::{
    common_search_space, ue_search_space, CandidateLocation, PdcchSubframe, SearchSpaceConfig,
};

pub const SI_RNTI: Rnti = Rnti(0xFFFF);
pub const P_RNTI: Rnti = Rnti(0xFFFE);
pub const C_RNTI_FIRST: u16 = 0x003D;
pub const C_RNTI_LAST: u16 = 0xFFF3;
const RA_RNTI_FIRST: u16 = 0x0001;
const RA_RNTI_LAST: u16 = 0x000A;

/// Delay between a RAR and the first grant to the new UE.
const RAR_TO_FIRST_GRANT_MS: u64 = 5;
const RAR_MAX_RBS: u16 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RntiClass {
    SystemInformation,
    Paging,
    RandomAccess,
    CRnti,
    Reserved,
}

impl RntiClass {
    pub fn of(rnti: Rnti) -> Self {
        match rnti.0 {
            0xFFFF => RntiClass::SystemInformation,
            0xFFFE => RntiClass::Paging,
            RA_RNTI_FIRST..=RA_RNTI_LAST => RntiClass::RandomAccess,
            C_RNTI_FIRST..=C_RNTI_LAST => RntiClass::CRnti,
            _ => RntiClass::Reserved,
        }
    }

    /// SI, paging and RA identities, which only use the common space.
    pub fn is_special(self) -> bool {
        matches!(
            self,
            RntiClass::SystemInformation | RntiClass::Paging | RntiClass::RandomAccess
        )
    }
}

/// RA-RNTI used for a random access response sent in millisecond `ms`.
pub fn ra_rnti_for(ms: u64) -> Rnti {
    Rnti(RA_RNTI_FIRST + (ms % 10) as u16)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UeSession {
    pub rnti: Rnti,
    pub snr_db: f64,
    pub dl_activity: f64,
    pub ul_activity: f64,
    pub joined_at: u64,
    pub last_active: u64,
    /// First millisecond the UE may be scheduled.
    pub schedulable_from: u64,
    /// The UE stops generating traffic from here on.
    pub active_until: u64,
}

#[derive(Clone, Debug)]
pub struct SchedulerState {
    pub next_rnti: u16,
    /// Sorted by RNTI.
    pub sessions: Vec<UeSession>,
    pub n_rb: u16,
    pub n_cce: usize,
    pub arrival_rate: f64,
    pub inactivity_timeout: u64,
    /// New RNTIs still waiting for their RAR.
    pub pending_rars: std::collections::VecDeque<Rnti>,
}

impl SchedulerState {
    pub fn new(n_rb: u16, n_cce: usize, arrival_rate: f64, inactivity_timeout: u64) -> Self {
        Self {
            next_rnti: C_RNTI_FIRST,
            sessions: Vec::new(),
            n_rb,
            n_cce,
            arrival_rate,
            inactivity_timeout,
            pending_rars: Default::default(),
        }
    }

    pub fn in_use(&self, rnti: Rnti) -> bool {
        self.sessions
            .binary_search_by_key(&rnti, |s| s.rnti)
            .is_ok()
    }

    pub fn insert_session(&mut self, session: UeSession) {
        let pos = self
            .sessions
            .binary_search_by_key(&session.rnti, |s| s.rnti)
            .unwrap_or_else(|p| p);
        self.sessions.insert(pos, session);
    }
}

/// Hands out `next_rnti` and advances it past RNTIs in use, wrapping inside
/// the C-RNTI range.
pub fn assign_rnti(state: &mut SchedulerState) -> Result<Rnti> {
    let capacity = (C_RNTI_LAST - C_RNTI_FIRST) as usize + 1;
    if state.sessions.len() >= capacity {
        return Err(Error::RntiSpaceExhausted);
    }
    let advance = |r: u16| {
        if r >= C_RNTI_LAST {
            C_RNTI_FIRST
        } else {
            r + 1
        }
    };
    let mut candidate = state.next_rnti.clamp(C_RNTI_FIRST, C_RNTI_LAST);
    while state.in_use(Rnti(candidate)) {
        candidate = advance(candidate);
    }
    state.next_rnti = advance(candidate);
    Ok(Rnti(candidate))
}

pub fn pick_aggregation_level(snr_db: f64) -> AggregationLevel {
    if snr_db >= 10.0 {
        AggregationLevel::L1
    } else if snr_db >= 4.0 {
        AggregationLevel::L2
    } else if snr_db >= -2.0 {
        AggregationLevel::L4
    } else {
        AggregationLevel::L8
    }
}

/// One transmitted DCI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthRecord {
    pub ms: u64,
    pub direction: Direction,
    pub rnti: Rnti,
    pub rb_start: u16,
    pub rb_len: u16,
    pub loc_start: u16,
    pub loc_l: AggregationLevel,
    pub format: DciFormat,
    /// Payload as a string of '0'/'1'.
    pub payload: String,
    /// Set on random access responses; holds the announced C-RNTI.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rar_for: Option<Rnti>,
}

impl GroundTruthRecord {
    pub fn location(&self) -> CandidateLocation {
        CandidateLocation::new(self.loc_start, self.loc_l)
    }

    pub fn allocation(&self) -> Allocation {
        Allocation {
            rb_start: self.rb_start,
            rb_len: self.rb_len,
        }
    }
}

/// Per-subframe resource bookkeeping.
struct Occupancy {
    cce: Vec<bool>,
    dl_rb: Vec<bool>,
    ul_rb: Vec<bool>,
}

impl Occupancy {
    fn cce_free(&self, loc: &CandidateLocation) -> bool {
        loc.cces().all(|i| !self.cce[i])
    }

    fn rbs(&mut self, dir: Direction) -> &mut Vec<bool> {
        match dir {
            Direction::Downlink => &mut self.dl_rb,
            Direction::Uplink => &mut self.ul_rb,
        }
    }
}

/// Picks a free contiguous run of `want` RBs (shrinking the request when
/// nothing fits) uniformly among the feasible starts.
fn take_rbs<R: Rng>(rbs: &mut [bool], want: u16, rng: &mut R) -> Option<Allocation> {
    let n = rbs.len();
    let mut len = want as usize;
    while len >= 1 {
        let starts: Vec<usize> = (0..=n.saturating_sub(len))
            .filter(|&s| s + len <= n && rbs[s..s + len].iter().all(|b| !b))
            .collect();
        if !starts.is_empty() {
            let s = starts[rng.random_range(0..starts.len())];
            rbs[s..s + len].iter_mut().for_each(|b| *b = true);
            return Some(Allocation {
                rb_start: s as u16,
                rb_len: len as u16,
            });
        }
        len /= 2;
    }
    None
}

/// Scenario-driven simulator: owns the scheduler state and its random
/// stream.
pub struct Simulator {
    pub cfg: ScenarioConfig,
    pub state: SchedulerState,
    codec: Codec,
    search: SearchSpaceConfig,
    rng: ChaCha8Rng,
    /// Assignment log: (ms, rnti) per RNTI handed out.
    pub assignments: Vec<(u64, Rnti)>,
    /// (removal ms, rnti) per session removed.
    pub removals: Vec<(u64, Rnti)>,
}

impl Simulator {
    pub fn new(cfg: ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let codec = Codec::new(CodecConfig::default())?;
        let mut state = SchedulerState::new(
            cfg.n_rb,
            cfg.n_cce,
            cfg.arrival_rate,
            cfg.inactivity_timeout_ms,
        );
        state.next_rnti = cfg.first_rnti;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut sim = Self {
            cfg,
            state,
            codec,
            search: SearchSpaceConfig::default(),
            rng,
            assignments: Vec::new(),
            removals: Vec::new(),
        };
        for _ in 0..sim.cfg.initial_sessions {
            let rnti = assign_rnti(&mut sim.state)?;
            sim.assignments.push((0, rnti));
            let session = sim.new_session(rnti, 0, 0);
            sim.state.insert_session(session);
        }
        Ok(sim)
    }

    pub fn codec(&self) -> &Codec {
        &self.codec
    }

    fn new_session(&mut self, rnti: Rnti, joined_at: u64, schedulable_from: u64) -> UeSession {
        let snr_db = self.cfg.snr.sample(&mut self.rng);
        let dl_activity = self.cfg.dl_activity.sample(&mut self.rng);
        let ul_activity = self.cfg.ul_activity.sample(&mut self.rng);
        let mean = self.cfg.mean_active_s;
        let active_until = if mean.is_finite() {
            let d = Exp::new(1.0 / (mean * 1000.0)).expect("positive rate");
            schedulable_from + d.sample(&mut self.rng).ceil() as u64
        } else {
            u64::MAX
        };
        UeSession {
            rnti,
            snr_db,
            dl_activity,
            ul_activity,
            joined_at,
            last_active: joined_at,
            schedulable_from,
            active_until,
        }
    }

    /// Produces the transmitted (noise-free) subframe and its ground truth.
    pub fn step_subframe(&mut self, ms: u64) -> Result<(PdcchSubframe, Vec<GroundTruthRecord>)> {
        let n_rb = self.state.n_rb;
        let n_cce = self.state.n_cce;

        // (a) arrivals
        if self.state.arrival_rate > 0.0 {
            let lambda = self.state.arrival_rate / 1000.0;
            let k = Poisson::new(lambda)
                .expect("positive rate")
                .sample(&mut self.rng) as usize;
            for _ in 0..k {
                let rnti = assign_rnti(&mut self.state)?;
                self.assignments.push((ms, rnti));
                let session = self.new_session(rnti, ms, ms + RAR_TO_FIRST_GRANT_MS);
                self.state.insert_session(session);
                self.state.pending_rars.push_back(rnti);
            }
        }

        // (b) inactivity removal
        let timeout = self.state.inactivity_timeout;
        let removals = &mut self.removals;
        self.state.sessions.retain(|s| {
            let keep = ms.saturating_sub(s.last_active) <= timeout;
            if !keep {
                removals.push((ms, s.rnti));
            }
            keep
        });

        let mut occ = Occupancy {
            cce: vec![false; n_cce],
            dl_rb: vec![false; n_rb as usize],
            ul_rb: vec![false; n_rb as usize],
        };
        let mut planned: Vec<(GroundTruthRecord, Option<f64>)> = Vec::new();

        // (c) random access responses go first, common space only
        let common = common_search_space(n_cce);
        while let Some(&new_rnti) = self.state.pending_rars.front() {
            let snr = self
                .state
                .sessions
                .iter()
                .find(|s| s.rnti == new_rnti)
                .map(|s| s.snr_db);
            let slot = [AggregationLevel::L4, AggregationLevel::L8]
                .iter()
                .flat_map(|&l| common.iter().filter(move |c| c.level == l))
                .find(|c| occ.cce_free(c))
                .copied();
            let Some(loc) = slot else { break };
            let want = self.rng.random_range(1..=RAR_MAX_RBS.min(n_rb));
            let Some(alloc) = take_rbs(&mut occ.dl_rb, want, &mut self.rng) else {
                break;
            };
            loc.cces().for_each(|i| occ.cce[i] = true);
            self.state.pending_rars.pop_front();
            let payload = dci::build_rar_payload(alloc, new_rnti, n_rb, self.codec.config())?;
            planned.push((
                GroundTruthRecord {
                    ms,
                    direction: Direction::Downlink,
                    rnti: ra_rnti_for(ms),
                    rb_start: alloc.rb_start,
                    rb_len: alloc.rb_len,
                    loc_start: loc.start,
                    loc_l: loc.level,
                    format: DciFormat::Format1A,
                    payload: payload.to_bit_string(),
                    rar_for: Some(new_rnti),
                },
                snr,
            ));
        }

        // (d) per-session grants, in a shuffled order
        let subframe = (ms % 10) as u8;
        let mut order: Vec<usize> = (0..self.state.sessions.len()).collect();
        order.shuffle(&mut self.rng);
        for idx in order {
            let s = self.state.sessions[idx].clone();
            if ms < s.schedulable_from || ms >= s.active_until {
                continue;
            }
            let space = ue_search_space(s.rnti, subframe, n_cce, &self.search)?;
            let mut scheduled = false;
            for dir in [Direction::Downlink, Direction::Uplink] {
                let p = match dir {
                    Direction::Downlink => s.dl_activity,
                    Direction::Uplink => s.ul_activity,
                };
                if !self.rng.random_bool(p) {
                    continue;
                }
                let format = match dir {
                    Direction::Uplink => DciFormat::Format0,
                    Direction::Downlink if self.rng.random_bool(self.cfg.format2a_fraction) => {
                        DciFormat::Format2A
                    }
                    Direction::Downlink => DciFormat::Format1A,
                };
                let mut level = pick_aggregation_level(s.snr_db);
                // keep the long format at code rate <= 3/4
                if format == DciFormat::Format2A && level == AggregationLevel::L1 {
                    level = AggregationLevel::L2;
                }
                let Some(loc) = [Some(level), level.double()]
                    .into_iter()
                    .flatten()
                    .flat_map(|l| space.iter().filter(move |c| c.level == l))
                    .find(|c| occ.cce_free(c))
                    .copied()
                else {
                    continue;
                };
                let want = self.rng.random_range(1..=self.cfg.max_grant_rbs.min(n_rb));
                let Some(alloc) = take_rbs(occ.rbs(dir), want, &mut self.rng) else {
                    continue;
                };
                loc.cces().for_each(|i| occ.cce[i] = true);
                let fields = DciFields {
                    mcs: self.rng.random_range(0..32),
                    harq: self.rng.random_range(0..8),
                    rv: self.rng.random_range(0..4),
                    tpc: self.rng.random_range(0..4),
                    extra: self.rng.random(),
                };
                let payload =
                    dci::build_payload(format, alloc, &fields, n_rb, self.codec.config())?;
                planned.push((
                    GroundTruthRecord {
                        ms,
                        direction: dir,
                        rnti: s.rnti,
                        rb_start: alloc.rb_start,
                        rb_len: alloc.rb_len,
                        loc_start: loc.start,
                        loc_l: loc.level,
                        format,
                        payload: payload.to_bit_string(),
                        rar_for: None,
                    },
                    Some(s.snr_db),
                ));
                scheduled = true;
            }
            if scheduled {
                self.state.sessions[idx].last_active = ms;
            }
        }

        // (g) encode into the grid
        let mut sf = PdcchSubframe::empty(ms, n_cce)?;
        let mut records = Vec::with_capacity(planned.len());
        for (rec, snr) in planned {
            let payload = crate::codec::PayloadBits::from_bit_string(&rec.payload)?;
            let bits = self.codec.encode_dci(&payload, rec.rnti, rec.loc_l)?;
            sf.place(&rec.location(), &bits, snr.map(|v| v as f32))?;
            records.push(rec);
        }
        records.sort_by_key(|r| (r.loc_start, r.loc_l));
        Ok((sf, records))
    }

    /// Runs the whole scenario through the configured channel, one subframe
    /// at a time.
    pub fn received(self) -> Received {
        Received { sim: self, ms: 0 }
    }
}

/// Received subframes and their ground truth, in millisecond order.
pub struct Received {
    sim: Simulator,
    ms: u64,
}

impl Iterator for Received {
    type Item = Result<(PdcchSubframe, Vec<GroundTruthRecord>)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.ms >= self.sim.cfg.duration_ms {
            return None;
        }
        let ms = self.ms;
        self.ms += 1;
        Some(
            self.sim
                .step_subframe(ms)
                .map(|(sf, truth)| (apply_channel(&sf, &self.sim.cfg.channel), truth)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ActivityRange, SnrDistribution};
    use crate::grid::coherence_check;

    fn quiet_config() -> ScenarioConfig {
        ScenarioConfig {
            arrival_rate: 0.0,
            initial_sessions: 0,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn rnti_classes() {
        assert_eq!(RntiClass::of(Rnti(0xFFFF)), RntiClass::SystemInformation);
        assert_eq!(RntiClass::of(Rnti(0xFFFE)), RntiClass::Paging);
        assert_eq!(RntiClass::of(Rnti(0x0001)), RntiClass::RandomAccess);
        assert_eq!(RntiClass::of(Rnti(0x000A)), RntiClass::RandomAccess);
        assert_eq!(RntiClass::of(Rnti(0x003D)), RntiClass::CRnti);
        assert_eq!(RntiClass::of(Rnti(0xFFF3)), RntiClass::CRnti);
        assert_eq!(RntiClass::of(Rnti(0x0000)), RntiClass::Reserved);
        assert_eq!(RntiClass::of(Rnti(0x0020)), RntiClass::Reserved);
        assert_eq!(RntiClass::of(Rnti(0xFFF8)), RntiClass::Reserved);
    }

    #[test]
    fn sequential_assignment_and_wrap() {
        let mut st = SchedulerState::new(50, 44, 0.0, 10_000);
        assert_eq!(assign_rnti(&mut st).unwrap(), Rnti(0x003D));
        assert_eq!(assign_rnti(&mut st).unwrap(), Rnti(0x003E));
        st.next_rnti = 0xFFF3;
        assert_eq!(assign_rnti(&mut st).unwrap(), Rnti(0xFFF3));
        assert_eq!(assign_rnti(&mut st).unwrap(), Rnti(0x003D));
        // skips RNTIs held by sessions
        st.next_rnti = 0x0100;
        let mut sim = Simulator::new(quiet_config()).unwrap();
        let s = sim.new_session(Rnti(0x0100), 0, 0);
        st.insert_session(s);
        assert_eq!(assign_rnti(&mut st).unwrap(), Rnti(0x0101));
    }

    #[test]
    fn exhausted_space_is_an_error() {
        let mut st = SchedulerState::new(50, 44, 0.0, 10_000);
        let template = UeSession {
            rnti: Rnti(0),
            snr_db: 0.0,
            dl_activity: 0.0,
            ul_activity: 0.0,
            joined_at: 0,
            last_active: 0,
            schedulable_from: 0,
            active_until: 0,
        };
        st.sessions = (C_RNTI_FIRST..=C_RNTI_LAST)
            .map(|r| UeSession {
                rnti: Rnti(r),
                ..template.clone()
            })
            .collect();
        assert!(matches!(
            assign_rnti(&mut st),
            Err(Error::RntiSpaceExhausted)
        ));
    }

    #[test]
    fn aggregation_thresholds() {
        assert_eq!(pick_aggregation_level(15.0), AggregationLevel::L1);
        assert_eq!(pick_aggregation_level(-5.0), AggregationLevel::L8);
        let mut prev = AggregationLevel::L8;
        for i in -100..=200 {
            let l = pick_aggregation_level(i as f64 / 10.0);
            assert!(l <= prev);
            prev = l;
        }
    }

    #[test]
    fn empty_cell_is_silent() {
        let mut sim = Simulator::new(quiet_config()).unwrap();
        for ms in 0..50 {
            let (sf, recs) = sim.step_subframe(ms).unwrap();
            assert!(recs.is_empty());
            assert!(sf.occupied.iter().all(|o| !o));
            assert!(sf.soft.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn rar_announces_the_new_rnti_in_the_common_space() {
        let cfg = ScenarioConfig {
            arrival_rate: 200.0,
            ..quiet_config()
        };
        let mut sim = Simulator::new(cfg).unwrap();
        let mut rars = 0;
        for ms in 0..200 {
            let (_, recs) = sim.step_subframe(ms).unwrap();
            for r in recs.iter().filter(|r| r.rar_for.is_some()) {
                rars += 1;
                assert_eq!(RntiClass::of(r.rnti), RntiClass::RandomAccess);
                assert!(common_search_space(44).contains(&r.location()));
                let p = crate::codec::PayloadBits::from_bit_string(&r.payload).unwrap();
                assert_eq!(dci::extract_rar_rnti(&p, 50), r.rar_for);
            }
        }
        assert!(rars > 10);
    }

    #[test]
    fn ground_truth_invariants() {
        let cfg = ScenarioConfig {
            arrival_rate: 20.0,
            initial_sessions: 25,
            mean_active_s: 1.0,
            inactivity_timeout_ms: 500,
            ..ScenarioConfig::default()
        };
        let mut sim = Simulator::new(cfg).unwrap();
        let search = SearchSpaceConfig::default();
        let mut all = Vec::new();
        for ms in 0..3000 {
            let (sf, recs) = sim.step_subframe(ms).unwrap();
            let mut covered = [0u8; 44];
            for r in &recs {
                assert!(coherence_check(
                    r.rnti,
                    &r.location(),
                    (ms % 10) as u8,
                    44,
                    &search
                ));
                assert!(r.allocation().is_valid(50));
                for i in r.location().cces() {
                    covered[i] += 1;
                }
            }
            assert!(covered.iter().all(|&c| c <= 1));
            assert_eq!(
                covered.iter().map(|&c| c == 1).collect::<Vec<_>>(),
                sf.occupied
            );
            for dir in [Direction::Downlink, Direction::Uplink] {
                let allocs: Vec<_> = recs.iter().filter(|r| r.direction == dir).collect();
                for (i, a) in allocs.iter().enumerate() {
                    for b in &allocs[i + 1..] {
                        assert!(!a.allocation().overlaps(&b.allocation()));
                    }
                }
            }
            all.extend(recs);
        }
        // no grants after removal
        for &(t, rnti) in &sim.removals {
            assert!(!all
                .iter()
                .any(|r| r.rnti == rnti && r.ms >= t && r.rar_for.is_none()));
        }
        // sequential assignment
        let rntis: Vec<u16> = sim.assignments.iter().map(|a| a.1 .0).collect();
        assert!(rntis.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grant_rate_matches_occupancy_oracle() {
        // 30 always-active sessions with DL activity 0.5, L = 1 everywhere
        let cfg = ScenarioConfig {
            initial_sessions: 30,
            arrival_rate: 0.0,
            mean_active_s: f64::INFINITY,
            format2a_fraction: 0.0,
            snr: SnrDistribution::Fixed { value: 15.0 },
            dl_activity: ActivityRange { min: 0.5, max: 0.5 },
            ul_activity: ActivityRange { min: 0.0, max: 0.0 },
            max_grant_rbs: 1,
            ..ScenarioConfig::default()
        };
        let mut sim = Simulator::new(cfg).unwrap();
        let search = SearchSpaceConfig::default();
        let mut sim_total = 0usize;
        let mut oracle_total = 0usize;
        let rntis: Vec<Rnti> = sim.state.sessions.iter().map(|s| s.rnti).collect();
        let mut oracle_rng = ChaCha8Rng::seed_from_u64(99);
        let frames = 5000;
        for ms in 0..frames {
            let (_, recs) = sim.step_subframe(ms).unwrap();
            sim_total += recs.len();
            // oracle: random requesters, first free L1 then L2 slot in their space
            let mut taken = [false; 44];
            let mut order = rntis.clone();
            order.shuffle(&mut oracle_rng);
            for r in order {
                if !oracle_rng.random_bool(0.5) {
                    continue;
                }
                let space = ue_search_space(r, (ms % 10) as u8, 44, &search).unwrap();
                let slot = [AggregationLevel::L1, AggregationLevel::L2]
                    .iter()
                    .flat_map(|&l| space.iter().filter(move |c| c.level == l))
                    .find(|c| c.cces().all(|i| !taken[i]));
                if let Some(c) = slot {
                    c.cces().for_each(|i| taken[i] = true);
                    oracle_total += 1;
                }
            }
        }
        let sim_mean = sim_total as f64 / frames as f64;
        let oracle_mean = oracle_total as f64 / frames as f64;
        assert!(sim_mean < 30.0 * 0.5 + 0.5);
        assert!(sim_mean < 30.0);
        assert!(
            (sim_mean - oracle_mean).abs() < 0.05 * oracle_mean,
            "{sim_mean} vs {oracle_mean}"
        );
    }
}
