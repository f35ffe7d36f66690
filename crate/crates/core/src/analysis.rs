//! Metrics over decoded traces: RB collisions, RNTI distributions, active
//! UE counts, scores against ground truth, and the pipeline comparison
//! harness.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::ops::Range;

use serde::Serialize;

use crate::codec::Rnti;
use crate::config::ScenarioConfig;
use crate::dci::{Allocation, Direction};
use crate::decoders::{DecodeCache, DecodedDci, Decoder, DecoderConfig, Pipeline};
use crate::error::Result;
use crate::sim::{GroundTruthRecord, RntiClass, Simulator};

/// Uplink grants take effect this many subframes after the DCI.
pub const UPLINK_DELAY_MS: u64 = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DirectionCollisions {
    pub analyzed: u64,
    pub colliding: u64,
    /// DCIs whose allocation does not fit the carrier.
    pub invalid: u64,
}

impl DirectionCollisions {
    pub fn fraction(&self) -> f64 {
        if self.analyzed == 0 {
            0.0
        } else {
            self.colliding as f64 / self.analyzed as f64
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CollisionReport {
    pub downlink: DirectionCollisions,
    pub uplink: DirectionCollisions,
}

impl CollisionReport {
    pub fn get(&self, dir: Direction) -> &DirectionCollisions {
        match dir {
            Direction::Downlink => &self.downlink,
            Direction::Uplink => &self.uplink,
        }
    }
}

/// Anything that carries one resource assignment.
pub trait Grant {
    fn ms(&self) -> u64;
    fn direction(&self) -> Direction;
    fn rnti(&self) -> Rnti;
    fn allocation(&self) -> Allocation;
}

impl Grant for DecodedDci {
    fn ms(&self) -> u64 {
        self.ms
    }
    fn direction(&self) -> Direction {
        self.dir
    }
    fn rnti(&self) -> Rnti {
        self.rnti
    }
    fn allocation(&self) -> Allocation {
        Allocation {
            rb_start: self.rb_start,
            rb_len: self.rb_len,
        }
    }
}

impl Grant for GroundTruthRecord {
    fn ms(&self) -> u64 {
        self.ms
    }
    fn direction(&self) -> Direction {
        self.direction
    }
    fn rnti(&self) -> Rnti {
        self.rnti
    }
    fn allocation(&self) -> Allocation {
        GroundTruthRecord::allocation(self)
    }
}

/// Counts subframes in which some RB is assigned twice. Downlink grants are
/// grouped by their own subframe, uplink grants by the subframe they take
/// effect in. Only DCIs sent inside `window` are considered, and each
/// direction is analyzed over `window.len()` subframes.
pub fn detect_collisions<G: Grant>(trace: &[G], n_rb: u16, window: Range<u64>) -> CollisionReport {
    let mut report = CollisionReport::default();
    let span = window.end.saturating_sub(window.start);
    report.downlink.analyzed = span;
    report.uplink.analyzed = span;

    let mut groups: BTreeMap<(Direction, u64), Vec<u64>> = BTreeMap::new();
    for g in trace.iter().filter(|g| window.contains(&g.ms())) {
        let dir = g.direction();
        let alloc = g.allocation();
        if !alloc.is_valid(n_rb) {
            match dir {
                Direction::Downlink => report.downlink.invalid += 1,
                Direction::Uplink => report.uplink.invalid += 1,
            }
            continue;
        }
        let target = match dir {
            Direction::Downlink => g.ms(),
            Direction::Uplink => g.ms() + UPLINK_DELAY_MS,
        };
        let words = (n_rb as usize).div_ceil(64);
        let mask = groups
            .entry((dir, target))
            .or_insert_with(|| vec![0; words + 1]);
        let collided = mask.len() - 1;
        for rb in alloc.rb_start as usize..alloc.end() as usize {
            let (w, b) = (rb / 64, 1u64 << (rb % 64));
            if mask[w] & b != 0 {
                mask[collided] = 1;
            }
            mask[w] |= b;
        }
    }
    for ((dir, _), mask) in groups {
        if mask[mask.len() - 1] == 1 {
            match dir {
                Direction::Downlink => report.downlink.colliding += 1,
                Direction::Uplink => report.uplink.colliding += 1,
            }
        }
    }
    report
}

/// Collision reports split by the pipeline that produced each record.
pub fn collisions_by_pipeline(
    trace: &[DecodedDci],
    n_rb: u16,
    window: Range<u64>,
) -> BTreeMap<Pipeline, CollisionReport> {
    let mut split: BTreeMap<Pipeline, Vec<DecodedDci>> = BTreeMap::new();
    for d in trace {
        split.entry(d.pipeline).or_default().push(d.clone());
    }
    split
        .into_iter()
        .map(|(p, t)| (p, detect_collisions(&t, n_rb, window.clone())))
        .collect()
}

/// Occurrences per RNTI over an observation window.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RntiDistribution {
    pub window: Range<u64>,
    pub counts: BTreeMap<Rnti, u64>,
    /// RNTIs absent from ground truth with at most two occurrences; `None`
    /// when no ground truth was supplied.
    pub noise_floor: Option<BTreeMap<Rnti, u64>>,
}

/// RNTIs seen at most this often count toward the noise floor.
pub const NOISE_FLOOR_MAX_COUNT: u64 = 2;

impl RntiDistribution {
    pub fn noise_floor_mass(&self) -> Option<u64> {
        self.noise_floor.as_ref().map(|m| m.values().sum())
    }

    /// Histogram of the top byte of noise-floor RNTIs.
    pub fn noise_floor_top_bytes(&self) -> [u64; 256] {
        let mut bins = [0u64; 256];
        for (r, c) in self.noise_floor.iter().flatten() {
            bins[(r.0 >> 8) as usize] += c;
        }
        bins
    }
}

pub fn rnti_distribution<G: Grant>(
    trace: &[G],
    window: Range<u64>,
    truth: Option<&BTreeSet<Rnti>>,
) -> RntiDistribution {
    let mut counts: BTreeMap<Rnti, u64> = BTreeMap::new();
    for g in trace.iter().filter(|g| window.contains(&g.ms())) {
        *counts.entry(g.rnti()).or_insert(0) += 1;
    }
    let noise_floor = truth.map(|t| {
        counts
            .iter()
            .filter(|(r, &c)| c <= NOISE_FLOOR_MAX_COUNT && !t.contains(r))
            .map(|(r, c)| (*r, *c))
            .collect()
    });
    RntiDistribution {
        window,
        counts,
        noise_floor,
    }
}

/// Distinct C-RNTIs scheduled at least once in the window.
pub fn active_ue_count<G: Grant>(trace: &[G], window: Range<u64>) -> usize {
    trace
        .iter()
        .filter(|g| window.contains(&g.ms()) && RntiClass::of(g.rnti()) == RntiClass::CRnti)
        .map(|g| g.rnti())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Mean C-RNTI value of the grants in each consecutive window. Empty windows
/// are skipped.
pub fn windowed_mean_rnti<G: Grant>(trace: &[G], window_ms: u64) -> Vec<(u64, f64)> {
    let mut acc: BTreeMap<u64, (f64, u64)> = BTreeMap::new();
    for g in trace
        .iter()
        .filter(|g| RntiClass::of(g.rnti()) == RntiClass::CRnti)
    {
        let e = acc.entry(g.ms() / window_ms).or_insert((0.0, 0));
        e.0 += g.rnti().0 as f64;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(w, (s, n))| (w, s / n as f64))
        .collect()
}

/// Least-squares slope of `y` against `x`.
pub fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// How far RNTI assignment advanced over a trace: the span of C-RNTI values
/// seen in at least `min_count` DCIs. Requiring repeats keeps one-off noise
/// RNTIs out.
pub fn rnti_progression<G: Grant>(trace: &[G], min_count: u64) -> u64 {
    let mut counts: BTreeMap<Rnti, u64> = BTreeMap::new();
    for g in trace
        .iter()
        .filter(|g| RntiClass::of(g.rnti()) == RntiClass::CRnti)
    {
        *counts.entry(g.rnti()).or_insert(0) += 1;
    }
    let seen: Vec<u16> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count)
        .map(|(r, _)| r.0)
        .collect();
    match (seen.first(), seen.last()) {
        (Some(lo), Some(hi)) => (hi - lo) as u64 + 1,
        _ => 0,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Score {
    pub true_positives: u64,
    pub decoded: u64,
    pub truth: u64,
    pub precision: f64,
    pub recall: f64,
    /// Set when nothing was decoded and precision is 1.0 by convention.
    pub precision_undefined: bool,
    /// False positives whose RNTI was not transmitted in that subframe.
    pub fp_noise: u64,
    /// False positives carrying an RNTI that was transmitted in that
    /// subframe, with a corrupted payload.
    pub fp_corrupted: u64,
}

type MatchKey = (u64, Direction, Rnti, u16, u16);

fn match_key<G: Grant>(g: &G) -> MatchKey {
    let a = g.allocation();
    (g.ms(), g.direction(), g.rnti(), a.rb_start, a.rb_len)
}

pub fn score_vs_ground_truth(decoded: &[DecodedDci], truth: &[GroundTruthRecord]) -> Score {
    let mut remaining: BTreeMap<MatchKey, u64> = BTreeMap::new();
    let mut sent: BTreeSet<(u64, Rnti)> = BTreeSet::new();
    for t in truth {
        *remaining.entry(match_key(t)).or_insert(0) += 1;
        sent.insert((t.ms, t.rnti));
    }
    let mut s = Score {
        decoded: decoded.len() as u64,
        truth: truth.len() as u64,
        ..Default::default()
    };
    for d in decoded {
        match remaining.get_mut(&match_key(d)) {
            Some(n) if *n > 0 => {
                *n -= 1;
                s.true_positives += 1;
            }
            _ if sent.contains(&(d.ms, d.rnti)) => s.fp_corrupted += 1,
            _ => s.fp_noise += 1,
        }
    }
    s.precision_undefined = s.decoded == 0;
    s.precision = if s.decoded == 0 {
        1.0
    } else {
        s.true_positives as f64 / s.decoded as f64
    };
    s.recall = if s.truth == 0 {
        1.0
    } else {
        s.true_positives as f64 / s.truth as f64
    };
    s
}

/// One pipeline's outcome on one seed.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub pipeline: Pipeline,
    pub trace: Vec<DecodedDci>,
    pub collisions: CollisionReport,
    pub score: Score,
    pub distribution: RntiDistribution,
    pub reencode_calls: u64,
    pub histogram_promotions: u64,
}

#[derive(Clone, Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub truth: Vec<GroundTruthRecord>,
    pub runs: Vec<PipelineRun>,
    pub viterbi_runs: u64,
}

/// Scenario copy for one seed; the channel gets its own seed so its noise
/// does not reuse the simulator's random stream.
pub fn seeded(cfg: &ScenarioConfig, seed: u64) -> ScenarioConfig {
    let mut c = cfg.clone();
    c.seed = seed;
    c.channel.seed = seed ^ 0x5EED_C4A7_0000_0000;
    c
}

/// Simulates one seed and decodes the identical received stream with every
/// pipeline.
pub fn run_seed(cfg: &ScenarioConfig, seed: u64) -> Result<SeedRun> {
    let cfg = seeded(cfg, seed);
    let mut decoders = Pipeline::ALL
        .iter()
        .map(|&p| {
            Decoder::new(DecoderConfig {
                n_rb: cfg.n_rb,
                ..DecoderConfig::new(p)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut traces = vec![Vec::new(); decoders.len()];
    let mut truth = Vec::new();
    let mut cache = DecodeCache::new();
    for item in Simulator::new(cfg.clone())?.received() {
        let (sf, t) = item?;
        truth.extend(t);
        for (dec, trace) in decoders.iter_mut().zip(traces.iter_mut()) {
            let acc = dec.decode_subframe(&sf, &mut cache);
            trace.extend(dec.records(sf.ms, &acc));
        }
    }
    let window = 0..cfg.duration_ms;
    let truth_rntis: BTreeSet<Rnti> = truth.iter().map(|t| t.rnti).collect();
    let runs = decoders
        .into_iter()
        .zip(traces)
        .map(|(dec, trace)| PipelineRun {
            pipeline: dec.pipeline(),
            collisions: detect_collisions(&trace, cfg.n_rb, window.clone()),
            score: score_vs_ground_truth(&trace, &truth),
            distribution: rnti_distribution(&trace, window.clone(), Some(&truth_rntis)),
            reencode_calls: dec.stats.reencode_calls,
            histogram_promotions: dec.stats.histogram_promotions,
            trace,
        })
        .collect();
    Ok(SeedRun {
        seed,
        truth,
        runs,
        viterbi_runs: cache.viterbi_runs,
    })
}

/// One CSV row of a comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub seed: u64,
    pub pipeline: &'static str,
    pub direction: &'static str,
    pub metric: &'static str,
    pub value: f64,
}

pub const CSV_HEADER: &str = "seed,pipeline,direction,metric,value";

#[derive(Clone, Debug)]
pub struct Comparison {
    pub seeds: Vec<SeedRun>,
}

impl Comparison {
    pub fn rows(&self) -> Vec<CompareRow> {
        let mut rows = Vec::new();
        for s in &self.seeds {
            for r in &s.runs {
                let mut push = |direction, metric, value| {
                    rows.push(CompareRow {
                        seed: s.seed,
                        pipeline: r.pipeline.name(),
                        direction,
                        metric,
                        value,
                    })
                };
                for dir in [Direction::Downlink, Direction::Uplink] {
                    let c = r.collisions.get(dir);
                    push(dir.as_str(), "collision_fraction", c.fraction());
                    push(dir.as_str(), "colliding_subframes", c.colliding as f64);
                    push(dir.as_str(), "invalid_allocations", c.invalid as f64);
                }
                push("all", "decoded", r.score.decoded as f64);
                push("all", "precision", r.score.precision);
                push("all", "recall", r.score.recall);
                push("all", "fp_noise", r.score.fp_noise as f64);
                push("all", "fp_corrupted", r.score.fp_corrupted as f64);
                push(
                    "all",
                    "noise_floor_mass",
                    r.distribution.noise_floor_mass().unwrap_or(0) as f64,
                );
                push("all", "reencode_calls", r.reencode_calls as f64);
            }
        }
        rows
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)
                .map_err(|e| std::io::Error::other(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    fn runs(&self, pipeline: Pipeline) -> impl Iterator<Item = &PipelineRun> {
        self.seeds
            .iter()
            .flat_map(move |s| s.runs.iter().filter(move |r| r.pipeline == pipeline))
    }

    pub fn mean_collision_fraction(&self, pipeline: Pipeline, dir: Direction) -> f64 {
        let v: Vec<f64> = self
            .runs(pipeline)
            .map(|r| r.collisions.get(dir).fraction())
            .collect();
        v.iter().sum::<f64>() / v.len().max(1) as f64
    }

    pub fn total_noise_floor_mass(&self, pipeline: Pipeline) -> u64 {
        self.runs(pipeline)
            .map(|r| r.distribution.noise_floor_mass().unwrap_or(0))
            .sum()
    }

    pub fn noise_floor_top_bytes(&self, pipeline: Pipeline) -> [u64; 256] {
        let mut bins = [0u64; 256];
        for r in self.runs(pipeline) {
            for (b, c) in bins.iter_mut().zip(r.distribution.noise_floor_top_bytes()) {
                *b += c;
            }
        }
        bins
    }

    /// Human-readable per-pipeline means.
    pub fn summary(&self) -> String {
        let mut s =
            String::from("pipeline  dl_collision  ul_collision  precision  recall  noise_floor\n");
        for p in Pipeline::ALL {
            let n = self.runs(p).count().max(1) as f64;
            let precision = self.runs(p).map(|r| r.score.precision).sum::<f64>() / n;
            let recall = self.runs(p).map(|r| r.score.recall).sum::<f64>() / n;
            s.push_str(&format!(
                "{:<8}  {:>11.4}%  {:>11.4}%  {:>9.4}  {:>6.4}  {:>11}\n",
                p.name(),
                100.0 * self.mean_collision_fraction(p, Direction::Downlink),
                100.0 * self.mean_collision_fraction(p, Direction::Uplink),
                precision,
                recall,
                self.total_noise_floor_mass(p),
            ));
        }
        s
    }
}

pub fn compare_pipelines(cfg: &ScenarioConfig, seeds: &[u64]) -> Result<Comparison> {
    if seeds.is_empty() {
        return Err(crate::error::invalid("at least one seed is required"));
    }
    let seeds = seeds
        .iter()
        .map(|&s| run_seed(cfg, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison { seeds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Preset;
    use crate::codec::AggregationLevel;
    use crate::decoders::RntiOrigin;
    use proptest::prelude::*;

    fn dci(ms: u64, dir: Direction, rnti: u16, rb_start: u16, rb_len: u16) -> DecodedDci {
        DecodedDci {
            ms,
            dir,
            rnti: Rnti(rnti),
            rnti_origin: RntiOrigin::Rar,
            loc_start: 0,
            loc_l: AggregationLevel::L1,
            rb_start,
            rb_len,
            pipeline: Pipeline::Falcon,
        }
    }

    #[test]
    fn overlapping_downlink_grants_collide() {
        let t = vec![
            dci(7, Direction::Downlink, 100, 0, 10),
            dci(7, Direction::Downlink, 101, 5, 3),
        ];
        let r = detect_collisions(&t, 50, 0..10);
        assert_eq!(r.downlink.colliding, 1);
        assert_eq!(r.downlink.fraction(), 0.1);
        assert_eq!(r.uplink.colliding, 0);
    }

    #[test]
    fn uplink_grants_group_by_target_subframe() {
        let t = vec![
            dci(3, Direction::Uplink, 100, 0, 10),
            dci(7, Direction::Uplink, 101, 0, 10),
        ];
        assert_eq!(detect_collisions(&t, 50, 0..10).uplink.colliding, 0);
        let t = vec![
            dci(3, Direction::Uplink, 100, 0, 10),
            dci(3, Direction::Uplink, 101, 9, 1),
        ];
        assert_eq!(detect_collisions(&t, 50, 0..10).uplink.colliding, 1);
    }

    #[test]
    fn malformed_allocations_are_counted_apart() {
        let t = vec![
            dci(1, Direction::Downlink, 100, 45, 10),
            dci(1, Direction::Downlink, 101, 0, 0),
            dci(1, Direction::Downlink, 102, 40, 10),
        ];
        let r = detect_collisions(&t, 50, 0..2);
        assert_eq!((r.downlink.invalid, r.downlink.colliding), (2, 0));
    }

    #[test]
    fn ground_truth_never_collides() {
        let cfg = ScenarioConfig {
            duration_ms: 2000,
            arrival_rate: 20.0,
            initial_sessions: 30,
            ..Default::default()
        };
        let truth: Vec<GroundTruthRecord> = Simulator::new(cfg)
            .unwrap()
            .received()
            .flat_map(|r| r.unwrap().1)
            .collect();
        let r = detect_collisions(&truth, 50, 0..2000);
        assert_eq!((r.downlink.fraction(), r.uplink.fraction()), (0.0, 0.0));
        assert_eq!(r.downlink.invalid + r.uplink.invalid, 0);
    }

    #[test]
    fn scoring_conventions() {
        let truth = vec![GroundTruthRecord {
            ms: 1,
            direction: Direction::Downlink,
            rnti: Rnti(100),
            rb_start: 0,
            rb_len: 4,
            loc_start: 0,
            loc_l: AggregationLevel::L1,
            format: crate::dci::DciFormat::Format1A,
            payload: String::new(),
            rar_for: None,
        }];
        let s = score_vs_ground_truth(&[], &truth);
        assert_eq!(
            (s.precision, s.recall, s.precision_undefined),
            (1.0, 0.0, true)
        );
        let exact = vec![dci(1, Direction::Downlink, 100, 0, 4)];
        let s = score_vs_ground_truth(&exact, &truth);
        assert_eq!((s.precision, s.recall), (1.0, 1.0));
        let wrong = vec![
            dci(1, Direction::Downlink, 100, 0, 5),
            dci(1, Direction::Downlink, 200, 0, 4),
        ];
        let s = score_vs_ground_truth(&wrong, &truth);
        assert_eq!((s.true_positives, s.fp_corrupted, s.fp_noise), (0, 1, 1));
    }

    #[test]
    fn distributions_and_counts() {
        let t = vec![
            dci(0, Direction::Downlink, 0x100, 0, 1),
            dci(1, Direction::Downlink, 0x100, 0, 1),
            dci(2, Direction::Downlink, 0x100, 0, 1),
            dci(2, Direction::Uplink, 0x9000, 0, 1),
            dci(3, Direction::Downlink, 0xFFFF, 0, 1),
            dci(9, Direction::Downlink, 0x200, 0, 1),
        ];
        let truth: BTreeSet<Rnti> = [Rnti(0x100)].into();
        let d = rnti_distribution(&t, 0..5, Some(&truth));
        assert_eq!(d.counts[&Rnti(0x100)], 3);
        assert_eq!(d.noise_floor_mass(), Some(2));
        assert_eq!(d.noise_floor_top_bytes()[0x90], 1);
        assert!(rnti_distribution::<DecodedDci>(&[], 0..5, None)
            .counts
            .is_empty());
        assert_eq!(active_ue_count(&t, 0..5), 2);
        assert_eq!(active_ue_count::<DecodedDci>(&[], 0..5), 0);
        assert_eq!(rnti_progression(&t, 1), 0x9000 - 0x100 + 1);
        assert_eq!(rnti_progression(&t, 2), 1);
    }

    #[test]
    fn slope_of_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|x| (x as f64, 3.0 * x as f64 + 1.0)).collect();
        assert!((regression_slope(&pts) - 3.0).abs() < 1e-12);
        assert_eq!(regression_slope(&pts[..1]), 0.0);
    }

    #[test]
    fn csv_schema_is_stable() {
        let cfg = ScenarioConfig {
            duration_ms: 50,
            ..Default::default()
        }
        .with_preset(Preset::Good);
        let cmp = compare_pipelines(&cfg, &[1]).unwrap();
        let mut buf = Vec::new();
        cmp.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert_eq!(text.lines().count(), 1 + 3 * 13);
        assert!(compare_pipelines(&cfg, &[]).is_err());
    }

    fn arb_trace() -> impl Strategy<Value = Vec<DecodedDci>> {
        proptest::collection::vec(
            (0u64..40, any::<bool>(), 0x3Du16..0x60, 0u16..50, 1u16..20).prop_map(
                |(ms, ul, r, s, l)| {
                    let dir = if ul {
                        Direction::Uplink
                    } else {
                        Direction::Downlink
                    };
                    dci(ms, dir, r, s, l)
                },
            ),
            0..60,
        )
    }

    proptest! {
        #[test]
        fn collision_fractions_are_bounded(trace in arb_trace()) {
            let r = detect_collisions(&trace, 50, 0..40);
            for d in [r.downlink, r.uplink] {
                prop_assert!((0.0..=1.0).contains(&d.fraction()));
            }
        }

        #[test]
        fn single_grant_per_group_never_collides(trace in arb_trace()) {
            let mut seen = BTreeSet::new();
            let unique: Vec<DecodedDci> =
                trace.into_iter().filter(|d| seen.insert((d.ms, d.dir))).collect();
            let r = detect_collisions(&unique, 50, 0..40);
            prop_assert_eq!(r.downlink.colliding, 0);
            prop_assert_eq!(r.uplink.colliding, 0);
        }

        #[test]
        fn active_count_bounded_by_distinct_rntis(trace in arb_trace()) {
            let distinct = trace.iter().map(|d| d.rnti).collect::<BTreeSet<_>>().len();
            prop_assert!(active_ue_count(&trace, 0..40) <= distinct);
        }

        #[test]
        fn self_score_is_perfect(trace in arb_trace()) {
            let truth: Vec<GroundTruthRecord> = trace.iter().map(|d| GroundTruthRecord {
                ms: d.ms, direction: d.dir, rnti: d.rnti, rb_start: d.rb_start, rb_len: d.rb_len,
                loc_start: 0, loc_l: AggregationLevel::L1, format: crate::dci::DciFormat::Format0,
                payload: String::new(), rar_for: None,
            }).collect();
            let s = score_vs_ground_truth(&trace, &truth);
            prop_assert_eq!((s.precision, s.recall), (1.0, 1.0));
        }
    }
}
