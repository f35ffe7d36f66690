use super::*;
use crate::channel::{apply_channel, Preset};
use crate::codec::PayloadBits;
use crate::config::ScenarioConfig;
use crate::dci::{build_payload, build_rar_payload, Allocation, DciFields, DciFormat};
use crate::sim::{GroundTruthRecord, Simulator};

fn codec() -> Codec {
    Codec::new(CodecConfig::default()).unwrap()
}

fn place(sf: &mut PdcchSubframe, loc: CandidateLocation, payload: &PayloadBits, rnti: Rnti) {
    let bits = codec().encode_dci(payload, rnti, loc.level).unwrap();
    sf.place(&loc, &bits, None).unwrap();
}

fn dl_payload(rb_start: u16, rb_len: u16) -> PayloadBits {
    build_payload(
        DciFormat::Format1A,
        Allocation { rb_start, rb_len },
        &DciFields::default(),
        50,
        codec().config(),
    )
    .unwrap()
}

/// A UE-space location for `rnti` at `level` in subframe `ms % 10`.
fn ue_loc(rnti: Rnti, ms: u64, level: AggregationLevel) -> CandidateLocation {
    crate::grid::ue_search_space(rnti, (ms % 10) as u8, 44, &SearchSpaceConfig::default())
        .unwrap()
        .into_iter()
        .find(|l| l.level == level)
        .unwrap()
}

fn run(pipeline: Pipeline, sfs: &[PdcchSubframe]) -> (Vec<DecodedDci>, Decoder) {
    let mut dec = Decoder::new(DecoderConfig::new(pipeline)).unwrap();
    let mut cache = DecodeCache::new();
    let mut out = Vec::new();
    for sf in sfs {
        let acc = dec.decode_subframe(sf, &mut cache);
        out.extend(dec.records(sf.ms, &acc));
    }
    (out, dec)
}

#[test]
fn pipeline_names_round_trip() {
    for p in Pipeline::ALL {
        assert_eq!(p.name().parse::<Pipeline>().unwrap(), p);
    }
    assert!("viterbi".parse::<Pipeline>().is_err());
}

#[test]
fn rar_announces_rnti() {
    let c = codec();
    let ms = 3;
    let ra = crate::sim::ra_rnti_for(ms);
    let target = Rnti(0x4242);
    let p = build_rar_payload(
        Allocation {
            rb_start: 0,
            rb_len: 2,
        },
        target,
        50,
        c.config(),
    )
    .unwrap();
    let mut sf = PdcchSubframe::empty(ms, 44).unwrap();
    place(
        &mut sf,
        CandidateLocation::new(0, AggregationLevel::L4),
        &p,
        ra,
    );

    for pipeline in Pipeline::ALL {
        let (out, dec) = run(pipeline, std::slice::from_ref(&sf));
        assert_eq!(out.len(), 1, "{pipeline:?}");
        assert_eq!(out[0].rnti, ra);
        assert_eq!(out[0].rnti_origin, RntiOrigin::Special);
        let tracked = dec.state.active.contains(target, ms);
        assert_eq!(tracked, pipeline != Pipeline::Lteye, "{pipeline:?}");
    }
}

#[test]
fn malformed_rar_is_counted() {
    let c = codec();
    let ra = crate::sim::ra_rnti_for(0);
    let p = build_rar_payload(
        Allocation {
            rb_start: 0,
            rb_len: 2,
        },
        Rnti(0xFFFE),
        50,
        c.config(),
    )
    .unwrap();
    let mut sf = PdcchSubframe::empty(0, 44).unwrap();
    place(
        &mut sf,
        CandidateLocation::new(4, AggregationLevel::L4),
        &p,
        ra,
    );
    let (_, dec) = run(Pipeline::Falcon, &[sf]);
    assert_eq!(dec.state.rar_malformed, 1);
    assert!(dec.state.active.live(0).is_empty());
}

#[test]
fn falcon_shortcut_accepts_unknown_rnti_at_l2() {
    let rnti = Rnti(0x3456);
    let ms = 7;
    let loc = ue_loc(rnti, ms, AggregationLevel::L2);
    let mut sf = PdcchSubframe::empty(ms, 44).unwrap();
    place(&mut sf, loc, &dl_payload(5, 10), rnti);

    let (out, dec) = run(Pipeline::Falcon, &[sf]);
    assert_eq!(out.len(), 1);
    assert_eq!(
        (out[0].rnti, out[0].rnti_origin),
        (rnti, RntiOrigin::Shortcut)
    );
    assert_eq!(out[0].location(), loc);
    assert_eq!((out[0].rb_start, out[0].rb_len), (5, 10));
    assert_eq!(dec.stats.shortcut_accepts, 1);
    assert_eq!(dec.stats.reencode_calls, 0);
    assert!(dec.state.active.contains(rnti, ms));
}

#[test]
fn falcon_promotes_l1_rnti_on_fifth_sighting() {
    let rnti = Rnti(0x3456);
    let sfs: Vec<PdcchSubframe> = (0..6u64)
        .map(|i| {
            let ms = i * 40;
            let mut sf = PdcchSubframe::empty(ms, 44).unwrap();
            place(
                &mut sf,
                ue_loc(rnti, ms, AggregationLevel::L1),
                &dl_payload(0, 3),
                rnti,
            );
            sf
        })
        .collect();
    let (out, dec) = run(Pipeline::Falcon, &sfs);
    let ms: Vec<u64> = out.iter().map(|d| d.ms).collect();
    assert_eq!(ms, vec![160, 200]);
    assert_eq!(out[0].rnti_origin, RntiOrigin::Histogram);
    assert_eq!(out[1].rnti_origin, RntiOrigin::Histogram);
    assert_eq!(dec.stats.histogram_promotions, 1);
}

#[test]
fn owl_accepts_unknown_rnti_by_reencoding() {
    let rnti = Rnti(0x3456);
    let ms = 2;
    let mut sf = PdcchSubframe::empty(ms, 44).unwrap();
    place(
        &mut sf,
        ue_loc(rnti, ms, AggregationLevel::L1),
        &dl_payload(0, 3),
        rnti,
    );
    for pipeline in [Pipeline::Owl, Pipeline::Lteye] {
        let (out, dec) = run(pipeline, std::slice::from_ref(&sf));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].rnti_origin, RntiOrigin::Reencode);
        assert!(dec.stats.reencode_calls >= 1);
        // re-encode accepts do not make the RNTI known
        assert!(!dec.state.active.contains(rnti, ms));
    }
}

#[test]
fn empty_noiseless_grid_decodes_nothing() {
    let sf = PdcchSubframe::empty(0, 44).unwrap();
    for pipeline in Pipeline::ALL {
        let (out, dec) = run(pipeline, std::slice::from_ref(&sf));
        assert!(out.is_empty());
        assert_eq!(dec.stats.decode_requests, 0);
    }
}

fn key(ms: u64, rnti: Rnti, rb_start: u16, rb_len: u16) -> (u64, Rnti, u16, u16) {
    (ms, rnti, rb_start, rb_len)
}

fn simulate(cfg: &ScenarioConfig) -> (Vec<PdcchSubframe>, Vec<GroundTruthRecord>) {
    let mut sim = Simulator::new(cfg.clone()).unwrap();
    let mut sfs = Vec::new();
    let mut truth = Vec::new();
    for ms in 0..cfg.duration_ms {
        let (sf, t) = sim.step_subframe(ms).unwrap();
        sfs.push(apply_channel(&sf, &cfg.channel));
        truth.extend(t);
    }
    (sfs, truth)
}

#[test]
fn noiseless_stream_decodes_only_transmitted_dcis() {
    let cfg = ScenarioConfig {
        duration_ms: 1500,
        seed: 4,
        ..Default::default()
    }
    .with_preset(Preset::Noiseless);
    let (sfs, truth) = simulate(&cfg);
    let truth: std::collections::BTreeSet<_> = truth
        .iter()
        .map(|t| key(t.ms, t.rnti, t.rb_start, t.rb_len))
        .collect();
    for pipeline in Pipeline::ALL {
        let (out, dec) = run(pipeline, &sfs);
        let wrong: Vec<_> = out
            .iter()
            .filter(|d| !truth.contains(&key(d.ms, d.rnti, d.rb_start, d.rb_len)))
            .collect();
        assert!(
            wrong.is_empty(),
            "{pipeline:?}: {:?}",
            &wrong[..wrong.len().min(3)]
        );
        if pipeline == Pipeline::Falcon {
            assert_eq!(dec.stats.reencode_calls, 0);
        }
        let recall = out.len() as f64 / truth.len() as f64;
        assert!(recall > 0.9, "{pipeline:?} recall {recall}");
    }
}

#[test]
fn shared_cache_matches_private_caches() {
    let cfg = ScenarioConfig {
        duration_ms: 300,
        seed: 9,
        ..Default::default()
    }
    .with_preset(Preset::Fair);
    let (sfs, _) = simulate(&cfg);
    let private: Vec<_> = Pipeline::ALL.iter().map(|&p| run(p, &sfs).0).collect();
    let mut decs: Vec<Decoder> = Pipeline::ALL
        .iter()
        .map(|&p| Decoder::new(DecoderConfig::new(p)).unwrap())
        .collect();
    let mut shared = vec![Vec::new(); 3];
    let mut cache = DecodeCache::new();
    for sf in &sfs {
        for (i, d) in decs.iter_mut().enumerate() {
            let acc = d.decode_subframe(sf, &mut cache);
            shared[i].extend(d.records(sf.ms, &acc));
        }
    }
    assert_eq!(private, shared);
}
