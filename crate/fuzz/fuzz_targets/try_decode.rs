#![no_main]

use libfuzzer_sys::fuzz_target;
use pdcch_lab::codec::{AggregationLevel, Codec, CodecConfig};
use pdcch_lab::decoders::{class_coherent, reencode_match, settle_location, try_decode};
use pdcch_lab::grid::{CandidateLocation, PdcchSubframe, SearchSpaceConfig};

// byte 0: level, byte 1: payload size, byte 2: subframe, rest: soft values
fuzz_target!(|data: &[u8]| {
    if data.len() < 3 {
        return;
    }
    let codec = Codec::new(CodecConfig::default()).unwrap();
    let level = AggregationLevel::ASCENDING[data[0] as usize % 4];
    let sizes = codec.config().payload_sizes(50);
    let size = sizes[data[1] as usize % sizes.len()];
    let n_cce = level.cces();
    let soft: Vec<f32> = (0..level.bits())
        .map(|i| data.get(3 + i).map_or(0.0, |&b| b as i8 as f32 / 32.0))
        .collect();
    let sf = PdcchSubframe::from_soft(data[2] as u64, n_cce, soft).unwrap();
    let loc = CandidateLocation::new(0, level);
    let cand = try_decode(&sf, &loc, size, 50, &codec);
    assert_eq!(cand.payload.len(), size);
    let m = reencode_match(&cand, &sf, &codec);
    assert!((0.0..=1.0).contains(&m));
    let settled = settle_location(&cand, &sf, &codec);
    assert!(settled.start == 0 && settled.level <= level);
    let _ = class_coherent(&cand, sf.subframe(), n_cce, &SearchSpaceConfig::default());
});
