#![no_main]

use libfuzzer_sys::fuzz_target;
use pdcch_lab::decoders::DecodedDci;
use pdcch_lab::io::{read_jsonl, write_jsonl};
use pdcch_lab::sim::GroundTruthRecord;

fuzz_target!(|data: &[u8]| {
    if let Ok(recs) = read_jsonl::<DecodedDci, _>(data) {
        let mut out = Vec::new();
        write_jsonl(&recs, &mut out).unwrap();
        assert_eq!(read_jsonl::<DecodedDci, _>(out.as_slice()).unwrap(), recs);
    }
    let _ = read_jsonl::<GroundTruthRecord, _>(data);
});
