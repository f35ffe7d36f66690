#![no_main]

use libfuzzer_sys::fuzz_target;
use pdcch_lab::io::SubframeReader;

fuzz_target!(|data: &[u8]| {
    if let Ok(reader) = SubframeReader::new(data) {
        let mut last = None;
        for sf in reader {
            let Ok(sf) = sf else { break };
            assert!(last.is_none_or(|m| sf.ms > m));
            assert!(sf.soft.iter().all(|v| v.is_finite()));
            last = Some(sf.ms);
        }
    }
});
