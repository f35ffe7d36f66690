//! On-disk formats.
//!
//! Subframe stream (little-endian):
//!
//! ```text
//! header:  "PDCS"  u16 version=1  u16 n_rb  u16 reserved=0
//! record:  u64 ms  u16 n_cce  f32 soft[n_cce * 72]
//! ```
//!
//! Records must be in strictly increasing `ms` order. Traces are JSON lines,
//! one record per line.

use std::io::{BufRead, ErrorKind, Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::codec::{CodecConfig, CCE_BITS};
use crate::dci::DciFormat;
use crate::error::{Error, Result};
use crate::grid::PdcchSubframe;

pub const STREAM_MAGIC: [u8; 4] = *b"PDCS";
pub const STREAM_VERSION: u16 = 1;
/// Largest control region the reader accepts.
pub const MAX_STREAM_CCES: usize = 1024;

fn stream_err(msg: impl Into<String>) -> Error {
    Error::Stream(msg.into())
}

pub struct SubframeWriter<W: Write> {
    out: W,
    last_ms: Option<u64>,
}

impl<W: Write> SubframeWriter<W> {
    pub fn new(mut out: W, n_rb: u16) -> Result<Self> {
        out.write_all(&STREAM_MAGIC)?;
        out.write_all(&STREAM_VERSION.to_le_bytes())?;
        out.write_all(&n_rb.to_le_bytes())?;
        out.write_all(&0u16.to_le_bytes())?;
        Ok(Self { out, last_ms: None })
    }

    pub fn write(&mut self, sf: &PdcchSubframe) -> Result<()> {
        if self.last_ms.is_some_and(|m| sf.ms <= m) {
            return Err(stream_err(format!(
                "subframe {} written out of order",
                sf.ms
            )));
        }
        if sf.n_cce == 0 || sf.n_cce > MAX_STREAM_CCES {
            return Err(stream_err(format!(
                "n_cce {} outside 1..={MAX_STREAM_CCES}",
                sf.n_cce
            )));
        }
        self.last_ms = Some(sf.ms);
        self.out.write_all(&sf.ms.to_le_bytes())?;
        self.out.write_all(&(sf.n_cce as u16).to_le_bytes())?;
        let mut buf = Vec::with_capacity(sf.soft.len() * 4);
        for v in &sf.soft {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        self.out.write_all(&buf)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Reads a subframe stream, validating every record.
pub struct SubframeReader<R: Read> {
    input: R,
    pub n_rb: u16,
    last_ms: Option<u64>,
    failed: bool,
}

/// Fills `buf`; returns false on a clean end of input before any byte.
fn read_full<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<bool> {
    let mut got = 0;
    while got < buf.len() {
        match r.read(&mut buf[got..]) {
            Ok(0) if got == 0 => return Ok(false),
            Ok(0) => return Err(stream_err("truncated record")),
            Ok(n) => got += n,
            Err(e) if e.kind() == ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(true)
}

impl<R: Read> SubframeReader<R> {
    pub fn new(mut input: R) -> Result<Self> {
        let mut h = [0u8; 10];
        if !read_full(&mut input, &mut h)? {
            return Err(stream_err("empty stream"));
        }
        if h[..4] != STREAM_MAGIC {
            return Err(stream_err("bad magic"));
        }
        let version = u16::from_le_bytes([h[4], h[5]]);
        if version != STREAM_VERSION {
            return Err(stream_err(format!("unsupported version {version}")));
        }
        let n_rb = u16::from_le_bytes([h[6], h[7]]);
        if CodecConfig::default()
            .payload_len(DciFormat::Format1A, n_rb)
            .is_none()
        {
            return Err(stream_err(format!("no DCI sizes for {n_rb} RBs")));
        }
        Ok(Self {
            input,
            n_rb,
            last_ms: None,
            failed: false,
        })
    }

    fn next_record(&mut self) -> Result<Option<PdcchSubframe>> {
        let mut head = [0u8; 10];
        if !read_full(&mut self.input, &mut head)? {
            return Ok(None);
        }
        let ms = u64::from_le_bytes(head[..8].try_into().expect("8 bytes"));
        let n_cce = u16::from_le_bytes([head[8], head[9]]) as usize;
        if n_cce == 0 || n_cce > MAX_STREAM_CCES {
            return Err(stream_err(format!(
                "n_cce {n_cce} outside 1..={MAX_STREAM_CCES}"
            )));
        }
        if self.last_ms.is_some_and(|m| ms <= m) {
            return Err(stream_err(format!("subframe {ms} out of order")));
        }
        let mut raw = vec![0u8; n_cce * CCE_BITS * 4];
        if !read_full(&mut self.input, &mut raw)? {
            return Err(stream_err("truncated record"));
        }
        let soft: Vec<f32> = raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes")))
            .collect();
        if soft.iter().any(|v| !v.is_finite()) {
            return Err(stream_err(format!(
                "non-finite soft value in subframe {ms}"
            )));
        }
        self.last_ms = Some(ms);
        Ok(Some(PdcchSubframe::from_soft(ms, n_cce, soft)?))
    }
}

impl<R: Read> Iterator for SubframeReader<R> {
    type Item = Result<PdcchSubframe>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let r = self.next_record().transpose();
        if matches!(r, Some(Err(_))) {
            self.failed = true;
        }
        r
    }
}

pub fn write_jsonl<'a, T, I, W>(items: I, mut out: W) -> Result<()>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
    W: Write,
{
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(|e| std::io::Error::other(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Parses JSON lines; blank lines are skipped.
pub fn read_jsonl<T: DeserializeOwned, R: BufRead>(input: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| Error::Trace {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(item);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::DecodedDci;
    use crate::sim::GroundTruthRecord;
    use proptest::prelude::*;

    fn sf(ms: u64, n_cce: usize, seed: f32) -> PdcchSubframe {
        let soft = (0..n_cce * CCE_BITS)
            .map(|i| (i as f32 * 0.37 + seed).sin())
            .collect();
        PdcchSubframe::from_soft(ms, n_cce, soft).unwrap()
    }

    fn encode(sfs: &[PdcchSubframe]) -> Vec<u8> {
        let mut w = SubframeWriter::new(Vec::new(), 50).unwrap();
        for s in sfs {
            w.write(s).unwrap();
        }
        w.finish().unwrap()
    }

    #[test]
    fn stream_round_trip() {
        let sfs = vec![sf(0, 44, 0.0), sf(3, 44, 1.0), sf(4, 8, 2.0)];
        let bytes = encode(&sfs);
        assert_eq!(bytes.len(), 10 + 3 * 10 + (44 + 44 + 8) * 72 * 4);
        let r = SubframeReader::new(bytes.as_slice()).unwrap();
        assert_eq!(r.n_rb, 50);
        let back: Vec<PdcchSubframe> = r.collect::<Result<_>>().unwrap();
        assert_eq!(back, sfs);
    }

    #[test]
    fn empty_stream_has_no_records() {
        let bytes = encode(&[]);
        assert_eq!(SubframeReader::new(bytes.as_slice()).unwrap().count(), 0);
    }

    #[test]
    fn malformed_streams_are_rejected() {
        let good = encode(&[sf(0, 4, 0.0), sf(1, 4, 0.0)]);
        assert!(SubframeReader::new(&b""[..]).is_err());
        assert!(SubframeReader::new(&b"PDCX\x01\x00\x32\x00\x00\x00"[..]).is_err());
        assert!(SubframeReader::new(&b"PDCS\x02\x00\x32\x00\x00\x00"[..]).is_err());
        assert!(SubframeReader::new(&b"PDCS\x01\x00\x07\x00\x00\x00"[..]).is_err());

        let truncated = &good[..good.len() - 3];
        let r: Vec<_> = SubframeReader::new(truncated).unwrap().collect();
        assert_eq!(r.len(), 2);
        assert!(r[1].is_err());

        let mut swapped = encode(&[sf(5, 4, 0.0)]);
        swapped.extend_from_slice(&encode(&[sf(5, 4, 0.0)])[10..]);
        assert!(SubframeReader::new(swapped.as_slice())
            .unwrap()
            .nth(1)
            .unwrap()
            .is_err());

        let mut nan = good.clone();
        nan[20..24].copy_from_slice(&f32::NAN.to_le_bytes());
        assert!(SubframeReader::new(nan.as_slice())
            .unwrap()
            .next()
            .unwrap()
            .is_err());

        let mut zero_cce = good;
        zero_cce[18..20].copy_from_slice(&0u16.to_le_bytes());
        assert!(SubframeReader::new(zero_cce.as_slice())
            .unwrap()
            .next()
            .unwrap()
            .is_err());
    }

    #[test]
    fn writer_rejects_out_of_order() {
        let mut w = SubframeWriter::new(Vec::new(), 50).unwrap();
        w.write(&sf(2, 1, 0.0)).unwrap();
        assert!(w.write(&sf(2, 1, 0.0)).is_err());
    }

    #[test]
    fn trace_lines_round_trip() {
        let line = r#"{"ms":12,"dir":"ul","rnti":4660,"rnti_origin":"shortcut","loc_start":8,"loc_L":4,"rb_start":3,"rb_len":9,"pipeline":"falcon"}"#;
        let recs: Vec<DecodedDci> = read_jsonl(format!("{line}\n\n").as_bytes()).unwrap();
        assert_eq!(recs.len(), 1);
        let mut out = Vec::new();
        write_jsonl(&recs, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{line}\n"));
    }

    #[test]
    fn trace_errors_carry_line_numbers() {
        let text = "{\"ms\":1}\n";
        match read_jsonl::<GroundTruthRecord, _>(text.as_bytes()) {
            Err(Error::Trace { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad_level = r#"{"ms":1,"dir":"dl","rnti":70,"rnti_origin":"rar","loc_start":0,"loc_L":3,"rb_start":0,"rb_len":1,"pipeline":"owl"}"#;
        assert!(read_jsonl::<DecodedDci, _>(bad_level.as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..600)) {
            let mut framed = b"PDCS\x01\x00\x32\x00\x00\x00".to_vec();
            framed.extend_from_slice(&bytes);
            if let Ok(r) = SubframeReader::new(framed.as_slice()) {
                for _ in r {}
            }
            let _ = read_jsonl::<DecodedDci, _>(bytes.as_slice());
        }
    }
}
