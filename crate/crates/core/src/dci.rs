//! Simplified DCI payload layouts and the contiguous RB allocation field.
//!
//! Formats 0 and 1A share one payload size and are told apart by the leading
//! flag bit (0 = uplink grant, 1 = downlink grant). Format 2A is a longer
//! downlink-only layout. All layouts start with the flag bit followed by the
//! RIV field.

use serde::{Deserialize, Serialize};

use crate::codec::{CodecConfig, PayloadBits, Rnti};
use crate::error::{invalid, Result};

const MCS_BITS: usize = 5;
const HARQ_BITS: usize = 3;
const RV_BITS: usize = 2;
const TPC_BITS: usize = 2;
const RAR_RNTI_BITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "dl")]
    Downlink,
    #[serde(rename = "ul")]
    Uplink,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Downlink => "dl",
            Direction::Uplink => "ul",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DciFormat {
    #[serde(rename = "0")]
    Format0,
    #[serde(rename = "1A")]
    Format1A,
    #[serde(rename = "2A")]
    Format2A,
}

impl DciFormat {
    pub fn direction(self) -> Direction {
        match self {
            DciFormat::Format0 => Direction::Uplink,
            DciFormat::Format1A | DciFormat::Format2A => Direction::Downlink,
        }
    }

    /// Formats that special RNTIs may use.
    pub fn is_compact(self) -> bool {
        matches!(self, DciFormat::Format0 | DciFormat::Format1A)
    }
}

/// Contiguous resource block allocation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Allocation {
    pub rb_start: u16,
    pub rb_len: u16,
}

impl Allocation {
    pub fn is_valid(&self, n_rb: u16) -> bool {
        self.rb_len >= 1 && self.rb_start as u32 + self.rb_len as u32 <= n_rb as u32
    }

    pub fn end(&self) -> u16 {
        self.rb_start + self.rb_len
    }

    pub fn overlaps(&self, other: &Allocation) -> bool {
        self.rb_start < other.end() && other.rb_start < self.end()
    }
}

/// Width of the RIV field for a bandwidth: ceil(log2(n(n+1)/2)).
pub fn riv_bits(n_rb: u16) -> usize {
    let count = n_rb as u64 * (n_rb as u64 + 1) / 2;
    (64 - (count - 1).leading_zeros()) as usize
}

pub fn riv_encode(alloc: Allocation, n_rb: u16) -> Result<u32> {
    if n_rb == 0 || !alloc.is_valid(n_rb) {
        return Err(invalid(format!(
            "allocation ({}, {}) does not fit {n_rb} RBs",
            alloc.rb_start, alloc.rb_len
        )));
    }
    let (n, s, l) = (n_rb as u32, alloc.rb_start as u32, alloc.rb_len as u32);
    Ok(if l - 1 <= n / 2 {
        n * (l - 1) + s
    } else {
        n * (n - l + 1) + (n - 1 - s)
    })
}

/// Returns `None` for values that no valid allocation encodes to.
pub fn riv_decode(riv: u32, n_rb: u16) -> Option<Allocation> {
    let n = n_rb as u32;
    if n == 0 {
        return None;
    }
    let (a, b) = (riv / n, riv % n);
    let (s, l) = if a + b < n {
        (b, a + 1)
    } else {
        (n - 1 - b, n - a + 1)
    };
    if l == 0 || s + l > n {
        return None;
    }
    let alloc = Allocation {
        rb_start: s as u16,
        rb_len: l as u16,
    };
    (riv_encode(alloc, n_rb).ok() == Some(riv)).then_some(alloc)
}

/// Scheduling fields besides the allocation. `extra` fills any trailing bits
/// of the longer format.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DciFields {
    pub mcs: u8,
    pub harq: u8,
    pub rv: u8,
    pub tpc: u8,
    pub extra: u64,
}

/// Builds a payload of the configured size for `format`.
pub fn build_payload(
    format: DciFormat,
    alloc: Allocation,
    fields: &DciFields,
    n_rb: u16,
    cfg: &CodecConfig,
) -> Result<PayloadBits> {
    let len = cfg
        .payload_len(format, n_rb)
        .ok_or_else(|| invalid(format!("no payload size for {format:?} at {n_rb} RBs")))?;
    let riv = riv_encode(alloc, n_rb)?;
    let rb = riv_bits(n_rb);
    let mut p = PayloadBits::zeros(len)?;
    p.set_field(0, 1, (format != DciFormat::Format0) as u32);
    p.set_field(1, rb, riv);
    let mut off = 1 + rb;
    for (value, width) in [
        (fields.mcs, MCS_BITS),
        (fields.harq, HARQ_BITS),
        (fields.rv, RV_BITS),
        (fields.tpc, TPC_BITS),
    ] {
        if off + width > len {
            return Err(invalid("payload too short for the scheduling fields"));
        }
        p.set_field(off, width, value as u32 & ((1 << width) - 1));
        off += width;
    }
    if format == DciFormat::Format2A {
        for i in off..len {
            p.set_field(i, 1, ((fields.extra >> ((i - off) % 64)) & 1) as u32);
        }
    }
    Ok(p)
}

/// Builds a random access response grant announcing `assigned`. The C-RNTI
/// sits in a 16-bit field right after the RIV.
pub fn build_rar_payload(
    alloc: Allocation,
    assigned: Rnti,
    n_rb: u16,
    cfg: &CodecConfig,
) -> Result<PayloadBits> {
    let len = cfg
        .payload_len(DciFormat::Format1A, n_rb)
        .ok_or_else(|| invalid(format!("no format 1A size at {n_rb} RBs")))?;
    let off = rar_rnti_offset(n_rb);
    if off + RAR_RNTI_BITS > len {
        return Err(invalid("payload too short for the RAR field"));
    }
    let mut p = PayloadBits::zeros(len)?;
    p.set_field(0, 1, 1);
    p.set_field(1, riv_bits(n_rb), riv_encode(alloc, n_rb)?);
    p.set_field(off, RAR_RNTI_BITS, assigned.0 as u32);
    Ok(p)
}

pub fn rar_rnti_offset(n_rb: u16) -> usize {
    1 + riv_bits(n_rb)
}

/// Reads the assigned C-RNTI out of a RAR payload.
pub fn extract_rar_rnti(payload: &PayloadBits, n_rb: u16) -> Option<Rnti> {
    let off = rar_rnti_offset(n_rb);
    (off + RAR_RNTI_BITS <= payload.len()).then(|| Rnti(payload.field(off, RAR_RNTI_BITS) as u16))
}

/// Format and allocation read from a decoded payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParsedDci {
    pub format: DciFormat,
    /// `None` when the RIV field holds no valid allocation.
    pub allocation: Option<Allocation>,
}

impl ParsedDci {
    pub fn direction(&self) -> Direction {
        self.format.direction()
    }
}

/// Interprets a payload by its size and flag bit. Returns `None` when the
/// size is not configured for the bandwidth.
pub fn parse_payload(payload: &PayloadBits, n_rb: u16, cfg: &CodecConfig) -> Option<ParsedDci> {
    let len = payload.len();
    let format = if cfg.payload_len(DciFormat::Format1A, n_rb) == Some(len) {
        if payload.field(0, 1) == 1 {
            DciFormat::Format1A
        } else {
            DciFormat::Format0
        }
    } else if cfg.payload_len(DciFormat::Format2A, n_rb) == Some(len) {
        DciFormat::Format2A
    } else {
        return None;
    };
    let rb = riv_bits(n_rb);
    if 1 + rb > len {
        return None;
    }
    let allocation = riv_decode(payload.field(1, rb), n_rb);
    Some(ParsedDci { format, allocation })
}
