//! DCI channel coding.
//!
//! The transmit chain is CRC-16 attachment with the CRC masked by the RNTI,
//! tail-biting convolutional coding (K = 7, rate 1/3) and circular rate
//! matching into `L` control channel elements. The receive chain inverts it on
//! soft values: rate recovery by accumulation, then tail-biting Viterbi
//! decoding.
//!
//! The decoder runs wrap-around passes over the circular trellis and stops as
//! soon as the surviving path starts and ends in the same state. Short blocks
//! often never produce such a path, so the result is then completed by a
//! bounded search over fixed start states: forward metrics from the first
//! pass and an unconstrained backward pass bound what each start state can
//! reach, and only states that can still beat the best codeword found so far
//! are run. The output is the maximum-likelihood tail-biting codeword.
//!
//! Soft values follow the convention "positive means bit 0".
//!
//! The encoded word is laid out stream by stream (all of `d0`, then `d1`, then
//! `d2`). With no sub-block interleaver this keeps every truncated rate-matched
//! block decodable: the shortest block (one CCE) still carries the full `d0`
//! stream, and the `G0` circulant is invertible for every DCI length in use.

use serde::{Deserialize, Serialize};

use crate::dci::DciFormat;
use crate::error::{invalid, Error, Result};

pub const CCE_BITS: usize = 72;
pub const CRC_BITS: usize = 16;
pub const MAX_PAYLOAD_BITS: usize = 128;

pub static EXPLORED: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(0);
const CRC_POLY: u16 = 0x1021;
const MEMORY: usize = 6;
const NUM_STATES: usize = 1 << MEMORY;

/// Radio network temporary identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rnti(pub u16);

impl std::fmt::Display for Rnti {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0x{:04X}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crc16(pub u16);

/// Number of consecutive CCEs carrying one DCI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum AggregationLevel {
    L1 = 1,
    L2 = 2,
    L4 = 4,
    L8 = 8,
}

impl AggregationLevel {
    pub const ASCENDING: [AggregationLevel; 4] = [Self::L1, Self::L2, Self::L4, Self::L8];
    pub const DESCENDING: [AggregationLevel; 4] = [Self::L8, Self::L4, Self::L2, Self::L1];

    pub fn cces(self) -> usize {
        self as usize
    }

    pub fn bits(self) -> usize {
        self.cces() * CCE_BITS
    }

    pub fn half(self) -> Option<Self> {
        match self {
            Self::L1 => None,
            Self::L2 => Some(Self::L1),
            Self::L4 => Some(Self::L2),
            Self::L8 => Some(Self::L4),
        }
    }

    pub fn double(self) -> Option<Self> {
        match self {
            Self::L1 => Some(Self::L2),
            Self::L2 => Some(Self::L4),
            Self::L4 => Some(Self::L8),
            Self::L8 => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Self::L1 => 0,
            Self::L2 => 1,
            Self::L4 => 2,
            Self::L8 => 3,
        }
    }
}

impl TryFrom<u8> for AggregationLevel {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Self::L1),
            2 => Ok(Self::L2),
            4 => Ok(Self::L4),
            8 => Ok(Self::L8),
            _ => Err(invalid(format!("aggregation level {v} not in {{1,2,4,8}}"))),
        }
    }
}

impl From<AggregationLevel> for u8 {
    fn from(l: AggregationLevel) -> u8 {
        l as u8
    }
}

/// Unencoded DCI body, one `u8` (0 or 1) per bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PayloadBits(Vec<u8>);

impl PayloadBits {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_PAYLOAD_BITS {
            return Err(invalid(format!(
                "payload length {} outside 1..={MAX_PAYLOAD_BITS}",
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(invalid("payload bits must be 0 or 1"));
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Reads `width` bits starting at `offset`, most significant bit first.
    pub fn field(&self, offset: usize, width: usize) -> u32 {
        self.0[offset..offset + width]
            .iter()
            .fold(0u32, |acc, &b| (acc << 1) | b as u32)
    }

    pub fn set_field(&mut self, offset: usize, width: usize, value: u32) {
        for i in 0..width {
            self.0[offset + i] = ((value >> (width - 1 - i)) & 1) as u8;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    pub fn to_bit_string(&self) -> String {
        self.0
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(invalid(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }
}

/// Soft values for one or more CCEs.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SoftBitBlock(Vec<f32>);

impl SoftBitBlock {
    pub fn new(llrs: Vec<f32>) -> Result<Self> {
        if llrs.iter().any(|v| !v.is_finite()) {
            return Err(invalid("soft values must be finite"));
        }
        Ok(Self(llrs))
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayloadSizeEntry {
    pub format: DciFormat,
    pub n_rb: u16,
    pub bits: usize,
}

/// Coding parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodecConfig {
    pub constraint_length: usize,
    /// Octal generator polynomials; the most significant of the seven bits
    /// taps the current input.
    pub generators: [u32; 3],
    pub cce_bits: usize,
    pub payload_size_table: Vec<PayloadSizeEntry>,
    /// Maximum number of wrap-around passes before the bounded start-state
    /// search takes over.
    pub wrap_passes: usize,
}

impl Default for CodecConfig {
    fn default() -> Self {
        use DciFormat::*;
        let entry = |format, n_rb, bits| PayloadSizeEntry { format, n_rb, bits };
        Self {
            constraint_length: 7,
            generators: [0o133, 0o171, 0o165],
            cce_bits: CCE_BITS,
            payload_size_table: vec![
                entry(Format0, 50, 28),
                entry(Format1A, 50, 28),
                entry(Format2A, 50, 44),
                entry(Format0, 100, 30),
                entry(Format1A, 100, 30),
                entry(Format2A, 100, 47),
            ],
            wrap_passes: 2,
        }
    }
}

impl CodecConfig {
    pub fn validate(&self) -> Result<()> {
        if self.constraint_length != 7 {
            return Err(Error::Config("constraint_length must be 7".into()));
        }
        if self.cce_bits != CCE_BITS {
            return Err(Error::Config("cce_bits must be 72".into()));
        }
        if self.wrap_passes == 0 {
            return Err(Error::Config("wrap_passes must be at least 1".into()));
        }
        for &g in &self.generators {
            // The butterfly decoder relies on every generator tapping both the
            // input and the oldest stage.
            if g >= 1 << 7 || g & 0o101 != 0o101 {
                return Err(Error::Config(format!(
                    "generator {g:o} must be 7 bits and tap both register ends"
                )));
            }
        }
        for e in &self.payload_size_table {
            if e.bits == 0 || e.bits > MAX_PAYLOAD_BITS {
                return Err(Error::Config(format!(
                    "payload size {} out of range",
                    e.bits
                )));
            }
        }
        Ok(())
    }

    pub fn payload_len(&self, format: DciFormat, n_rb: u16) -> Option<usize> {
        self.payload_size_table
            .iter()
            .find(|e| e.format == format && e.n_rb == n_rb)
            .map(|e| e.bits)
    }

    /// Distinct payload sizes for a bandwidth, ascending.
    pub fn payload_sizes(&self, n_rb: u16) -> Vec<usize> {
        let mut sizes: Vec<usize> = self
            .payload_size_table
            .iter()
            .filter(|e| e.n_rb == n_rb)
            .map(|e| e.bits)
            .collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    fn is_table_size(&self, bits: usize) -> bool {
        self.payload_size_table.iter().any(|e| e.bits == bits)
    }
}

pub fn crc16(payload: &PayloadBits) -> Crc16 {
    Crc16(crc16_bits(payload.as_slice()))
}

fn crc16_bits(bits: &[u8]) -> u16 {
    let mut reg: u16 = 0;
    for &b in bits {
        let feedback = ((reg >> 15) as u8 ^ b) & 1;
        reg <<= 1;
        if feedback == 1 {
            reg ^= CRC_POLY;
        }
    }
    reg
}

pub fn scramble_crc(crc: Crc16, rnti: Rnti) -> Crc16 {
    Crc16(crc.0 ^ rnti.0)
}

/// Decoded DCI before any validation.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodedDci {
    pub payload: PayloadBits,
    /// Computed CRC XOR received CRC field.
    pub rnti: Rnti,
    /// Correlation of the decoded path with the recovered soft values.
    pub metric: f32,
}

/// Convolutional code tables plus the hot encode/decode paths.
#[derive(Clone, Debug)]
pub struct Codec {
    cfg: CodecConfig,
    /// Output triplet for a 7-bit register (bit 6 = current input).
    /// Bit `i` of the entry is stream `i`.
    outputs: [u8; 1 << 7],
    /// For butterfly `j` and stream `i`: +1 if the transition 2j -> j emits
    /// a 0 on stream `i`, else -1.
    signs: [[f32; NUM_STATES / 2]; 3],
    avx2: bool,
}

impl Codec {
    pub fn new(cfg: CodecConfig) -> Result<Self> {
        cfg.validate()?;
        let mut outputs = [0u8; 1 << 7];
        for (reg, out) in outputs.iter_mut().enumerate() {
            for (i, &g) in cfg.generators.iter().enumerate() {
                let parity = ((reg as u32) & g).count_ones() & 1;
                *out |= (parity as u8) << i;
            }
        }
        let mut signs = [[0f32; NUM_STATES / 2]; 3];
        for j in 0..NUM_STATES / 2 {
            // new state j (input 0) from predecessor 2j
            let o = outputs[2 * j];
            for (i, row) in signs.iter_mut().enumerate() {
                row[j] = if (o >> i) & 1 == 0 { 1.0 } else { -1.0 };
            }
        }
        #[cfg(target_arch = "x86_64")]
        let avx2 = std::arch::is_x86_feature_detected!("avx2");
        #[cfg(not(target_arch = "x86_64"))]
        let avx2 = false;
        Ok(Self {
            cfg,
            outputs,
            signs,
            avx2,
        })
    }

    pub fn config(&self) -> &CodecConfig {
        &self.cfg
    }

    /// Tail-biting rate-1/3 encoding, stream-ordered output of length `3n`.
    pub fn conv_encode(&self, bits: &[u8]) -> Result<Vec<u8>> {
        let n = bits.len();
        if n < MEMORY {
            return Err(invalid(format!(
                "tail-biting encoding needs at least {MEMORY} input bits, got {n}"
            )));
        }
        let mut state: usize = 0;
        for &b in &bits[n - MEMORY..] {
            state = ((b as usize) << 5) | (state >> 1);
        }
        let mut out = vec![0u8; 3 * n];
        for (k, &b) in bits.iter().enumerate() {
            let reg = ((b as usize) << 6) | state;
            let o = self.outputs[reg];
            out[k] = o & 1;
            out[n + k] = (o >> 1) & 1;
            out[2 * n + k] = (o >> 2) & 1;
            state = reg >> 1;
        }
        Ok(out)
    }

    /// Soft tail-biting Viterbi decoding of a stream-ordered word of `n`
    /// information bits. Returns the bits and the codeword's correlation with
    /// `soft`.
    pub fn viterbi(&self, soft: &[f32], n: usize) -> Result<(Vec<u8>, f32)> {
        if n < MEMORY || soft.len() != 3 * n {
            return Err(invalid(format!(
                "soft length {} does not match 3 x {n} information bits",
                soft.len()
            )));
        }
        #[cfg(target_arch = "x86_64")]
        if self.avx2 {
            // SAFETY: the CPU reported AVX2 support when the codec was built.
            return Ok(unsafe { self.viterbi_avx2(soft, n) });
        }
        Ok(self.viterbi_inner(soft, n))
    }

    /// Same arithmetic as the portable path (no FMA), so results are
    /// bit-identical; only the vector width differs.
    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn viterbi_avx2(&self, soft: &[f32], n: usize) -> (Vec<u8>, f32) {
        self.viterbi_inner(soft, n)
    }

    #[inline(always)]
    fn viterbi_inner(&self, soft: &[f32], n: usize) -> (Vec<u8>, f32) {
        let (s0, rest) = soft.split_at(n);
        let (s1, s2) = rest.split_at(n);
        let mut metric = [0f32; NUM_STATES];
        let mut decisions = vec![0u64; n];
        // After the first pass from all-zero metrics, metric[s] bounds every
        // path ending in s, tail-biting or not.
        let mut bound = [0f32; NUM_STATES];
        let mut best: Option<(Vec<u8>, f32)> = None;
        for pass in 0..self.cfg.wrap_passes {
            let start_metric = metric;
            for t in 0..n {
                decisions[t] = self.step::<true>(&mut metric, s0[t], s1[t], s2[t]);
            }
            if pass == 0 {
                bound = metric;
            }
            let end_state = argmax(&metric);
            let (bits, start_state) = traceback(&decisions, end_state);
            if start_state == end_state {
                let path_metric = metric[end_state] - start_metric[start_state];
                best = Some((bits, path_metric));
                break;
            }
            // Any bit sequence is a message; score it as a real codeword.
            let score = self.correlate(&bits, soft);
            if best.as_ref().is_none_or(|b| score > b.1) {
                best = Some((bits, score));
            }
            let max = metric[end_state];
            metric.iter_mut().for_each(|m| *m -= max);
        }
        let (mut bits, mut floor) = best.expect("at least one pass");
        if floor >= bound.iter().copied().fold(f32::NEG_INFINITY, f32::max) {
            return (bits, floor);
        }

        // Close the gap to ML. beta[t][x] bounds the metric any path can
        // still collect from state x at time t, so a start state (and later a
        // partial run) is abandoned once it cannot beat the best codeword.
        let beta = self.backward_bounds(s0, s1, s2);
        let mut order: Vec<usize> = (0..NUM_STATES).collect();
        let start_bound = |s: usize| bound[s].min(beta[0][s]);
        order.sort_by(|&x, &y| start_bound(y).total_cmp(&start_bound(x)).then(x.cmp(&y)));
        'states: for s in order {
            if start_bound(s) <= floor {
                break;
            }
            let mut m = [f32::NEG_INFINITY; NUM_STATES];
            m[s] = 0.0;
            for t in 0..n {
                self.step::<false>(&mut m, s0[t], s1[t], s2[t]);
                if t % 4 == 3 {
                    let reach = m
                        .iter()
                        .zip(&beta[t + 1])
                        .map(|(a, b)| a + b)
                        .fold(f32::NEG_INFINITY, f32::max);
                    if reach <= floor {
                        continue 'states;
                    }
                }
            }
            if m[s] > floor {
                floor = m[s];
                // rerun keeping the decisions
                let mut m = [f32::NEG_INFINITY; NUM_STATES];
                m[s] = 0.0;
                for t in 0..n {
                    decisions[t] = self.step::<true>(&mut m, s0[t], s1[t], s2[t]);
                }
                bits = traceback(&decisions, s).0;
            }
        }
        (bits, floor)
    }

    /// Unconstrained backward metrics: `beta[t][x]` is the best metric
    /// collectable from state `x` at time `t` to the end of the block.
    #[inline(always)]
    fn backward_bounds(&self, s0: &[f32], s1: &[f32], s2: &[f32]) -> Vec<[f32; NUM_STATES]> {
        const H: usize = NUM_STATES / 2;
        let n = s0.len();
        let mut beta = vec![[0f32; NUM_STATES]; n + 1];
        for t in (0..n).rev() {
            let next = beta[t + 1];
            let cur = &mut beta[t];
            for j in 0..H {
                let br =
                    s0[t] * self.signs[0][j] + s1[t] * self.signs[1][j] + s2[t] * self.signs[2][j];
                let (lo, hi) = (next[j], next[j + H]);
                cur[2 * j] = (lo + br).max(hi - br);
                cur[2 * j + 1] = (lo - br).max(hi + br);
            }
        }
        beta
    }

    /// Correlation of the stream-ordered soft word with the codeword of
    /// `bits`.
    fn correlate(&self, bits: &[u8], soft: &[f32]) -> f32 {
        let n = bits.len();
        let mut state: usize = 0;
        for &b in &bits[n - MEMORY..] {
            state = ((b as usize) << 5) | (state >> 1);
        }
        let mut sum = 0.0;
        for (k, &b) in bits.iter().enumerate() {
            let reg = ((b as usize) << 6) | state;
            let o = self.outputs[reg];
            for i in 0..3 {
                let v = soft[i * n + k];
                sum += if (o >> i) & 1 == 0 { v } else { -v };
            }
            state = reg >> 1;
        }
        sum
    }

    /// One add-compare-select step in place. With `DEC`, returns the
    /// survivor decisions: bit `s` is set when state `s` was reached from its
    /// odd predecessor.
    #[inline(always)]
    fn step<const DEC: bool>(&self, metric: &mut [f32; NUM_STATES], a: f32, b: f32, c: f32) -> u64 {
        const H: usize = NUM_STATES / 2;
        let mut even = [0f32; H];
        let mut odd = [0f32; H];
        let mut br = [0f32; H];
        for j in 0..H {
            even[j] = metric[2 * j];
            odd[j] = metric[2 * j + 1];
            br[j] = a * self.signs[0][j] + b * self.signs[1][j] + c * self.signs[2][j];
        }
        // Every generator taps the oldest stage, so the odd predecessor sees
        // the complemented triplet (-br); the input-1 transitions swap roles.
        for j in 0..H {
            let (lo0, lo1) = (even[j] + br[j], odd[j] - br[j]);
            let (hi0, hi1) = (even[j] - br[j], odd[j] + br[j]);
            metric[j] = if lo1 > lo0 { lo1 } else { lo0 };
            metric[j + H] = if hi1 > hi0 { hi1 } else { hi0 };
        }
        if !DEC {
            return 0;
        }
        let mut dec = 0u64;
        for j in 0..H {
            dec |= ((odd[j] - br[j] > even[j] + br[j]) as u64) << j;
            dec |= ((odd[j] + br[j] > even[j] - br[j]) as u64) << (j + H);
        }
        dec
    }

    /// CRC, RNTI mask, convolutional coding and rate matching.
    pub fn encode_dci(
        &self,
        payload: &PayloadBits,
        rnti: Rnti,
        level: AggregationLevel,
    ) -> Result<Vec<u8>> {
        if !self.cfg.is_table_size(payload.len()) {
            return Err(invalid(format!(
                "payload length {} is not a configured DCI size",
                payload.len()
            )));
        }
        let encoded = self.encode_word(payload, rnti)?;
        rate_match(&encoded, level)
    }

    /// The mother codeword (before rate matching) of `payload` addressed to
    /// `rnti`.
    pub fn encode_word(&self, payload: &PayloadBits, rnti: Rnti) -> Result<Vec<u8>> {
        let masked = scramble_crc(crc16(payload), rnti);
        let mut word = Vec::with_capacity(payload.len() + CRC_BITS);
        word.extend_from_slice(payload.as_slice());
        word.extend((0..CRC_BITS).rev().map(|i| ((masked.0 >> i) & 1) as u8));
        self.conv_encode(&word)
    }

    /// Rate recovery, Viterbi and RNTI extraction for one candidate block.
    pub fn decode_dci(&self, soft: &[f32], payload_len: usize) -> Result<DecodedDci> {
        if payload_len == 0 || payload_len > MAX_PAYLOAD_BITS {
            return Err(invalid(format!(
                "payload length {payload_len} out of range"
            )));
        }
        let n = payload_len + CRC_BITS;
        let recovered = rate_recover_slice(soft, 3 * n)?;
        let (bits, metric) = self.viterbi(&recovered, n)?;
        let payload = PayloadBits(bits[..payload_len].to_vec());
        let received = bits[payload_len..]
            .iter()
            .fold(0u16, |acc, &b| (acc << 1) | b as u16);
        let rnti = Rnti(crc16(&payload).0 ^ received);
        Ok(DecodedDci {
            payload,
            rnti,
            metric,
        })
    }
}

fn argmax(metric: &[f32; NUM_STATES]) -> usize {
    let mut best = 0;
    for (s, &m) in metric.iter().enumerate() {
        if m > metric[best] {
            best = s;
        }
    }
    best
}

/// Follows survivor decisions back from `end_state`; returns the bits and the
/// state the path started in.
fn traceback(decisions: &[u64], end_state: usize) -> (Vec<u8>, usize) {
    let mut state = end_state;
    let mut bits = vec![0u8; decisions.len()];
    for t in (0..decisions.len()).rev() {
        bits[t] = (state >> 5) as u8;
        let x = ((decisions[t] >> state) & 1) as usize;
        state = ((state << 1) & (NUM_STATES - 1)) | x;
    }
    (bits, state)
}

/// Tail-biting convolutional encoding with the configured generators.
pub fn conv_encode(bits: &PayloadBits, cfg: &CodecConfig) -> Result<Vec<u8>> {
    Codec::new(cfg.clone())?.conv_encode(bits.as_slice())
}

/// Circular-buffer rate matching: `out[i] = encoded[i mod len]`.
pub fn rate_match(encoded: &[u8], level: AggregationLevel) -> Result<Vec<u8>> {
    if encoded.is_empty() {
        return Err(invalid("cannot rate-match an empty word"));
    }
    Ok(encoded.iter().copied().cycle().take(level.bits()).collect())
}

/// Inverse of [`rate_match`]: accumulates every received copy of each
/// position. Positions never received stay at zero.
pub fn rate_recover(soft: &SoftBitBlock, encoded_len: usize) -> Result<SoftBitBlock> {
    rate_recover_slice(soft.as_slice(), encoded_len).map(SoftBitBlock)
}

fn rate_recover_slice(soft: &[f32], encoded_len: usize) -> Result<Vec<f32>> {
    if encoded_len == 0 {
        return Err(invalid("encoded length must be positive"));
    }
    if soft.is_empty() || !soft.len().is_multiple_of(CCE_BITS) {
        return Err(invalid(format!(
            "soft block of {} values is not a whole number of CCEs",
            soft.len()
        )));
    }
    let mut out = vec![0f32; encoded_len];
    for chunk in soft.chunks(encoded_len) {
        for (o, &s) in out.iter_mut().zip(chunk) {
            *o += s;
        }
    }
    Ok(out)
}

pub fn viterbi_decode(
    soft: &SoftBitBlock,
    payload_len: usize,
    cfg: &CodecConfig,
) -> Result<PayloadBits> {
    let (bits, _) = Codec::new(cfg.clone())?.viterbi(soft.as_slice(), payload_len + CRC_BITS)?;
    PayloadBits::new(bits)
}

pub fn encode_dci(
    payload: &PayloadBits,
    rnti: Rnti,
    level: AggregationLevel,
    cfg: &CodecConfig,
) -> Result<Vec<u8>> {
    Codec::new(cfg.clone())?.encode_dci(payload, rnti, level)
}

/// Maps bits to unit-amplitude antipodal soft values (0 -> +1, 1 -> -1).
pub fn bits_to_soft(bits: &[u8]) -> Vec<f32> {
    bits.iter()
        .map(|&b| if b == 0 { 1.0 } else { -1.0 })
        .collect()
}
