//! Digital stimulus generation: PRBS streams, fixed patterns, and the
//! framed multi-channel signal sets driven onto the optical test bed.

use crate::error::{Error, Result};

/// A logical bit stream together with its nominal bit rate.
///
/// The stream is assumed to drive a line that idles low before the first
/// bit, so a pattern starting with 1 implies a leading rising transition.
#[derive(Debug, Clone, PartialEq)]
pub struct BitPattern {
    bits: Vec<u8>,
    bit_rate_bps: f64,
}

impl BitPattern {
    /// Build a pattern from raw bits (each 0 or 1) and a positive bit rate.
    pub fn new(bits: Vec<u8>, bit_rate_bps: f64) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidPattern("bit pattern must be non-empty".into()));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidPattern(format!("bit value {b} is not 0 or 1")));
        }
        if !(bit_rate_bps > 0.0) || !bit_rate_bps.is_finite() {
            return Err(Error::InvalidPattern(format!(
                "bit rate {bit_rate_bps} bps must be positive and finite"
            )));
        }
        Ok(Self { bits, bit_rate_bps })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit_rate_bps(&self) -> f64 {
        self.bit_rate_bps
    }

    /// Bit period T = 1/rate, in picoseconds.
    pub fn bit_period_ps(&self) -> f64 {
        1e12 / self.bit_rate_bps
    }

    /// Number of value transitions, counting from the idle-low state that
    /// precedes the first bit.
    pub fn transition_count(&self) -> usize {
        let mut prev = 0u8;
        let mut count = 0;
        for &b in &self.bits {
            if b != prev {
                count += 1;
                prev = b;
            }
        }
        count
    }
}

/// Fibonacci LFSR description: feedback polynomial plus starting state.
///
/// The polynomial is given by its exponent set, e.g. `{7, 6}` for
/// x^7 + x^6 + 1 (the constant term is implicit). The register degree is
/// the largest exponent. Stage `i` shifts into stage `i+1` each step, the
/// feedback XOR of the tapped stages enters stage 1, and the output is
/// taken from the highest-degree stage before the shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrSpec {
    taps: Vec<u32>,
    seed: u64,
}

impl LfsrSpec {
    /// Maximum supported register degree (state is held in a `u64`).
    pub const MAX_DEGREE: u32 = 63;

    pub fn new(taps: &[u32], seed: u64) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidPolynomial("tap set is empty".into()));
        }
        let mut taps: Vec<u32> = taps.to_vec();
        taps.sort_unstable();
        taps.dedup();
        if taps[0] == 0 {
            return Err(Error::InvalidPolynomial(
                "tap positions start at 1; the constant term is implicit".into(),
            ));
        }
        let degree = *taps.last().unwrap();
        if degree < 2 {
            return Err(Error::InvalidPolynomial(format!(
                "polynomial degree {degree} is below the minimum of 2"
            )));
        }
        if degree > Self::MAX_DEGREE {
            return Err(Error::InvalidPolynomial(format!(
                "polynomial degree {degree} exceeds the maximum of {}",
                Self::MAX_DEGREE
            )));
        }
        let mask = Self::state_mask(degree);
        if seed & mask == 0 {
            return Err(Error::InvalidSeed);
        }
        Ok(Self { taps, seed: seed & mask })
    }

    /// Industry-standard PRBS-7 register: x^7 + x^6 + 1 seeded all-ones.
    pub fn prbs7() -> Self {
        Self::new(&[7, 6], 0x7f).expect("PRBS-7 spec is valid")
    }

    pub fn degree(&self) -> u32 {
        *self.taps.last().unwrap()
    }

    pub fn taps(&self) -> &[u32] {
        &self.taps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn state_mask(degree: u32) -> u64 {
        (1u64 << degree) - 1
    }

    /// Output bit of a given state: the highest-degree stage.
    fn output(&self, state: u64) -> u8 {
        ((state >> (self.degree() - 1)) & 1) as u8
    }

    /// Advance the register one step.
    fn step(&self, state: u64) -> u64 {
        let feedback = self
            .taps
            .iter()
            .fold(0u64, |acc, &t| acc ^ (state >> (t - 1)));
        ((state << 1) | (feedback & 1)) & Self::state_mask(self.degree())
    }
}

/// Generate the first `n_bits` of the pseudo-random bit sequence defined by
/// `spec`, at the given bit rate. Deterministic for a fixed spec.
pub fn prbs_generate(spec: &LfsrSpec, n_bits: usize, rate_bps: f64) -> Result<BitPattern> {
    if n_bits == 0 {
        return Err(Error::InvalidPattern("n_bits must be at least 1".into()));
    }
    let mut state = spec.seed();
    let mut bits = Vec::with_capacity(n_bits);
    for _ in 0..n_bits {
        bits.push(spec.output(state));
        state = spec.step(state);
    }
    BitPattern::new(bits, rate_bps)
}

/// Deterministic non-PRBS stimulus shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedKind {
    /// 1,0,1,0,...
    Alternating,
    AllOnes,
    AllZeros,
    /// A caller-supplied cycle, repeated to the requested length.
    Custom(Vec<u8>),
}

/// Build a fixed pattern of the requested kind and length.
pub fn fixed_pattern(kind: &FixedKind, n_bits: usize, rate_bps: f64) -> Result<BitPattern> {
    if n_bits == 0 {
        return Err(Error::InvalidPattern("n_bits must be at least 1".into()));
    }
    let bits = match kind {
        FixedKind::Alternating => (0..n_bits).map(|i| (1 - i % 2) as u8).collect(),
        FixedKind::AllOnes => vec![1u8; n_bits],
        FixedKind::AllZeros => vec![0u8; n_bits],
        FixedKind::Custom(cycle) => {
            if cycle.is_empty() {
                return Err(Error::InvalidPattern("custom pattern is empty".into()));
            }
            (0..n_bits).map(|i| cycle[i % cycle.len()]).collect()
        }
    };
    BitPattern::new(bits, rate_bps)
}

/// One framed transmit burst: four synchronous data channels, a
/// source-synchronous clock, a framing channel asserted for the burst, and
/// four lower-rate header channels carrying routing address bits.
#[derive(Debug, Clone, PartialEq)]
pub struct VortexFrame {
    pub data: [BitPattern; 4],
    pub clock: BitPattern,
    pub frame: BitPattern,
    pub header: [BitPattern; 4],
}

impl VortexFrame {
    /// Check the cross-channel invariants.
    pub fn validate(&self) -> Result<()> {
        let len = self.data[0].len();
        let rate = self.data[0].bit_rate_bps();
        for (i, ch) in self.data.iter().enumerate() {
            if ch.len() != len || ch.bit_rate_bps() != rate {
                return Err(Error::ShapeMismatch(format!(
                    "data channel {i} does not match channel 0 in length or rate"
                )));
            }
        }
        if self.clock.len() != len || self.clock.bit_rate_bps() != rate {
            return Err(Error::ShapeMismatch(
                "clock channel does not match the data channels".into(),
            ));
        }
        for k in 1..len {
            if self.clock.bits()[k] == self.clock.bits()[k - 1] {
                return Err(Error::InvalidPattern(format!(
                    "clock channel misses a transition at bit boundary {k}"
                )));
            }
        }
        let burst_ps = len as f64 * self.data[0].bit_period_ps();
        let frame_ps = self.frame.len() as f64 * self.frame.bit_period_ps();
        if (frame_ps - burst_ps).abs() > 1e-6 * burst_ps {
            return Err(Error::ShapeMismatch(format!(
                "frame channel covers {frame_ps} ps but the data burst is {burst_ps} ps"
            )));
        }
        if self.frame.bits().iter().any(|&b| b != 1) {
            return Err(Error::InvalidPattern(
                "frame channel must be asserted for the whole burst".into(),
            ));
        }
        for (i, ch) in self.header.iter().enumerate() {
            if ch.len() != self.frame.len() || ch.bit_rate_bps() != self.frame.bit_rate_bps() {
                return Err(Error::ShapeMismatch(format!(
                    "header channel {i} does not match the frame channel shape"
                )));
            }
        }
        Ok(())
    }

    /// All ten channels with stable names, data channels first.
    pub fn channels(&self) -> Vec<(String, &BitPattern)> {
        let mut out = Vec::with_capacity(10);
        for (i, ch) in self.data.iter().enumerate() {
            out.push((format!("data{i}"), ch));
        }
        out.push(("clock".to_string(), &self.clock));
        out.push(("frame".to_string(), &self.frame));
        for (i, ch) in self.header.iter().enumerate() {
            out.push((format!("header{i}"), ch));
        }
        out
    }
}

/// Assemble a transmit frame from four equal-length data words.
///
/// Frame and header channels run at `data_rate / frame_rate_divisor`; the
/// divisor must divide the word length so the frame assertion covers the
/// burst exactly. Each header channel holds one routing address bit for the
/// full burst.
pub fn build_vortex_frame(
    data_words: [Vec<u8>; 4],
    header_bits: [u8; 4],
    data_rate_bps: f64,
    frame_rate_divisor: u32,
) -> Result<VortexFrame> {
    let len = data_words[0].len();
    if data_words.iter().any(|w| w.len() != len) {
        let lens: Vec<usize> = data_words.iter().map(|w| w.len()).collect();
        return Err(Error::ShapeMismatch(format!(
            "data words must have equal lengths, got {lens:?}"
        )));
    }
    if frame_rate_divisor == 0 {
        return Err(Error::InvalidPattern("frame rate divisor must be at least 1".into()));
    }
    let divisor = frame_rate_divisor as usize;
    if len == 0 || len % divisor != 0 {
        return Err(Error::ShapeMismatch(format!(
            "word length {len} is not a positive multiple of the frame divisor {divisor}"
        )));
    }
    let [w0, w1, w2, w3] = data_words;
    let data = [
        BitPattern::new(w0, data_rate_bps)?,
        BitPattern::new(w1, data_rate_bps)?,
        BitPattern::new(w2, data_rate_bps)?,
        BitPattern::new(w3, data_rate_bps)?,
    ];
    let clock = fixed_pattern(&FixedKind::Alternating, len, data_rate_bps)?;
    let low_rate = data_rate_bps / divisor as f64;
    let low_len = len / divisor;
    let frame = fixed_pattern(&FixedKind::AllOnes, low_len, low_rate)?;
    let header = [
        fixed_pattern(&FixedKind::Custom(vec![header_bits[0]]), low_len, low_rate)?,
        fixed_pattern(&FixedKind::Custom(vec![header_bits[1]]), low_len, low_rate)?,
        fixed_pattern(&FixedKind::Custom(vec![header_bits[2]]), low_len, low_rate)?,
        fixed_pattern(&FixedKind::Custom(vec![header_bits[3]]), low_len, low_rate)?,
    ];
    let frame = VortexFrame { data, clock, frame, header };
    frame.validate()?;
    Ok(frame)
}
