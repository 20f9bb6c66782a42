//! Serialization chain: byte-wide channel multiplexing and programmable
//! edge placement on a picosecond grid.

use crate::error::{Error, Result};
use crate::pattern::BitPattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeDirection {
    Rising,
    Falling,
}

/// One signal transition at a real-valued time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub time_ps: f64,
    pub direction: EdgeDirection,
}

/// Ordered transitions of one signal over a validity span.
///
/// Edge times are strictly increasing, directions alternate, and every
/// edge lies inside `[t_start, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSequence {
    edges: Vec<Edge>,
    t_start_ps: f64,
    t_end_ps: f64,
}

impl EdgeSequence {
    pub fn new(edges: Vec<Edge>, t_start_ps: f64, t_end_ps: f64) -> Result<Self> {
        if !(t_end_ps >= t_start_ps) {
            return Err(Error::InvalidPattern(format!(
                "edge sequence span [{t_start_ps}, {t_end_ps}] ps is inverted"
            )));
        }
        for pair in edges.windows(2) {
            if !(pair[1].time_ps > pair[0].time_ps) {
                return Err(Error::EdgeCollision(format!(
                    "edge at {} ps does not strictly follow edge at {} ps",
                    pair[1].time_ps, pair[0].time_ps
                )));
            }
            if pair[1].direction == pair[0].direction {
                return Err(Error::InvalidPattern(
                    "edge directions must alternate".into(),
                ));
            }
        }
        for e in &edges {
            if e.time_ps < t_start_ps || e.time_ps > t_end_ps {
                return Err(Error::OutOfRange {
                    t: e.time_ps,
                    start: t_start_ps,
                    end: t_end_ps,
                });
            }
        }
        Ok(Self { edges, t_start_ps, t_end_ps })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn t_start_ps(&self) -> f64 {
        self.t_start_ps
    }

    pub fn t_end_ps(&self) -> f64 {
        self.t_end_ps
    }
}

/// Programmable placement of leading and trailing edges.
///
/// Delays are quantized onto the resolution grid at construction, so a
/// stored program always holds grid-aligned values within the range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeProgram {
    leading_delay_ps: f64,
    trailing_delay_ps: f64,
    resolution_ps: f64,
    range_ps: f64,
}

impl EdgeProgram {
    pub const DEFAULT_RESOLUTION_PS: f64 = 10.0;
    pub const DEFAULT_RANGE_PS: f64 = 10_000.0;

    pub fn new(
        leading_delay_ps: f64,
        trailing_delay_ps: f64,
        resolution_ps: f64,
        range_ps: f64,
    ) -> Result<Self> {
        if !(resolution_ps > 0.0) || !resolution_ps.is_finite() {
            return Err(Error::InvalidProgram(format!(
                "resolution {resolution_ps} ps must be positive"
            )));
        }
        if !(range_ps >= resolution_ps) {
            return Err(Error::InvalidProgram(format!(
                "range {range_ps} ps must be at least one resolution step"
            )));
        }
        let leading = quantize(leading_delay_ps, resolution_ps, range_ps)?;
        let trailing = quantize(trailing_delay_ps, resolution_ps, range_ps)?;
        Ok(Self {
            leading_delay_ps: leading,
            trailing_delay_ps: trailing,
            resolution_ps,
            range_ps,
        })
    }

    /// Program with the default 10 ps resolution over a 10 ns range.
    pub fn with_delays(leading_delay_ps: f64, trailing_delay_ps: f64) -> Result<Self> {
        Self::new(
            leading_delay_ps,
            trailing_delay_ps,
            Self::DEFAULT_RESOLUTION_PS,
            Self::DEFAULT_RANGE_PS,
        )
    }

    pub fn leading_delay_ps(&self) -> f64 {
        self.leading_delay_ps
    }

    pub fn trailing_delay_ps(&self) -> f64 {
        self.trailing_delay_ps
    }

    pub fn resolution_ps(&self) -> f64 {
        self.resolution_ps
    }

    pub fn range_ps(&self) -> f64 {
        self.range_ps
    }
}

impl Default for EdgeProgram {
    fn default() -> Self {
        Self::with_delays(0.0, 0.0).unwrap()
    }
}

fn quantize(requested_ps: f64, resolution_ps: f64, range_ps: f64) -> Result<f64> {
    if requested_ps < 0.0 || !requested_ps.is_finite() {
        return Err(Error::InvalidDelay(requested_ps));
    }
    if requested_ps > range_ps {
        return Err(Error::RangeExceeded {
            requested: requested_ps,
            range: range_ps,
        });
    }
    // Nearest grid point, ties toward zero.
    let steps = (requested_ps / resolution_ps - 0.5).ceil();
    Ok(steps * resolution_ps)
}

/// Snap a requested delay onto the program's resolution grid.
///
/// Rounds to the nearest multiple of the resolution, ties toward zero.
pub fn quantize_delay(requested_ps: f64, program: &EdgeProgram) -> Result<f64> {
    quantize(requested_ps, program.resolution_ps, program.range_ps)
}

const SUPPORTED_FAN_INS: [usize; 2] = [2, 8];

/// Interleave equal-rate channels into one stream at the summed rate.
///
/// Bits are taken round-robin starting from channel 0: output bit `i` is
/// bit `i / count` of channel `i % count`.
pub fn mux_stage(channels: &[BitPattern]) -> Result<BitPattern> {
    let count = channels.len();
    if !SUPPORTED_FAN_INS.contains(&count) {
        return Err(Error::UnsupportedFanIn(count));
    }
    let len = channels[0].len();
    let rate = channels[0].bit_rate_bps();
    for (i, ch) in channels.iter().enumerate() {
        if ch.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "channel {i} has {} bits, expected {len}",
                ch.len()
            )));
        }
        if ch.bit_rate_bps() != rate {
            return Err(Error::ShapeMismatch(format!(
                "channel {i} runs at {} bps, expected {rate} bps",
                ch.bit_rate_bps()
            )));
        }
    }
    let mut bits = Vec::with_capacity(len * count);
    for i in 0..len {
        for ch in channels {
            bits.push(ch.bits()[i]);
        }
    }
    BitPattern::new(bits, rate * count as f64)
}

/// Split a stream back into `count` channels; exact inverse of `mux_stage`.
pub fn demux_stage(stream: &BitPattern, count: usize) -> Result<Vec<BitPattern>> {
    if count == 0 {
        return Err(Error::UnsupportedFanIn(0));
    }
    if stream.len() % count != 0 {
        return Err(Error::ShapeMismatch(format!(
            "stream of {} bits does not split into {count} equal channels",
            stream.len()
        )));
    }
    let rate = stream.bit_rate_bps() / count as f64;
    let per_channel = stream.len() / count;
    let mut channels = Vec::with_capacity(count);
    for c in 0..count {
        let bits = (0..per_channel)
            .map(|i| stream.bits()[i * count + c])
            .collect();
        channels.push(BitPattern::new(bits, rate)?);
    }
    Ok(channels)
}

/// Convert a bit pattern into timed edges.
///
/// The line idles low before the pattern. Each value change at bit `k`
/// produces one edge at the nominal boundary `k * T`, offset by the
/// program's leading delay for rising edges and trailing delay for falling
/// edges. Delays large enough to reorder adjacent edges are an error.
pub fn place_edges(pattern: &BitPattern, program: &EdgeProgram) -> Result<EdgeSequence> {
    let t = pattern.bit_period_ps();
    let mut edges = Vec::new();
    let mut prev = 0u8;
    for (k, &b) in pattern.bits().iter().enumerate() {
        if b != prev {
            let (direction, delay) = if b == 1 {
                (EdgeDirection::Rising, program.leading_delay_ps())
            } else {
                (EdgeDirection::Falling, program.trailing_delay_ps())
            };
            edges.push(Edge {
                time_ps: k as f64 * t + delay,
                direction,
            });
            prev = b;
        }
    }
    let max_delay = program.leading_delay_ps().max(program.trailing_delay_ps());
    let t_end = pattern.len() as f64 * t + max_delay;
    EdgeSequence::new(edges, 0.0, t_end)
}
