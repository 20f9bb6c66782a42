//! Analog output modeling: jitter injection, finite-rise edge shaping at
//! programmable logic levels, and a lossy/delaying channel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::serializer::{Edge, EdgeDirection, EdgeSequence};

/// Uniformly sampled voltage trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples_mv: Vec<f64>,
    dt_ps: f64,
    t0_ps: f64,
}

impl Waveform {
    pub const DEFAULT_DT_PS: f64 = 1.0;

    pub fn new(samples_mv: Vec<f64>, dt_ps: f64, t0_ps: f64) -> Result<Self> {
        if samples_mv.is_empty() {
            return Err(Error::InvalidPattern("waveform must hold at least one sample".into()));
        }
        if !(dt_ps > 0.0) || !dt_ps.is_finite() {
            return Err(Error::InvalidProgram(format!(
                "sample interval {dt_ps} ps must be positive"
            )));
        }
        if samples_mv.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPattern("waveform voltages must be finite".into()));
        }
        Ok(Self { samples_mv, dt_ps, t0_ps })
    }

    pub fn samples_mv(&self) -> &[f64] {
        &self.samples_mv
    }

    pub fn len(&self) -> usize {
        self.samples_mv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_mv.is_empty()
    }

    pub fn dt_ps(&self) -> f64 {
        self.dt_ps
    }

    pub fn t0_ps(&self) -> f64 {
        self.t0_ps
    }

    /// Time of the last sample.
    pub fn t_end_ps(&self) -> f64 {
        self.t0_ps + (self.samples_mv.len() - 1) as f64 * self.dt_ps
    }

    /// Linearly interpolated voltage at an absolute time within the span.
    pub fn sample_at(&self, t_ps: f64) -> Result<f64> {
        let end = self.t_end_ps();
        if t_ps < self.t0_ps || t_ps > end {
            return Err(Error::OutOfRange {
                t: t_ps,
                start: self.t0_ps,
                end,
            });
        }
        let pos = (t_ps - self.t0_ps) / self.dt_ps;
        let idx = (pos.floor() as usize).min(self.samples_mv.len() - 1);
        if idx + 1 >= self.samples_mv.len() {
            return Ok(self.samples_mv[idx]);
        }
        let frac = pos - idx as f64;
        Ok(self.samples_mv[idx] + frac * (self.samples_mv[idx + 1] - self.samples_mv[idx]))
    }

    pub fn v_min_mv(&self) -> f64 {
        self.samples_mv.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn v_max_mv(&self) -> f64 {
        self.samples_mv.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Edge-time perturbation: Gaussian random jitter plus bounded
/// deterministic jitter drawn uniformly over the configured span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterConfig {
    pub rj_rms_ps: f64,
    pub dj_pp_ps: f64,
    pub seed: u64,
}

impl JitterConfig {
    pub fn new(rj_rms_ps: f64, dj_pp_ps: f64, seed: u64) -> Result<Self> {
        if !(rj_rms_ps >= 0.0) || !(dj_pp_ps >= 0.0) {
            return Err(Error::InvalidProgram(format!(
                "jitter amplitudes must be non-negative, got rj_rms {rj_rms_ps} ps, dj_pp {dj_pp_ps} ps"
            )));
        }
        Ok(Self { rj_rms_ps, dj_pp_ps, seed })
    }

    /// No perturbation at all.
    pub fn quiet(seed: u64) -> Self {
        Self { rj_rms_ps: 0.0, dj_pp_ps: 0.0, seed }
    }
}

/// Output logic levels and transition times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelConfig {
    pub v_high_mv: f64,
    pub v_low_mv: f64,
    /// High-level control step.
    pub high_step_mv: f64,
    /// Amplitude swing control step.
    pub swing_step_mv: f64,
    pub t_rise_2080_ps: f64,
    pub t_fall_2080_ps: f64,
}

impl LevelConfig {
    pub const DEFAULT_HIGH_STEP_MV: f64 = 100.0;
    pub const DEFAULT_SWING_STEP_MV: f64 = 200.0;

    pub fn new(
        v_high_mv: f64,
        v_low_mv: f64,
        t_rise_2080_ps: f64,
        t_fall_2080_ps: f64,
    ) -> Result<Self> {
        if !(v_high_mv > v_low_mv) {
            return Err(Error::InvalidLevels(format!(
                "v_high {v_high_mv} mV must exceed v_low {v_low_mv} mV"
            )));
        }
        if !(t_rise_2080_ps > 0.0) || !(t_fall_2080_ps > 0.0) {
            return Err(Error::InvalidLevels(format!(
                "transition times must be positive, got rise {t_rise_2080_ps} ps, fall {t_fall_2080_ps} ps"
            )));
        }
        Ok(Self {
            v_high_mv,
            v_low_mv,
            high_step_mv: Self::DEFAULT_HIGH_STEP_MV,
            swing_step_mv: Self::DEFAULT_SWING_STEP_MV,
            t_rise_2080_ps,
            t_fall_2080_ps,
        })
    }

    pub fn swing_mv(&self) -> f64 {
        self.v_high_mv - self.v_low_mv
    }

    pub fn midpoint_mv(&self) -> f64 {
        0.5 * (self.v_high_mv + self.v_low_mv)
    }
}

impl Default for LevelConfig {
    /// 800 mV swing referenced to a 3.3 V PECL supply, 75 ps transitions.
    fn default() -> Self {
        Self::new(2400.0, 1600.0, 75.0, 75.0).unwrap()
    }
}

/// Passive interconnect between driver and sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub delay_ps: f64,
    pub attenuation_db: f64,
    /// Single-pole low-pass corner; `None` leaves the spectrum untouched.
    pub bandwidth_ghz: Option<f64>,
}

impl ChannelModel {
    pub fn new(delay_ps: f64, attenuation_db: f64, bandwidth_ghz: Option<f64>) -> Result<Self> {
        if !(delay_ps >= 0.0) {
            return Err(Error::InvalidProgram(format!(
                "channel delay {delay_ps} ps must be non-negative"
            )));
        }
        if !(attenuation_db >= 0.0) {
            return Err(Error::InvalidProgram(format!(
                "channel attenuation {attenuation_db} dB must be non-negative"
            )));
        }
        if let Some(fc) = bandwidth_ghz {
            if !(fc > 0.0) {
                return Err(Error::InvalidProgram(format!(
                    "channel bandwidth {fc} GHz must be positive"
                )));
            }
        }
        Ok(Self { delay_ps, attenuation_db, bandwidth_ghz })
    }

    /// Lossless, delay-free, full-bandwidth channel.
    pub fn identity() -> Self {
        Self { delay_ps: 0.0, attenuation_db: 0.0, bandwidth_ghz: None }
    }
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self::identity()
    }
}

/// Perturb each edge time by random plus bounded jitter.
///
/// Reproducible bit-for-bit for a fixed seed. Zero amplitudes return the
/// input unchanged. Perturbations that reorder edges are an error.
pub fn inject_jitter(edges: &EdgeSequence, cfg: &JitterConfig) -> Result<EdgeSequence> {
    assert!(
        cfg.rj_rms_ps >= 0.0 && cfg.dj_pp_ps >= 0.0,
        "jitter amplitudes must be non-negative"
    );
    if cfg.rj_rms_ps == 0.0 && cfg.dj_pp_ps == 0.0 {
        return Ok(edges.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let gauss = Normal::new(0.0, cfg.rj_rms_ps).expect("finite sigma");
    let bounded = Uniform::new_inclusive(-0.5 * cfg.dj_pp_ps, 0.5 * cfg.dj_pp_ps);
    let mut t_min = edges.t_start_ps();
    let mut t_max = edges.t_end_ps();
    let perturbed: Vec<Edge> = edges
        .edges()
        .iter()
        .map(|e| {
            let mut offset = 0.0;
            if cfg.rj_rms_ps > 0.0 {
                offset += gauss.sample(&mut rng);
            }
            if cfg.dj_pp_ps > 0.0 {
                offset += bounded.sample(&mut rng);
            }
            let t = e.time_ps + offset;
            t_min = t_min.min(t);
            t_max = t_max.max(t);
            Edge { time_ps: t, direction: e.direction }
        })
        .collect();
    EdgeSequence::new(perturbed, t_min, t_max)
}

// 20% and 80% of a unit Gaussian step sit at -z and +z around the midpoint.
const NORMAL_Z80: f64 = 0.841_621_233_572_914_3;
const EDGE_WIDTH_PER_TAU: f64 = 2.0 * NORMAL_Z80;
// Beyond this many sigma the edge profile is flat to < 1e-14 of the swing.
const EDGE_SUPPORT_SIGMA: f64 = 8.0;

/// Gaussian step profile: 0 far left, 1 far right, 0.5 at the edge time.
fn edge_profile(x: f64) -> f64 {
    0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
}

/// Render timed edges into an analog waveform.
///
/// Each transition follows a Gaussian-integral profile whose 20-80% width
/// equals the configured rise or fall time; the trace sits at `v_low`
/// before the first rising edge. `dt` must resolve the fastest transition
/// with at least ten samples.
pub fn render_waveform(edges: &EdgeSequence, levels: &LevelConfig, dt_ps: f64) -> Result<Waveform> {
    let limit = levels.t_rise_2080_ps.min(levels.t_fall_2080_ps) / 10.0;
    if !(dt_ps > 0.0) || dt_ps > limit * (1.0 + 1e-9) {
        return Err(Error::ResolutionTooCoarse { dt: dt_ps, limit });
    }
    let t0 = edges.t_start_ps();
    let span = edges.t_end_ps() - t0;
    let n = (span / dt_ps).floor() as usize + 1;
    let swing = levels.swing_mv();

    // Ideal NRZ track: flip at the first sample at or after each edge time.
    let mut samples = vec![levels.v_low_mv; n];
    let mut level = levels.v_low_mv;
    let mut next_edge = 0usize;
    let edge_list = edges.edges();
    for (i, s) in samples.iter_mut().enumerate() {
        let t = t0 + i as f64 * dt_ps;
        while next_edge < edge_list.len() && edge_list[next_edge].time_ps <= t {
            level = match edge_list[next_edge].direction {
                EdgeDirection::Rising => levels.v_high_mv,
                EdgeDirection::Falling => levels.v_low_mv,
            };
            next_edge += 1;
        }
        *s = level;
    }

    // Replace each step with the smooth profile inside its support window.
    for e in edge_list {
        let (tau, sign) = match e.direction {
            EdgeDirection::Rising => (levels.t_rise_2080_ps / EDGE_WIDTH_PER_TAU, 1.0),
            EdgeDirection::Falling => (levels.t_fall_2080_ps / EDGE_WIDTH_PER_TAU, -1.0),
        };
        let window = EDGE_SUPPORT_SIGMA * tau;
        let lo = (((e.time_ps - window) - t0) / dt_ps).ceil().max(0.0) as usize;
        let hi_f = (((e.time_ps + window) - t0) / dt_ps).floor();
        if hi_f < 0.0 {
            continue;
        }
        let hi = (hi_f as usize).min(n - 1);
        for (i, s) in samples.iter_mut().enumerate().take(hi + 1).skip(lo) {
            let t = t0 + i as f64 * dt_ps;
            let step = if t >= e.time_ps { 1.0 } else { 0.0 };
            *s += sign * swing * (edge_profile((t - e.time_ps) / tau) - step);
        }
    }

    Waveform::new(samples, dt_ps, t0)
}

/// Step the output levels: lower the high level by `high_steps` control
/// steps, then shrink the swing symmetrically about the midpoint by
/// `swing_steps` steps. Negative counts move the other way.
pub fn adjust_levels(levels: &LevelConfig, high_steps: i32, swing_steps: i32) -> Result<LevelConfig> {
    let v_high = levels.v_high_mv - high_steps as f64 * levels.high_step_mv;
    let v_low = levels.v_low_mv;
    let midpoint = 0.5 * (v_high + v_low);
    let swing = (v_high - v_low) - swing_steps as f64 * levels.swing_step_mv;
    let v_high = midpoint + 0.5 * swing;
    let v_low = midpoint - 0.5 * swing;
    if !(v_high > v_low) {
        return Err(Error::InvalidLevels(format!(
            "adjustment collapses the swing: v_high {v_high} mV, v_low {v_low} mV"
        )));
    }
    Ok(LevelConfig { v_high_mv: v_high, v_low_mv: v_low, ..*levels })
}

/// Pass a waveform through the interconnect model: optional single-pole
/// low-pass, flat attenuation about the waveform midpoint, then delay.
/// Identity parameters return the samples bit-for-bit.
pub fn channel_transfer(w: &Waveform, ch: &ChannelModel) -> Waveform {
    let mut samples = w.samples_mv().to_vec();

    if let Some(fc_ghz) = ch.bandwidth_ghz {
        // alpha from the pole at fc: one-pole IIR step response.
        let alpha = 1.0 - (-2.0 * std::f64::consts::PI * fc_ghz * 1e9 * w.dt_ps() * 1e-12).exp();
        let mut y = samples[0];
        for s in samples.iter_mut() {
            y += alpha * (*s - y);
            *s = y;
        }
    }

    if ch.attenuation_db != 0.0 {
        let gain = 10f64.powf(-ch.attenuation_db / 20.0);
        let mid = 0.5
            * (samples.iter().copied().fold(f64::INFINITY, f64::min)
                + samples.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        for s in samples.iter_mut() {
            *s = mid + gain * (*s - mid);
        }
    }

    Waveform::new(samples, w.dt_ps(), w.t0_ps() + ch.delay_ps).expect("valid by construction")
}
