//! Eye-diagram construction and figures of merit: crossover jitter, eye
//! opening in unit intervals, eye height, logic levels, and 20-80%
//! transition times.

use std::collections::BTreeMap;

use crate::analog::Waveform;
use crate::error::{Error, Result};
use crate::serializer::EdgeDirection;

/// One bit-period slice of a folded waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct EyeTrace {
    /// Phase of the first sample within the unit interval.
    pub start_phase_ps: f64,
    pub samples_mv: Vec<f64>,
}

/// A waveform folded onto one unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct EyeRecord {
    period_ps: f64,
    dt_ps: f64,
    traces: Vec<EyeTrace>,
    crossing_phases_ps: Vec<f64>,
}

impl EyeRecord {
    pub fn period_ps(&self) -> f64 {
        self.period_ps
    }

    pub fn dt_ps(&self) -> f64 {
        self.dt_ps
    }

    pub fn traces(&self) -> &[EyeTrace] {
        &self.traces
    }

    /// Threshold-crossing phases folded into `[0, period)`.
    pub fn crossing_phases_ps(&self) -> &[f64] {
        &self.crossing_phases_ps
    }
}

/// Threshold crossings of a waveform, as (time relative to the first
/// sample, direction), linearly interpolated between samples.
pub(crate) fn threshold_crossings(w: &Waveform, threshold_mv: f64) -> Vec<(f64, EdgeDirection)> {
    let s = w.samples_mv();
    let mut out = Vec::new();
    for i in 0..s.len().saturating_sub(1) {
        let a = s[i] - threshold_mv;
        let b = s[i + 1] - threshold_mv;
        if a < 0.0 && b >= 0.0 {
            let frac = a / (a - b);
            out.push(((i as f64 + frac) * w.dt_ps(), EdgeDirection::Rising));
        } else if a >= 0.0 && b < 0.0 {
            let frac = a / (a - b);
            out.push(((i as f64 + frac) * w.dt_ps(), EdgeDirection::Falling));
        }
    }
    out
}

/// Fold a waveform onto one nominal bit period.
///
/// Traces are cut at successive period boundaries measured from the first
/// sample; threshold crossings are folded modulo the period.
pub fn fold_eye(w: &Waveform, period_ps: f64, threshold_mv: f64) -> Result<EyeRecord> {
    assert!(period_ps > 0.0, "period must be positive");
    let coverage = w.len() as f64 * w.dt_ps();
    if coverage < 3.0 * period_ps * (1.0 - 1e-12) {
        return Err(Error::InsufficientData(format!(
            "waveform covers {coverage} ps; folding needs at least 3 periods of {period_ps} ps"
        )));
    }

    let n_traces = (coverage / period_ps).floor() as usize;
    let mut traces = Vec::with_capacity(n_traces);
    for k in 0..n_traces {
        let t_lo = k as f64 * period_ps;
        let t_hi = (k + 1) as f64 * period_ps;
        let i_lo = (t_lo / w.dt_ps()).ceil() as usize;
        let mut i_hi = (t_hi / w.dt_ps()).ceil() as usize;
        i_hi = i_hi.min(w.len());
        if i_lo >= i_hi {
            continue;
        }
        traces.push(EyeTrace {
            start_phase_ps: i_lo as f64 * w.dt_ps() - t_lo,
            samples_mv: w.samples_mv()[i_lo..i_hi].to_vec(),
        });
    }

    let crossing_phases_ps = threshold_crossings(w, threshold_mv)
        .into_iter()
        .map(|(t, _)| {
            let phase = t - period_ps * (t / period_ps).floor();
            if phase >= period_ps {
                0.0
            } else {
                phase
            }
        })
        .collect();

    Ok(EyeRecord {
        period_ps,
        dt_ps: w.dt_ps(),
        traces,
        crossing_phases_ps,
    })
}

/// Crossing cluster statistics on the folded circle.
///
/// Returns the peak-to-peak span, the rms about the cluster mean, and the
/// phase at the middle of the widest crossing-free arc (the eye center).
fn circular_cluster(phases: &[f64], period_ps: f64) -> (f64, f64, f64) {
    let mut sorted = phases.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();

    // Widest gap on the circle; the cluster is its complement, so a
    // cluster straddling the fold origin still reports its true span.
    let mut widest = period_ps - sorted[n - 1] + sorted[0];
    let mut cut = 0usize; // index of the first phase after the widest gap
    for i in 0..n - 1 {
        let gap = sorted[i + 1] - sorted[i];
        if gap > widest {
            widest = gap;
            cut = i + 1;
        }
    }

    let unrolled: Vec<f64> = (0..n)
        .map(|j| {
            let p = sorted[(cut + j) % n];
            if (cut + j) >= n {
                p + period_ps
            } else {
                p
            }
        })
        .collect();
    let pp = unrolled[n - 1] - unrolled[0];
    let mean = unrolled.iter().sum::<f64>() / n as f64;
    let rms = (unrolled.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n as f64).sqrt();

    let gap_start = unrolled[n - 1];
    let mut center = gap_start + 0.5 * widest;
    center -= period_ps * (center / period_ps).floor();
    (pp, rms, center)
}

/// Peak-to-peak and rms jitter of the threshold crossings.
pub fn crossover_jitter(eye: &EyeRecord) -> Result<(f64, f64)> {
    let phases = eye.crossing_phases_ps();
    if phases.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "crossover jitter needs at least 2 crossings, found {}",
            phases.len()
        )));
    }
    let (pp, rms, _) = circular_cluster(phases, eye.period_ps());
    Ok((pp, rms))
}

/// Usable eye opening derived from crossover jitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EyeOpening {
    /// Fraction of the unit interval left open, in `[0, 1]`.
    pub ui: f64,
    /// Set when the jitter spread wraps the whole period.
    pub closed: bool,
}

/// Eye opening as a fraction of the unit interval: `1 - jitter_pp / T`.
/// Jitter exceeding the period reports a closed eye at 0 UI.
pub fn eye_opening(period_ps: f64, jitter_pp_ps: f64) -> EyeOpening {
    assert!(period_ps > 0.0, "period must be positive");
    assert!(jitter_pp_ps >= 0.0, "jitter must be non-negative");
    if jitter_pp_ps > period_ps {
        EyeOpening { ui: 0.0, closed: true }
    } else {
        EyeOpening {
            ui: 1.0 - jitter_pp_ps / period_ps,
            closed: false,
        }
    }
}

/// Mean 20-80% durations per transition direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionTimes {
    pub rise_2080_ps: Option<f64>,
    pub fall_2080_ps: Option<f64>,
}

/// Measure mean transition times between 20% and 80% of the waveform
/// amplitude (min/max referenced).
pub fn transition_times(w: &Waveform) -> Result<TransitionTimes> {
    transition_times_between(w, 0.2, 0.8)
}

/// Measure mean transition times between two amplitude fractions.
pub fn transition_times_between(w: &Waveform, low_frac: f64, high_frac: f64) -> Result<TransitionTimes> {
    assert!(
        0.0 < low_frac && low_frac < high_frac && high_frac < 1.0,
        "fractions must satisfy 0 < low < high < 1"
    );
    let v_min = w.v_min_mv();
    let v_max = w.v_max_mv();
    if v_max <= v_min {
        return Err(Error::InsufficientData(
            "waveform is constant; no transitions to measure".into(),
        ));
    }
    let lo_thr = v_min + low_frac * (v_max - v_min);
    let hi_thr = v_min + high_frac * (v_max - v_min);

    // Merge both crossing streams in time order and pair them up.
    #[derive(Clone, Copy, PartialEq)]
    enum Which {
        Lo,
        Hi,
    }
    let mut events: Vec<(f64, Which, EdgeDirection)> = threshold_crossings(w, lo_thr)
        .into_iter()
        .map(|(t, d)| (t, Which::Lo, d))
        .chain(
            threshold_crossings(w, hi_thr)
                .into_iter()
                .map(|(t, d)| (t, Which::Hi, d)),
        )
        .collect();
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut rise_durations = Vec::new();
    let mut fall_durations = Vec::new();
    let mut pending_rise: Option<f64> = None;
    let mut pending_fall: Option<f64> = None;
    for (t, which, dir) in events {
        match (which, dir) {
            (Which::Lo, EdgeDirection::Rising) => pending_rise = Some(t),
            (Which::Hi, EdgeDirection::Rising) => {
                if let Some(t0) = pending_rise.take() {
                    rise_durations.push(t - t0);
                }
            }
            (Which::Lo, EdgeDirection::Falling) => {
                if let Some(t0) = pending_fall.take() {
                    fall_durations.push(t - t0);
                }
                pending_rise = None;
            }
            (Which::Hi, EdgeDirection::Falling) => {
                pending_fall = Some(t);
            }
        }
        if matches!((which, dir), (Which::Hi, EdgeDirection::Rising)) {
            pending_fall = None;
        }
    }

    let mean = |v: &[f64]| {
        if v.is_empty() {
            None
        } else {
            Some(v.iter().sum::<f64>() / v.len() as f64)
        }
    };
    let out = TransitionTimes {
        rise_2080_ps: mean(&rise_durations),
        fall_2080_ps: mean(&fall_durations),
    };
    if out.rise_2080_ps.is_none() && out.fall_2080_ps.is_none() {
        return Err(Error::InsufficientData(
            "no full transition found between the amplitude thresholds".into(),
        ));
    }
    Ok(out)
}

/// Settled logic levels extracted from a waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Levels {
    pub v_high_mv: f64,
    pub v_low_mv: f64,
    pub midpoint_mv: f64,
}

/// Histogram bin width used for level extraction, fine relative to the
/// 100 mV level-control step.
pub const LEVEL_BIN_MV: f64 = 5.0;

/// Extract the two modal logic levels from the sample histogram.
///
/// The histogram must be bimodal: each half of the amplitude range needs a
/// populated mode and the modes must be clearly separated.
pub fn measure_levels(w: &Waveform) -> Result<Levels> {
    let v_min = w.v_min_mv();
    let v_max = w.v_max_mv();
    if v_max - v_min < 2.0 * LEVEL_BIN_MV {
        return Err(Error::LevelsUnresolved);
    }
    let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
    for &v in w.samples_mv() {
        *histogram.entry((v / LEVEL_BIN_MV).floor() as i64).or_default() += 1;
    }
    let split = 0.5 * (v_min + v_max);
    let split_bin = (split / LEVEL_BIN_MV).floor() as i64;

    let mut low_mode: Option<(i64, usize)> = None;
    let mut high_mode: Option<(i64, usize)> = None;
    for (&bin, &count) in &histogram {
        if bin < split_bin {
            // Ties keep the earlier (lower) bin.
            if low_mode.map_or(true, |(_, c)| count > c) {
                low_mode = Some((bin, count));
            }
        } else {
            // Ties keep the later (higher) bin.
            if high_mode.map_or(true, |(_, c)| count >= c) {
                high_mode = Some((bin, count));
            }
        }
    }
    let (low_bin, low_count) = low_mode.ok_or(Error::LevelsUnresolved)?;
    let (high_bin, high_count) = high_mode.ok_or(Error::LevelsUnresolved)?;
    let min_mass = (w.len() / 100).max(2);
    if low_count < min_mass || high_count < min_mass || high_bin - low_bin < 4 {
        return Err(Error::LevelsUnresolved);
    }
    let v_low = (low_bin as f64 + 0.5) * LEVEL_BIN_MV;
    let v_high = (high_bin as f64 + 0.5) * LEVEL_BIN_MV;
    Ok(Levels {
        v_high_mv: v_high,
        v_low_mv: v_low,
        midpoint_mv: 0.5 * (v_high + v_low),
    })
}

/// Vertical opening at the eye center: the gap between the lowest settled
/// high sample and the highest settled low sample within a narrow phase
/// window around the center of the widest crossing-free arc. `None` when a
/// rail has no samples in the window or there are no crossings.
pub fn eye_height(eye: &EyeRecord, threshold_mv: f64) -> Option<f64> {
    if eye.crossing_phases_ps().is_empty() {
        return None;
    }
    let (_, _, center) = circular_cluster(eye.crossing_phases_ps(), eye.period_ps());
    let halfwidth = 0.05 * eye.period_ps();
    let period = eye.period_ps();

    let mut high_min = f64::INFINITY;
    let mut low_max = f64::NEG_INFINITY;
    for trace in eye.traces() {
        for (j, &v) in trace.samples_mv.iter().enumerate() {
            let phase = trace.start_phase_ps + j as f64 * eye.dt_ps();
            let dist = (phase - center).abs();
            let dist = dist.min(period - dist);
            if dist <= halfwidth {
                if v >= threshold_mv {
                    high_min = high_min.min(v);
                } else {
                    low_max = low_max.max(v);
                }
            }
        }
    }
    if high_min.is_finite() && low_max.is_finite() {
        Some(high_min - low_max)
    } else {
        None
    }
}

/// The full figure-of-merit set for one analyzed waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EyeMetrics {
    pub jitter_pp_ps: f64,
    pub jitter_rms_ps: f64,
    pub eye_opening_ui: f64,
    pub eye_closed: bool,
    pub eye_height_mv: Option<f64>,
    pub rise_2080_ps: Option<f64>,
    pub fall_2080_ps: Option<f64>,
    pub v_high_mv: f64,
    pub v_low_mv: f64,
    pub crossing_count: usize,
}

impl EyeMetrics {
    /// Fold a waveform at the given period and compute every metric,
    /// thresholding at the measured level midpoint.
    pub fn measure(w: &Waveform, period_ps: f64) -> Result<Self> {
        let levels = measure_levels(w)?;
        let eye = fold_eye(w, period_ps, levels.midpoint_mv)?;
        let (jitter_pp, jitter_rms) = crossover_jitter(&eye)?;
        let opening = eye_opening(period_ps, jitter_pp);
        let transitions = transition_times(w)?;
        Ok(Self {
            jitter_pp_ps: jitter_pp,
            jitter_rms_ps: jitter_rms,
            eye_opening_ui: opening.ui,
            eye_closed: opening.closed,
            eye_height_mv: eye_height(&eye, levels.midpoint_mv),
            rise_2080_ps: transitions.rise_2080_ps,
            fall_2080_ps: transitions.fall_2080_ps,
            v_high_mv: levels.v_high_mv,
            v_low_mv: levels.v_low_mv,
            crossing_count: eye.crossing_phases_ps().len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analog::{inject_jitter, render_waveform, JitterConfig, LevelConfig};
    use crate::pattern::{fixed_pattern, prbs_generate, FixedKind, LfsrSpec};
    use crate::serializer::{place_edges, EdgeProgram};

    fn synthetic_eye(phases: Vec<f64>, period: f64) -> EyeRecord {
        EyeRecord {
            period_ps: period,
            dt_ps: 1.0,
            traces: Vec::new(),
            crossing_phases_ps: phases,
        }
    }

    #[test]
    fn crossover_jitter_peak_to_peak() {
        let eye = synthetic_eye(vec![100.0, 110.0, 124.0], 400.0);
        let (pp, rms) = crossover_jitter(&eye).unwrap();
        assert!((pp - 24.0).abs() < 1e-12);
        assert!(rms > 0.0 && rms < 24.0);
    }

    #[test]
    fn crossover_jitter_identical_crossings() {
        let eye = synthetic_eye(vec![50.0; 10], 400.0);
        let (pp, rms) = crossover_jitter(&eye).unwrap();
        assert_eq!(pp, 0.0);
        assert_eq!(rms, 0.0);
    }

    #[test]
    fn crossover_jitter_needs_two_crossings() {
        let eye = synthetic_eye(vec![50.0], 400.0);
        assert!(matches!(
            crossover_jitter(&eye).unwrap_err(),
            Error::InsufficientData(_)
        ));
    }

    #[test]
    fn crossover_jitter_handles_wrap_around() {
        // Cluster straddling the fold origin: true span is 4 ps.
        let eye = synthetic_eye(vec![398.0, 399.0, 1.0, 2.0], 400.0);
        let (pp, _) = crossover_jitter(&eye).unwrap();
        assert!((pp - 4.0).abs() < 1e-12, "pp {pp}");
    }

    #[test]
    fn crossover_jitter_gaussian_rms() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, Normal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let gauss = Normal::new(200.0, 3.2).unwrap();
        let phases: Vec<f64> = (0..100_000).map(|_| gauss.sample(&mut rng)).collect();
        let eye = synthetic_eye(phases, 400.0);
        let (pp, rms) = crossover_jitter(&eye).unwrap();
        assert!((rms - 3.2).abs() / 3.2 < 0.05, "rms {rms}");
        assert!(pp > rms);
    }

    #[test]
    fn eye_opening_reference_points() {
        assert!((eye_opening(400.0, 46.7).ui - 0.88).abs() <= 0.005);
        assert!((eye_opening(250.0, 47.2).ui - 0.81).abs() <= 0.005);
        assert!((eye_opening(200.0, 50.0).ui - 0.75).abs() <= 0.005);
        assert!((eye_opening(1000.0, 50.0).ui - 0.95).abs() <= 0.005);
        assert_eq!(eye_opening(400.0, 0.0).ui, 1.0);
        let closed = eye_opening(200.0, 210.0);
        assert!(closed.closed);
        assert_eq!(closed.ui, 0.0);
    }

    #[test]
    fn fold_eye_rejects_short_waveforms() {
        let w = Waveform::new(vec![0.0; 100], 1.0, 0.0).unwrap();
        assert!(matches!(
            fold_eye(&w, 100.0, 0.0).unwrap_err(),
            Error::InsufficientData(_)
        ));
    }

    #[test]
    fn fold_eye_ideal_clock_has_zero_spread() {
        let p = fixed_pattern(&FixedKind::Alternating, 64, 2.5e9).unwrap();
        let seq = place_edges(&p, &EdgeProgram::default()).unwrap();
        let levels = LevelConfig::default();
        // T/dt integer so every period is sampled identically.
        let w = render_waveform(&seq, &levels, 5.0).unwrap();
        let eye = fold_eye(&w, p.bit_period_ps(), levels.midpoint_mv()).unwrap();
        let (pp, rms) = crossover_jitter(&eye).unwrap();
        assert!(pp <= 1e-6, "pp {pp}");
        assert!(rms <= 1e-6, "rms {rms}");
    }

    #[test]
    fn fold_eye_spread_matches_injected_jitter() {
        let spec = LfsrSpec::prbs7();
        let pattern = prbs_generate(&spec, 25_000, 2.5e9).unwrap();
        let seq = place_edges(&pattern, &EdgeProgram::default()).unwrap();
        let injected_pp = 40.0;
        let jitter = JitterConfig::new(0.0, injected_pp, 23).unwrap();
        let jittered = inject_jitter(&seq, &jitter).unwrap();
        let levels = LevelConfig::default();
        let w = render_waveform(&jittered, &levels, 7.5).unwrap();
        let eye = fold_eye(&w, pattern.bit_period_ps(), levels.midpoint_mv()).unwrap();
        assert!(eye.crossing_phases_ps().len() >= 10_000);
        let (pp, _) = crossover_jitter(&eye).unwrap();
        assert!(
            (pp - injected_pp).abs() / injected_pp < 0.10,
            "injected {injected_pp} ps, measured {pp} ps"
        );
    }

    #[test]
    fn metrics_invariant_under_time_shift() {
        let spec = LfsrSpec::prbs7();
        let pattern = prbs_generate(&spec, 2000, 2.5e9).unwrap();
        let seq = place_edges(&pattern, &EdgeProgram::default()).unwrap();
        let jitter = JitterConfig::new(2.0, 10.0, 31).unwrap();
        let jittered = inject_jitter(&seq, &jitter).unwrap();
        let levels = LevelConfig::default();
        let w = render_waveform(&jittered, &levels, 5.0).unwrap();

        let eye = fold_eye(&w, 400.0, levels.midpoint_mv()).unwrap();
        let (pp0, rms0) = crossover_jitter(&eye).unwrap();

        // Folding with a shifted origin moves every crossing phase by the
        // same offset; the cluster statistics must not change.
        for shift in [100.0, 200.0, 317.5] {
            let shifted = Waveform::new(
                w.samples_mv()[(shift / w.dt_ps()) as usize..].to_vec(),
                w.dt_ps(),
                0.0,
            )
            .unwrap();
            let eye_s = fold_eye(&shifted, 400.0, levels.midpoint_mv()).unwrap();
            let (pp, rms) = crossover_jitter(&eye_s).unwrap();
            assert!((pp - pp0).abs() < 0.5, "shift {shift}: pp {pp} vs {pp0}");
            assert!((rms - rms0).abs() < 0.5, "shift {shift}: rms {rms} vs {rms0}");
        }
    }

    #[test]
    fn transition_times_recover_configuration() {
        let p = fixed_pattern(&FixedKind::Custom(vec![1, 0]), 8, 1.25e9).unwrap();
        for (t_rise, t_fall) in [(70.0, 70.0), (75.0, 75.0), (120.0, 120.0), (75.0, 120.0)] {
            let levels = LevelConfig::new(2400.0, 1600.0, t_rise, t_fall).unwrap();
            let seq = place_edges(&p, &EdgeProgram::default()).unwrap();
            let w = render_waveform(&seq, &levels, t_rise.min(t_fall) / 10.0).unwrap();
            let times = transition_times(&w).unwrap();
            let rise = times.rise_2080_ps.unwrap();
            let fall = times.fall_2080_ps.unwrap();
            assert!(
                (rise - t_rise).abs() / t_rise < 0.02,
                "rise configured {t_rise}, measured {rise}"
            );
            assert!(
                (fall - t_fall).abs() / t_fall < 0.02,
                "fall configured {t_fall}, measured {fall}"
            );
        }
    }

    #[test]
    fn transition_times_constant_waveform_fails() {
        let w = Waveform::new(vec![1000.0; 64], 1.0, 0.0).unwrap();
        assert!(matches!(
            transition_times(&w).unwrap_err(),
            Error::InsufficientData(_)
        ));
    }

    #[test]
    fn single_rising_edge_reports_rise_only() {
        use crate::serializer::{Edge, EdgeSequence};
        let seq = EdgeSequence::new(
            vec![Edge {
                time_ps: 500.0,
                direction: EdgeDirection::Rising,
            }],
            0.0,
            1000.0,
        )
        .unwrap();
        let w = render_waveform(&seq, &LevelConfig::default(), 5.0).unwrap();
        let times = transition_times(&w).unwrap();
        assert!(times.rise_2080_ps.is_some());
        assert!(times.fall_2080_ps.is_none());
    }

    #[test]
    fn measure_levels_recovers_configuration() {
        let p = fixed_pattern(&FixedKind::Alternating, 64, 1.25e9).unwrap();
        let levels = LevelConfig::default();
        let seq = place_edges(&p, &EdgeProgram::default()).unwrap();
        let w = render_waveform(&seq, &levels, 7.5).unwrap();
        let measured = measure_levels(&w).unwrap();
        assert!((measured.v_high_mv - 2400.0).abs() / 2400.0 < 0.01);
        assert!((measured.v_low_mv - 1600.0).abs() / 1600.0 < 0.01);
        assert!((measured.midpoint_mv - 2000.0).abs() / 2000.0 < 0.01);
    }

    #[test]
    fn measure_levels_constant_waveform_unresolved() {
        let w = Waveform::new(vec![1000.0; 64], 1.0, 0.0).unwrap();
        assert_eq!(measure_levels(&w).unwrap_err(), Error::LevelsUnresolved);
    }

    #[test]
    fn eye_metrics_composition() {
        let spec = LfsrSpec::prbs7();
        let pattern = prbs_generate(&spec, 1000, 2.5e9).unwrap();
        let seq = place_edges(&pattern, &EdgeProgram::default()).unwrap();
        let jitter = JitterConfig::new(0.0, 20.0, 3).unwrap();
        let jittered = inject_jitter(&seq, &jitter).unwrap();
        let levels = LevelConfig::default();
        let w = render_waveform(&jittered, &levels, 7.5).unwrap();
        let metrics = EyeMetrics::measure(&w, pattern.bit_period_ps()).unwrap();
        assert!(metrics.jitter_pp_ps >= metrics.jitter_rms_ps);
        assert!(metrics.eye_opening_ui > 0.9 && metrics.eye_opening_ui < 1.0);
        assert!(metrics.eye_height_mv.unwrap() > 700.0);
        assert!(metrics.rise_2080_ps.is_some());
        assert!(metrics.crossing_count > 400);
    }
}
