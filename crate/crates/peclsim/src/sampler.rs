//! Threshold sampling at programmable strobe times and equivalent-time
//! waveform reconstruction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::analog::{JitterConfig, Waveform};
use crate::error::{Error, Result};
use crate::pattern::BitPattern;

/// Sampling front-end parameters.
///
/// The strobe grid applies to the phase programmed within one trigger;
/// successive strobes re-arm, so absolute capture times are unbounded.
/// `aperture` adds strobe-instant uncertainty; `None` samples ideally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub threshold_mv: f64,
    pub strobe_resolution_ps: f64,
    pub strobe_range_ps: f64,
    pub aperture: Option<JitterConfig>,
}

impl SamplerConfig {
    pub const DEFAULT_RESOLUTION_PS: f64 = 10.0;
    pub const DEFAULT_RANGE_PS: f64 = 10_000.0;

    pub fn new(threshold_mv: f64) -> Self {
        Self {
            threshold_mv,
            strobe_resolution_ps: Self::DEFAULT_RESOLUTION_PS,
            strobe_range_ps: Self::DEFAULT_RANGE_PS,
            aperture: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.strobe_resolution_ps > 0.0) {
            return Err(Error::InvalidProgram(format!(
                "strobe resolution {} ps must be positive",
                self.strobe_resolution_ps
            )));
        }
        if !(self.strobe_range_ps >= self.strobe_resolution_ps) {
            return Err(Error::InvalidProgram(format!(
                "strobe range {} ps must be at least one resolution step",
                self.strobe_range_ps
            )));
        }
        Ok(())
    }
}

/// Threshold decisions recorded at the requested strobe times.
#[derive(Debug, Clone, PartialEq)]
pub struct Capture {
    strobe_times_ps: Vec<f64>,
    decisions: Vec<u8>,
}

impl Capture {
    pub fn strobe_times_ps(&self) -> &[f64] {
        &self.strobe_times_ps
    }

    pub fn decisions(&self) -> &[u8] {
        &self.decisions
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }
}

/// Compare the interpolated waveform against the threshold at each strobe.
///
/// Decision is 1 when the voltage is at or above the threshold. Times must
/// be strictly increasing, on the strobe grid, and inside the waveform.
pub fn strobe_sample(w: &Waveform, times_ps: &[f64], cfg: &SamplerConfig) -> Result<Capture> {
    cfg.validate()?;
    let res = cfg.strobe_resolution_ps;
    for pair in times_ps.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::ShapeMismatch(format!(
                "strobe times must be strictly increasing, got {} ps after {} ps",
                pair[1], pair[0]
            )));
        }
    }
    for &t in times_ps {
        let steps = t / res;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::QuantizationError { t, resolution: res });
        }
        if t < w.t0_ps() || t > w.t_end_ps() {
            return Err(Error::OutOfRange {
                t,
                start: w.t0_ps(),
                end: w.t_end_ps(),
            });
        }
    }

    let mut aperture_rng = cfg.aperture.map(|j| {
        let gauss = Normal::new(0.0, j.rj_rms_ps).expect("finite sigma");
        let bounded = Uniform::new_inclusive(-0.5 * j.dj_pp_ps, 0.5 * j.dj_pp_ps);
        (ChaCha8Rng::seed_from_u64(j.seed), j, gauss, bounded)
    });

    let mut decisions = Vec::with_capacity(times_ps.len());
    for &t in times_ps {
        let t_actual = match aperture_rng.as_mut() {
            Some((rng, j, gauss, bounded)) => {
                let mut offset = 0.0;
                if j.rj_rms_ps > 0.0 {
                    offset += gauss.sample(rng);
                }
                if j.dj_pp_ps > 0.0 {
                    offset += bounded.sample(rng);
                }
                (t + offset).clamp(w.t0_ps(), w.t_end_ps())
            }
            None => t,
        };
        let v = w.sample_at(t_actual)?;
        decisions.push(u8::from(v >= cfg.threshold_mv));
    }
    Ok(Capture {
        strobe_times_ps: times_ps.to_vec(),
        decisions,
    })
}

/// Rebuild one period of a repetitive source by sweeping the strobe phase
/// across the period, one sample per repetition.
///
/// The record must cover at least one full period; phases are revisited
/// modulo the available repetitions. The result starts at phase 0 with the
/// strobe resolution as its sample interval.
pub fn equivalent_time_scan(source: &Waveform, period_ps: f64, cfg: &SamplerConfig) -> Result<Waveform> {
    cfg.validate()?;
    if !(period_ps > 0.0) {
        return Err(Error::InvalidProgram(format!(
            "period {period_ps} ps must be positive"
        )));
    }
    if period_ps > cfg.strobe_range_ps {
        return Err(Error::RangeExceeded {
            requested: period_ps,
            range: cfg.strobe_range_ps,
        });
    }
    let res = cfg.strobe_resolution_ps;
    let span = source.t_end_ps() - source.t0_ps();
    let n_reps = (span / period_ps).floor() as usize;
    if n_reps < 1 {
        return Err(Error::InsufficientData(format!(
            "source span {span} ps is shorter than one {period_ps} ps period"
        )));
    }
    let n_points = (period_ps / res).ceil() as usize;
    let mut samples = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let phase = i as f64 * res;
        if phase >= period_ps {
            break;
        }
        let rep = i % n_reps;
        let t = source.t0_ps() + rep as f64 * period_ps + phase;
        samples.push(source.sample_at(t)?);
    }
    Waveform::new(samples, res, 0.0)
}

/// Bit-for-bit comparison of a capture against the expected stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompareReport {
    pub pass: bool,
    pub error_count: usize,
    pub error_positions: Vec<usize>,
}

/// Hamming comparison; passes only with zero mismatches.
pub fn compare_capture(expected: &BitPattern, got: &Capture) -> Result<CompareReport> {
    if expected.len() != got.len() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} bits but captured {}",
            expected.len(),
            got.len()
        )));
    }
    let error_positions: Vec<usize> = expected
        .bits()
        .iter()
        .zip(got.decisions())
        .enumerate()
        .filter_map(|(i, (e, g))| (e != g).then_some(i))
        .collect();
    Ok(CompareReport {
        pass: error_positions.is_empty(),
        error_count: error_positions.len(),
        error_positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analog::{render_waveform, LevelConfig};
    use crate::pattern::{fixed_pattern, prbs_generate, FixedKind, LfsrSpec};
    use crate::serializer::{place_edges, EdgeProgram};

    #[test]
    fn constant_high_waveform_decides_ones() {
        let w = Waveform::new(vec![2400.0; 200], 10.0, 0.0).unwrap();
        let cfg = SamplerConfig::new(2000.0);
        let capture = strobe_sample(&w, &[0.0, 500.0, 1990.0], &cfg).unwrap();
        assert_eq!(capture.decisions(), &[1, 1, 1]);
    }

    #[test]
    fn at_threshold_counts_as_one() {
        let w = Waveform::new(vec![2000.0; 10], 10.0, 0.0).unwrap();
        let cfg = SamplerConfig::new(2000.0);
        let capture = strobe_sample(&w, &[40.0], &cfg).unwrap();
        assert_eq!(capture.decisions(), &[1]);
    }

    #[test]
    fn strobe_rejects_off_grid_and_out_of_span() {
        let w = Waveform::new(vec![0.0; 100], 10.0, 0.0).unwrap();
        let cfg = SamplerConfig::new(0.0);
        assert!(matches!(
            strobe_sample(&w, &[15.0], &cfg).unwrap_err(),
            Error::QuantizationError { .. }
        ));
        assert!(matches!(
            strobe_sample(&w, &[2000.0], &cfg).unwrap_err(),
            Error::OutOfRange { .. }
        ));
        assert!(matches!(
            strobe_sample(&w, &[50.0, 50.0], &cfg).unwrap_err(),
            Error::ShapeMismatch(_)
        ));
    }

    #[test]
    fn prbs_bit_centers_recover_source_bits() {
        let spec = LfsrSpec::prbs7();
        let pattern = prbs_generate(&spec, 300, 5e9).unwrap();
        let seq = place_edges(&pattern, &EdgeProgram::default()).unwrap();
        let levels = LevelConfig::default();
        let w = render_waveform(&seq, &levels, 5.0).unwrap();
        let t = pattern.bit_period_ps();
        let times: Vec<f64> = (0..pattern.len()).map(|k| k as f64 * t + t / 2.0).collect();
        let cfg = SamplerConfig::new(levels.midpoint_mv());
        let capture = strobe_sample(&w, &times, &cfg).unwrap();
        assert_eq!(capture.decisions(), pattern.bits());
    }

    #[test]
    fn aperture_jitter_is_deterministic() {
        let w = Waveform::new((0..1000).map(|i| i as f64).collect(), 10.0, 0.0).unwrap();
        let mut cfg = SamplerConfig::new(5000.0);
        cfg.aperture = Some(JitterConfig::new(5.0, 0.0, 9).unwrap());
        let times: Vec<f64> = (0..100).map(|i| 4000.0 + 10.0 * i as f64).collect();
        let a = strobe_sample(&w, &times, &cfg).unwrap();
        let b = strobe_sample(&w, &times, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.strobe_times_ps(), times.as_slice());
    }

    #[test]
    fn equivalent_time_scan_reconstructs_clock() {
        // 200 ps-period clock rendered over many repetitions.
        let p = fixed_pattern(&FixedKind::Alternating, 40, 5e9).unwrap();
        let seq = place_edges(&p, &EdgeProgram::default()).unwrap();
        let levels = LevelConfig::new(2400.0, 1600.0, 40.0, 40.0).unwrap();
        let w = render_waveform(&seq, &levels, 1.0).unwrap();
        let cfg = SamplerConfig::new(levels.midpoint_mv());

        let period = 2.0 * p.bit_period_ps();
        let recon = equivalent_time_scan(&w, period, &cfg).unwrap();
        assert_eq!(recon.dt_ps(), 10.0);
        assert_eq!(recon.len(), 40);

        // Strobes land exactly on source samples, so the reconstruction at
        // each swept phase matches the source period sample-for-sample.
        for (i, &v) in recon.samples_mv().iter().enumerate() {
            let src = w.sample_at(w.t0_ps() + period + i as f64 * 10.0).unwrap();
            assert!(
                (v - src).abs() < 1e-9,
                "phase {} ps: reconstructed {v}, source {src}",
                i as f64 * 10.0
            );
        }
    }

    #[test]
    fn equivalent_time_scan_constant_source() {
        let w = Waveform::new(vec![1234.5; 500], 1.0, 0.0).unwrap();
        let cfg = SamplerConfig::new(0.0);
        let recon = equivalent_time_scan(&w, 100.0, &cfg).unwrap();
        assert!(recon.samples_mv().iter().all(|&v| v == 1234.5));
    }

    #[test]
    fn equivalent_time_scan_range_limit() {
        let w = Waveform::new(vec![0.0; 40_000], 1.0, 0.0).unwrap();
        let cfg = SamplerConfig::new(0.0);
        assert_eq!(
            equivalent_time_scan(&w, 10_500.0, &cfg).unwrap_err(),
            Error::RangeExceeded {
                requested: 10_500.0,
                range: 10_000.0
            }
        );
    }

    #[test]
    fn compare_capture_counts_errors() {
        let expected = BitPattern::new(vec![1, 0, 1, 1], 1e9).unwrap();
        let same = Capture {
            strobe_times_ps: vec![0.0, 10.0, 20.0, 30.0],
            decisions: vec![1, 0, 1, 1],
        };
        let report = compare_capture(&expected, &same).unwrap();
        assert!(report.pass);
        assert_eq!(report.error_count, 0);

        let flipped = Capture {
            strobe_times_ps: vec![0.0, 10.0, 20.0, 30.0],
            decisions: vec![1, 0, 0, 1],
        };
        let report = compare_capture(&expected, &flipped).unwrap();
        assert!(!report.pass);
        assert_eq!(report.error_count, 1);
        assert_eq!(report.error_positions, vec![2]);

        let short = Capture {
            strobe_times_ps: vec![0.0],
            decisions: vec![1],
        };
        assert!(matches!(
            compare_capture(&expected, &short).unwrap_err(),
            Error::ShapeMismatch(_)
        ));
    }

    #[test]
    fn threshold_is_monotone() {
        let spec = LfsrSpec::prbs7();
        let pattern = prbs_generate(&spec, 64, 2.5e9).unwrap();
        let seq = place_edges(&pattern, &EdgeProgram::default()).unwrap();
        let w = render_waveform(&seq, &LevelConfig::default(), 5.0).unwrap();
        let t = pattern.bit_period_ps();
        let times: Vec<f64> = (0..pattern.len()).map(|k| k as f64 * t + t / 2.0).collect();

        let mut prev: Option<Vec<u8>> = None;
        for thr in [1500.0, 1700.0, 1900.0, 2100.0, 2300.0, 2500.0] {
            let cfg = SamplerConfig::new(thr);
            let capture = strobe_sample(&w, &times, &cfg).unwrap();
            if let Some(prev) = &prev {
                for (lo_thr, hi_thr) in prev.iter().zip(capture.decisions()) {
                    // Raising the threshold never turns a 0 into a 1.
                    assert!(hi_thr <= lo_thr);
                }
            }
            prev = Some(capture.decisions().to_vec());
        }
    }
}
