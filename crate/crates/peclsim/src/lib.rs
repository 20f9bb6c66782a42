//! Deterministic simulation of a low-cost multi-gigahertz test system.
//!
//! The signal path mirrors the hardware it models: a programmable logic
//! core synthesizes moderate-rate bit streams ([`pattern`]), a PECL
//! multiplexing chain serializes them and places edges on a 10 ps grid
//! over a 10 ns range ([`serializer`]), an output stage shapes the edges
//! with configurable levels, transition times, jitter, and interconnect
//! loss ([`analog`]), a picosecond strobe circuit captures the result
//! ([`sampler`]), and the folded waveform yields the usual figures of
//! merit ([`eye`]).
//!
//! Everything is a pure function of its inputs; runs with the same seeds
//! reproduce bit-for-bit.

pub mod analog;
pub mod error;
pub mod eye;
pub mod pattern;
pub mod sampler;
pub mod serializer;

pub use analog::{
    adjust_levels, channel_transfer, inject_jitter, render_waveform, ChannelModel, JitterConfig,
    LevelConfig, Waveform,
};
pub use error::{Error, Result};
pub use eye::{
    crossover_jitter, eye_height, eye_opening, fold_eye, measure_levels, transition_times,
    transition_times_between, EyeMetrics, EyeOpening, EyeRecord, EyeTrace, Levels,
    TransitionTimes,
};
pub use pattern::{
    build_vortex_frame, fixed_pattern, prbs_generate, BitPattern, FixedKind, LfsrSpec, VortexFrame,
};
pub use sampler::{
    compare_capture, equivalent_time_scan, strobe_sample, Capture, CompareReport, SamplerConfig,
};
pub use serializer::{
    demux_stage, mux_stage, place_edges, quantize_delay, Edge, EdgeDirection, EdgeProgram,
    EdgeSequence,
};
