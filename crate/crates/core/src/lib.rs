//! Physical-layer authentication of on-body backscatter tags.
//!
//! An on-body transmitter/receiver pair carries a backscatter link that a
//! nearby radio can try to spoof. Because on-body propagation rides creeping
//! waves along the body surface, intentionally moving the transmitter stamps
//! a signature onto every genuine on-body path that off-body emitters cannot
//! follow. This crate provides:
//!
//! - [`propagation`]: creeping-wave and free-space channel models,
//! - [`synth`]: labeled RSS series synthesis for genuine and attack scenarios,
//! - [`pipeline`]: the detection chain from smoothing to the final verdict,
//! - [`harness`]: seeded Monte-Carlo sweeps and TP/FP metric reports,
//! - [`io`]: the on-disk series, verdict, and report formats.

pub mod error;
pub mod harness;
pub mod io;
pub mod pipeline;
pub mod propagation;
pub mod rng;
pub mod scenario;
pub mod series;
pub mod synth;

pub use error::{Error, Result};
pub use scenario::{
    AttackerConfig, AttackerKind, AttackerPlace, BackscatterConfig, Band, DynamicsProfile,
    MovementEvent, MovementScript, ScenarioModel, ScenarioSpec, TagPosition, TrafficModel,
};
pub use series::{LabeledSeries, SampleSeries, SourceLabel};
