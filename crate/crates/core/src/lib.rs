//! Core library for studying how emotions spread over social ties.
//!
//! The crate bundles everything needed to go from raw follow/retweet data to
//! calibrated diffusion parameters:
//!
//! * [`graph`] — the social graph and retweet log data model, file ingestion,
//!   and a stochastic-block-model generator for synthetic experiments.
//! * [`tie`] — three per-edge tie-strength metrics (common friends,
//!   reciprocity, retweet counts) and the per-emotion strength comparison.
//! * [`diffusion`] — an SI-variant simulator where transmission probability is
//!   biased by tie strength through an exponent `alpha`.
//! * [`burst`] — cumulative-curve construction and parameterless detection of
//!   awakening/peak instants, yielding spread velocity (slope).
//! * [`stats`] — histograms, KL and Wasserstein divergences, Welch's t-test.
//! * [`calibrate`] — parameter sweeps and the divergence-minimizing fit of the
//!   strength-preference exponent against empirical tie-usage distributions.
//! * [`events`] — per-event dominant-emotion labeling and velocity analysis of
//!   real communication bursts.
//!
//! All randomness flows from a single root seed through named sub-streams
//! ([`seeds`]), so every pipeline is reproducible byte for byte. Replicate
//! simulations run in parallel when the `parallel` feature (default) is
//! enabled; results are reduced in index order so thread count never changes
//! output.

pub mod burst;
pub mod calibrate;
pub mod diffusion;
pub mod error;
pub mod events;
pub mod exec;
pub mod graph;
pub mod seeds;
pub mod stats;
pub mod tie;

pub use error::{Error, Result};
pub use graph::{Emotion, NodeId, NodeIdMap, RetweetLog, SocialGraph};
pub use tie::{Metric, TieStrengthTable};
