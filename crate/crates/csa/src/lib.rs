//! Toolkit for coded slotted ALOHA (CSA) over the collision channel without
//! feedback.
//!
//! Users split a packet into `k` segments, encode them with a randomly drawn
//! `(n_h, k)` erasure-correcting component code, and transmit the coded
//! segments in uniformly chosen sub-slots of a MAC frame. The receiver peels
//! the resulting burst-node/sum-node bipartite graph with successive
//! interference cancellation (SIC), running local erasure decoding at each
//! burst. This crate provides:
//!
//! - [`codes`] — component codes, GF(2) rank, information functions and MAP
//!   erasure decoding;
//! - [`exit`] — burst-node and sum-node EXIT functions, their areas and EXIT
//!   chart sampling;
//! - [`density`] — the asymptotic density-evolution recursion and the
//!   threshold `G*` located by bisection;
//! - [`bound`] — the capacity bound `Ḡ(R)`, the unique positive root of
//!   `G = 1 − exp(−G/R)`;
//! - [`optimize`] — differential-evolution search for code distributions
//!   maximizing `G*` at a fixed rate, plus named preset distributions;
//! - [`simulate`] — finite-frame Monte Carlo SIC simulation producing packet
//!   loss rate and throughput;
//! - [`io`] — the JSON/CSV interchange formats;
//! - [`cli`] — the `csa` command-line front end.

pub mod bound;
pub mod cli;
pub mod codes;
pub mod density;
pub mod exit;
pub mod io;
pub mod optimize;
pub mod simulate;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid code: {0}")]
    InvalidCode(String),
    /// Exhaustive information-function enumeration was requested for a code
    /// whose length makes the subset walk intractable.
    #[error("code too long for exhaustive information functions: n = {n}, max = {max}")]
    CodeTooLong { n: usize, max: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("infeasible constraints: {0}")]
    Infeasible(String),
    #[error("frame too small: code length {code_len} exceeds {sub_slots} sub-slots")]
    FrameTooSmall { code_len: usize, sub_slots: usize },
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use bound::{bound_curve, rate_of_gbar, solve_bound, BoundPoint};
pub use codes::{gf2_rank, BitMatrix, CodeFamily, ComponentCode, CoordSet, InformationFunctions};
pub use density::{de_run, find_threshold, DensityEvolutionOutcome, ThresholdResult};
pub use exit::{
    area_bn, area_sn, exit_bn_map, exit_bn_mds_suboptimal, exit_sn, exit_sn_inverse,
    sample_exit_chart, CodeDistribution, DistEntry, ExitChartSample,
};
pub use optimize::{
    optimize_distribution, preset, project_to_constraints, OptimizationProblem,
    OptimizationResult, OptimizeFamily,
};
pub use simulate::{build_frame, peel, run_plr, sweep_plr, FrameInstance, SimReport, StopRule};
