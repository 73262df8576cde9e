//! Analysis and simulation toolkit for tree-structured discussion corpora.
//!
//! The crate covers four concerns:
//!
//! * [`corpus`] — ingesting newline-delimited post records, rebuilding thread
//!   trees, resolving topics, and deriving the per-user structures (discussion
//!   sequences, sentiment contexts, interaction timelines) every analysis
//!   consumes.
//! * [`temporal`] — daily volume series, rolling means, piecewise linear
//!   trends between event dates, and significantly-negative-day detection.
//! * [`initiation`] — the exact combinatorial null model for the position of
//!   a user's first initiated discussion, and observed-vs-expected curves.
//! * [`homophily`] — joint sentiment histograms, Monte-Carlo null models, the
//!   significance-filtered difference histogram, and the homophily measure.
//! * [`siebc`] — the Smooth Internal Expressed Bounded Confidence model:
//!   forward simulation, synthetic corpus generation, Bayesian calibration of
//!   per-user parameters and latent internal trajectories, and the
//!   goodness-of-fit machinery (Wasserstein distance, Mann-Whitney kappa,
//!   posterior predictive checks, internal-state reconstruction).
//!
//! All randomized routines take explicit seeds and derive independent streams
//! per logical task, so results are bit-reproducible regardless of thread
//! count.

pub mod corpus;
pub mod error;
pub mod homophily;
pub mod initiation;
pub mod rng;
pub mod siebc;
pub mod stats;
pub mod temporal;

pub use error::CoreError;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
