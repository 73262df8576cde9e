//! The Smooth Internal Expressed Bounded Confidence (SIEBC) opinion model.
//!
//! Each user carries two coupled states in [-1, 1]: a latent internal
//! sentiment `u` and an observable expressed sentiment `e`. When the user
//! comments, the expressed value is drawn around a bounded-confidence update
//! of the internal state toward the parent's sentiment; the internal state
//! itself absorbs every interaction (parent and replies received) since the
//! user's previous comment, one bounded-confidence update each, in time
//! order. Both draws are truncated normal. The smooth gate
//! `1 / (1 + exp(gamma ((s2 - s1)^2 - eps^2)))` makes the model
//! differentiable; at `eps = 2` and large `gamma` it degenerates to the
//! linear consensus kernel.

mod blocks;
mod fit;
mod kappa;
mod kernel;
mod predictive;
mod reconstruct;
mod simulate;
mod synthetic;
mod truncnorm;
mod wasserstein;

pub use blocks::{interaction_blocks, OwnCommentBlock};
pub use fit::{
    column_stats, fit, log_posterior, split_rhat, FitWarning, PosteriorDraws, Priors,
    SamplerConfig, UserDraws, PARAM_NAMES, RHAT_WARN,
};
pub use kappa::kappa;
pub use kernel::{bc_kernel, linear_kernel, KernelKind};
pub use predictive::{posterior_predictive, PredictiveConfig, PredictiveSummary};
pub use reconstruct::{reconstruct_internal, DailyInternal};
pub use simulate::{simulate, step_user, UserState};
pub use synthetic::{
    generate_synthetic, InitialStateSpec, ParamRange, PartnerChoice, SyntheticData, SyntheticSpec,
    UserTruth,
};
pub use truncnorm::{truncated_normal_logpdf, truncated_normal_sample};
pub use wasserstein::{wasserstein_1, BinnedDistribution};

use serde::{Deserialize, Serialize};

/// Default gate sharpness.
pub const DEFAULT_GAMMA: f64 = 50.0;

/// Per-user model parameters plus the shared gate sharpness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiebcParams {
    /// Update strength of the expressed state toward the parent.
    pub alpha_e: f64,
    /// Update strength of the internal state per interaction.
    pub alpha_u: f64,
    /// Confidence threshold: the sentiment distance where the gate is steepest.
    pub epsilon: f64,
    /// Noise scale of the expressed draw.
    pub sigma_e: f64,
    /// Noise scale of the internal draw.
    pub sigma_u: f64,
    /// Gate sharpness, fixed per run.
    pub gamma: f64,
}

impl SiebcParams {
    pub fn validate(&self) -> crate::Result<()> {
        if self.alpha_e < 0.0 || self.alpha_u < 0.0 {
            return Err(crate::CoreError::invalid_argument("update strengths must be >= 0"));
        }
        if !(0.0..=2.0).contains(&self.epsilon) {
            return Err(crate::CoreError::invalid_argument("epsilon must lie in [0, 2]"));
        }
        if self.sigma_e <= 0.0 || self.sigma_u <= 0.0 {
            return Err(crate::CoreError::invalid_argument("noise scales must be > 0"));
        }
        if self.gamma <= 0.0 {
            return Err(crate::CoreError::invalid_argument("gamma must be > 0"));
        }
        Ok(())
    }
}
