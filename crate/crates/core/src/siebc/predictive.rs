//! Posterior predictive checks: re-simulated sentiment distributions,
//! Wasserstein distance to the observations, and predicted homophily.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::UserTimeline;
use crate::homophily::{difference_histogram, homophily_measure, joint_histogram, NullSpec};
use crate::rng::StreamKey;
use crate::stats::quantile_type7_sorted;
use crate::{CoreError, Result};

use super::blocks::{interaction_blocks, OwnCommentBlock};
use super::fit::PosteriorDraws;
use super::simulate::{step_user, UserState};
use super::wasserstein::{wasserstein_1, BinnedDistribution};
use super::SiebcParams;

/// Knobs of the predictive pass.
#[derive(Debug, Clone, Copy)]
pub struct PredictiveConfig {
    pub bin_width: f64,
    /// Posterior draws (evenly spaced) at which predicted homophily is
    /// evaluated.
    pub h_draws: usize,
    /// Null replicates per homophily evaluation.
    pub h_replicates: usize,
}

impl Default for PredictiveConfig {
    fn default() -> Self {
        PredictiveConfig { bin_width: crate::homophily::DEFAULT_BIN_WIDTH, h_draws: 50, h_replicates: 200 }
    }
}

/// Outcome of the predictive pass.
#[derive(Debug, Clone)]
pub struct PredictiveSummary {
    pub observed: BinnedDistribution,
    pub predicted: BinnedDistribution,
    /// Wasserstein distance between the two distributions.
    pub w1: f64,
    /// Predicted homophily per evaluated draw.
    pub h_values: Vec<f64>,
    /// Min, first quartile, median, third quartile, max of `h_values`.
    pub h_summary: [f64; 5],
}

/// Re-simulates expressed sentiments over the observed interaction skeletons
/// for every posterior draw, starting each replicate at the draw's initial
/// internal state.
pub fn posterior_predictive(
    draws: &PosteriorDraws,
    timelines: &[UserTimeline],
    config: &PredictiveConfig,
    seed: u64,
) -> Result<PredictiveSummary> {
    if draws.users.is_empty() {
        return Err(CoreError::empty_input("no posterior draws"));
    }
    let by_user: HashMap<&str, &UserTimeline> =
        timelines.iter().map(|tl| (tl.user.as_str(), tl)).collect();
    let mut blocks: Vec<(usize, Vec<OwnCommentBlock>)> = Vec::with_capacity(draws.users.len());
    for (i, user) in draws.users.iter().enumerate() {
        let tl = by_user.get(user.user.as_str()).ok_or_else(|| {
            CoreError::invalid_argument(format!("no timeline for fitted user `{}`", user.user))
        })?;
        blocks.push((i, interaction_blocks(tl)));
    }
    let total_draws = draws.users[0].total_draws();
    if total_draws == 0 {
        return Err(CoreError::empty_input("posterior contains no draws"));
    }

    let key = StreamKey::new(seed, "predictive");
    let kernel = draws.config.kernel;
    let gamma = draws.config.gamma;

    // One simulated pass per draw: expressed values plus (expressed, parent) pairs.
    let per_draw: Vec<Vec<(f64, f64)>> = (0..total_draws)
        .into_par_iter()
        .map(|d| {
            let mut pairs = Vec::new();
            for (ui, user_blocks) in &blocks {
                let user = &draws.users[*ui];
                let row = user.params[d];
                let params = SiebcParams {
                    alpha_e: row[0],
                    alpha_u: row[1],
                    epsilon: row[2],
                    sigma_e: row[3],
                    sigma_u: row[4],
                    gamma,
                };
                let mut rng = key.with_index(d as u64).with_str(&user.user).rng();
                let u0 = user.latents[d][0];
                let mut state = UserState { internal: u0, expressed: u0 };
                for block in user_blocks {
                    state = step_user(
                        state,
                        block.parent_sentiment,
                        &block.interactions,
                        &params,
                        kernel,
                        &mut rng,
                    );
                    pairs.push((state.expressed, block.parent_sentiment));
                }
            }
            pairs
        })
        .collect();

    let observed_values: Vec<f64> = blocks
        .iter()
        .flat_map(|(_, bs)| bs.iter().map(|b| b.expressed_sentiment))
        .collect();
    let observed = BinnedDistribution::from_values(&observed_values, config.bin_width)?;
    let predicted_values: Vec<f64> =
        per_draw.iter().flat_map(|pairs| pairs.iter().map(|&(e, _)| e)).collect();
    let predicted = BinnedDistribution::from_values(&predicted_values, config.bin_width)?;
    let w1 = wasserstein_1(&observed, &predicted)?;

    // Homophily of the predicted comment-parent pairs on a draw subsample.
    let h_draw_count = config.h_draws.clamp(1, total_draws);
    let stride = total_draws / h_draw_count;
    let h_values: Vec<f64> = (0..h_draw_count)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let d = k * stride;
            let pairs = &per_draw[d];
            let hist = joint_histogram(pairs, config.bin_width)?;
            let spec = NullSpec {
                comment_pool: pairs.iter().map(|&(e, _)| e).collect(),
                context_pool: pairs.iter().map(|&(_, p)| p).collect(),
                n: 1,
            };
            let h_seed = key.with_str("h").with_index(d as u64).seed();
            let diff = difference_histogram(&hist, &spec, config.h_replicates, h_seed)?;
            Ok(homophily_measure(&diff))
        })
        .collect::<Result<_>>()?;

    let mut sorted = h_values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite homophily values"));
    let h_summary = [
        sorted[0],
        quantile_type7_sorted(&sorted, 0.25),
        quantile_type7_sorted(&sorted, 0.5),
        quantile_type7_sorted(&sorted, 0.75),
        sorted[sorted.len() - 1],
    ];

    Ok(PredictiveSummary { observed, predicted, w1, h_values, h_summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siebc::fit::{fit, Priors, SamplerConfig};
    use crate::siebc::synthetic::{generate_synthetic, SyntheticSpec};

    #[test]
    fn predictive_is_deterministic_and_bounded() {
        let spec = SyntheticSpec::recovery_benchmark(3, 15);
        let data = generate_synthetic(&spec, 4).unwrap();
        let config = SamplerConfig { chains: 2, draws_per_chain: 20, warmup: 20, ..Default::default() };
        let draws = fit(&data.timelines, &Priors::default(), &config, 8).unwrap();
        let pc = PredictiveConfig { h_draws: 4, h_replicates: 100, ..Default::default() };
        let a = posterior_predictive(&draws, &data.timelines, &pc, 3).unwrap();
        let b = posterior_predictive(&draws, &data.timelines, &pc, 3).unwrap();
        assert_eq!(a.w1, b.w1);
        assert_eq!(a.h_values, b.h_values);
        assert!(a.w1 >= 0.0);
        assert!((a.predicted.masses.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(a.h_summary[0] <= a.h_summary[2] && a.h_summary[2] <= a.h_summary[4]);
    }
}
