//! Bayesian calibration of per-user parameters and latent internal
//! trajectories.
//!
//! Each user is fitted independently: the posterior over
//! `(alpha_e, alpha_u, epsilon, sigma_e, sigma_u)` plus the internal states
//! `u_0 .. u_m` (one per own comment, preceded by the initial state) is
//! explored with an adaptive random-walk Metropolis-within-Gibbs sampler.
//! Parameters are updated one at a time against the full conditional; latent
//! states are updated single-site, which is cheap because `u_k` only touches
//! the two adjacent transitions and the next expressed observation.
//!
//! Proposal scales adapt during warmup only (so the retained chain is a
//! plain Metropolis chain) toward a 0.44 single-site acceptance rate.
//! Chains are overdispersed at initialization and summarized by split R-hat.

use rayon::prelude::*;

use crate::corpus::UserTimeline;
use crate::rng::StreamKey;
use crate::{CoreError, Result};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::blocks::{interaction_blocks, OwnCommentBlock};
use super::kernel::KernelKind;
use super::truncnorm::truncated_normal_logpdf;
use super::SiebcParams;

/// Order of the per-user parameter vector.
pub const PARAM_NAMES: [&str; 5] = ["alpha_e", "alpha_u", "epsilon", "sigma_e", "sigma_u"];

/// Lower bound keeping noise scales away from degenerate densities.
const SIGMA_FLOOR: f64 = 1e-6;

/// Prior specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Priors {
    /// Mean of the exponential priors on both update strengths.
    pub alpha_mean: f64,
    /// Mean of the exponential priors on both noise scales.
    pub sigma_mean: f64,
    /// Upper bound of the uniform prior on the confidence threshold.
    pub epsilon_max: f64,
}

impl Default for Priors {
    fn default() -> Self {
        Priors { alpha_mean: 0.5, sigma_mean: 0.5, epsilon_max: 2.0 }
    }
}

/// Sampler budget and model switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub chains: usize,
    pub draws_per_chain: usize,
    /// Adaptation sweeps discarded per chain.
    pub warmup: usize,
    /// Sweeps between retained draws.
    pub thin: usize,
    pub gamma: f64,
    pub kernel: KernelKind,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            chains: 6,
            draws_per_chain: 500,
            warmup: 250,
            thin: 1,
            gamma: super::DEFAULT_GAMMA,
            kernel: KernelKind::Bounded,
        }
    }
}

/// Posterior draws for one user.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDraws {
    pub user: String,
    pub n_events: usize,
    pub chains: usize,
    pub draws_per_chain: usize,
    /// `chains * draws_per_chain` rows, chain-major.
    pub params: Vec<[f64; 5]>,
    /// Latent trajectory per draw: `u_0 .. u_m` (initial state first).
    pub latents: Vec<Vec<f64>>,
    /// Split R-hat per parameter.
    pub rhat: [f64; 5],
    /// Post-warmup acceptance rate across all coordinates.
    pub acceptance: f64,
}

impl UserDraws {
    pub fn total_draws(&self) -> usize {
        self.chains * self.draws_per_chain
    }

    /// All draws of one parameter, chain-major.
    pub fn param_column(&self, p: usize) -> Vec<f64> {
        self.params.iter().map(|row| row[p]).collect()
    }

    /// One parameter restricted to one chain.
    pub fn param_chain(&self, p: usize, chain: usize) -> Vec<f64> {
        let lo = chain * self.draws_per_chain;
        self.params[lo..lo + self.draws_per_chain].iter().map(|row| row[p]).collect()
    }

    pub fn max_rhat(&self) -> f64 {
        self.rhat.iter().copied().fold(f64::NAN, f64::max)
    }
}

/// Non-fatal calibration warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct FitWarning {
    pub user: String,
    pub message: String,
}

/// Posterior draws for every fitted user.
#[derive(Debug, Clone)]
pub struct PosteriorDraws {
    pub users: Vec<UserDraws>,
    pub config: SamplerConfig,
    pub priors: Priors,
    pub seed: u64,
    pub warnings: Vec<FitWarning>,
}

/// R-hat above which a user is flagged as non-converged.
pub const RHAT_WARN: f64 = 1.1;

/// Joint log-density of parameters, latent trajectory, and observations.
///
/// `latents` holds `u_0 .. u_m` for `m` blocks. Includes the truncation
/// normalization of every truncated-normal term and the priors.
pub fn log_posterior(
    blocks: &[OwnCommentBlock],
    params: &SiebcParams,
    latents: &[f64],
    priors: &Priors,
    kernel: KernelKind,
) -> f64 {
    debug_assert_eq!(latents.len(), blocks.len() + 1);
    let mut lp = log_prior(params, priors);
    if lp == f64::NEG_INFINITY {
        return lp;
    }
    if latents.iter().any(|u| !(-1.0..=1.0).contains(u)) {
        return f64::NEG_INFINITY;
    }
    for (k, block) in blocks.iter().enumerate() {
        lp += expressed_term(block, params, latents[k], kernel);
        lp += transition_term(block, params, latents[k], latents[k + 1], kernel);
        if lp == f64::NEG_INFINITY {
            return lp;
        }
    }
    lp
}

fn log_prior(params: &SiebcParams, priors: &Priors) -> f64 {
    let alpha_rate = 1.0 / priors.alpha_mean;
    let sigma_rate = 1.0 / priors.sigma_mean;
    if params.alpha_e < 0.0
        || params.alpha_u < 0.0
        || params.sigma_e < SIGMA_FLOOR
        || params.sigma_u < SIGMA_FLOOR
        || !(0.0..=priors.epsilon_max).contains(&params.epsilon)
    {
        return f64::NEG_INFINITY;
    }
    alpha_rate.ln() - alpha_rate * params.alpha_e
        + alpha_rate.ln() - alpha_rate * params.alpha_u
        + sigma_rate.ln() - sigma_rate * params.sigma_e
        + sigma_rate.ln() - sigma_rate * params.sigma_u
        - priors.epsilon_max.ln()
        - std::f64::consts::LN_2 // uniform initial internal state on [-1, 1]
}

fn expressed_term(block: &OwnCommentBlock, params: &SiebcParams, u_prev: f64, kernel: KernelKind) -> f64 {
    let mu = kernel.apply(u_prev, block.parent_sentiment, params.alpha_e, params.epsilon, params.gamma);
    truncated_normal_logpdf(block.expressed_sentiment, mu, params.sigma_e)
}

fn transition_term(
    block: &OwnCommentBlock,
    params: &SiebcParams,
    u_prev: f64,
    u_next: f64,
    kernel: KernelKind,
) -> f64 {
    let mut mu = u_prev;
    for &s in &block.interactions {
        mu = kernel.apply(mu, s, params.alpha_u, params.epsilon, params.gamma);
    }
    truncated_normal_logpdf(u_next, mu, params.sigma_u)
}

/// Terms of the log-posterior that involve latent `j`.
fn latent_local(
    blocks: &[OwnCommentBlock],
    params: &SiebcParams,
    latents: &[f64],
    j: usize,
    value: f64,
    kernel: KernelKind,
) -> f64 {
    if !(-1.0..=1.0).contains(&value) {
        return f64::NEG_INFINITY;
    }
    let m = blocks.len();
    let mut lp = 0.0;
    if j >= 1 {
        lp += transition_term(&blocks[j - 1], params, latents[j - 1], value, kernel);
    }
    if j < m {
        lp += expressed_term(&blocks[j], params, value, kernel);
        lp += transition_term(&blocks[j], params, value, latents[j + 1], kernel);
    }
    lp
}

struct ChainOutput {
    params: Vec<[f64; 5]>,
    latents: Vec<Vec<f64>>,
    accepted: u64,
    proposed: u64,
}

/// Running mean and covariance of the (alpha_u, sigma_u, epsilon) block,
/// collected during warmup to shape a joint ridge-following proposal.
struct BlockAdapter {
    n: u64,
    mean: [f64; 3],
    // Upper triangle of the scatter matrix.
    scatter: [f64; 6],
    log_scale: f64,
    adapt_count: u64,
    chol: Option<[f64; 6]>,
}

impl BlockAdapter {
    fn new() -> Self {
        BlockAdapter {
            n: 0,
            mean: [0.0; 3],
            scatter: [0.0; 6],
            log_scale: 0.0,
            adapt_count: 0,
            chol: None,
        }
    }

    fn observe(&mut self, x: [f64; 3]) {
        self.n += 1;
        let w = 1.0 / self.n as f64;
        let mut delta = [0.0; 3];
        for i in 0..3 {
            delta[i] = x[i] - self.mean[i];
            self.mean[i] += w * delta[i];
        }
        let mut k = 0;
        for i in 0..3 {
            for j in i..3 {
                self.scatter[k] += delta[i] * (x[j] - self.mean[j]);
                k += 1;
            }
        }
    }

    /// Refreshes the Cholesky factor of the scaled covariance estimate.
    fn refresh(&mut self) {
        if self.n < 50 {
            return;
        }
        let denom = (self.n - 1) as f64;
        // 2.38^2 / d scaling with a jitter floor on the diagonal.
        let s = 2.38 * 2.38 / 3.0;
        let cov = |k: usize| self.scatter[k] / denom * s;
        let a = [
            cov(0) + 1e-8,
            cov(1),
            cov(2),
            cov(3) + 1e-8,
            cov(4),
            cov(5) + 1e-8,
        ];
        // Cholesky of [[a0,a1,a2],[a1,a3,a4],[a2,a4,a5]].
        let l00 = a[0].sqrt();
        let l10 = a[1] / l00;
        let l20 = a[2] / l00;
        let d11 = a[3] - l10 * l10;
        if d11 <= 0.0 {
            return;
        }
        let l11 = d11.sqrt();
        let l21 = (a[4] - l20 * l10) / l11;
        let d22 = a[5] - l20 * l20 - l21 * l21;
        if d22 <= 0.0 {
            return;
        }
        self.chol = Some([l00, l10, l11, l20, l21, d22.sqrt()]);
    }

    fn propose(&self, x: [f64; 3], z: [f64; 3]) -> Option<[f64; 3]> {
        let l = self.chol?;
        let s = self.log_scale.exp();
        Some([
            x[0] + s * l[0] * z[0],
            x[1] + s * (l[1] * z[0] + l[2] * z[1]),
            x[2] + s * (l[3] * z[0] + l[4] * z[1] + l[5] * z[2]),
        ])
    }
}

fn run_chain(
    blocks: &[OwnCommentBlock],
    priors: &Priors,
    config: &SamplerConfig,
    mut rng: impl Rng,
) -> ChainOutput {
    let m = blocks.len();
    let n_latents = m + 1;
    let kernel = config.kernel;

    // Overdispersed initialization around the data.
    let mut z = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut params = SiebcParams {
        alpha_e: priors.alpha_mean * (0.4 * z()).exp(),
        alpha_u: priors.alpha_mean * (0.4 * z()).exp(),
        epsilon: (0.5 * priors.epsilon_max + 0.2 * z()).clamp(0.02, priors.epsilon_max - 0.02),
        sigma_e: 0.3 * (0.4 * z()).exp(),
        sigma_u: 0.3 * (0.4 * z()).exp(),
        gamma: config.gamma,
    };
    let mut latents = Vec::with_capacity(n_latents);
    for k in 0..n_latents {
        let anchor = blocks[k.min(m - 1)].expressed_sentiment;
        latents.push((anchor + 0.1 * z()).clamp(-0.99, 0.99));
    }

    // Per-coordinate proposal scales: 5 parameters then the latents.
    let n_coords = 5 + n_latents;
    let mut log_scale = vec![(0.2f64).ln(); n_coords];
    let mut adapt_count = vec![0u64; n_coords];

    let total_sweeps = config.warmup + config.draws_per_chain * config.thin;
    let mut out_params = Vec::with_capacity(config.draws_per_chain);
    let mut out_latents = Vec::with_capacity(config.draws_per_chain);
    let mut accepted = 0u64;
    let mut proposed = 0u64;

    let target_rate = 0.44;
    let mut block = BlockAdapter::new();
    for sweep in 0..total_sweeps {
        let warming = sweep < config.warmup;
        // Fresh total at the start of each sweep bounds the drift of the
        // locally updated cache.
        let mut current = log_posterior(blocks, &params, &latents, priors, kernel);

        for p in 0..5 {
            let scale = log_scale[p].exp();
            let step: f64 = StandardNormal.sample(&mut rng);
            let mut proposal = params;
            let field: &mut f64 = match p {
                0 => &mut proposal.alpha_e,
                1 => &mut proposal.alpha_u,
                2 => &mut proposal.epsilon,
                3 => &mut proposal.sigma_e,
                _ => &mut proposal.sigma_u,
            };
            *field += scale * step;
            let candidate = log_posterior(blocks, &proposal, &latents, priors, kernel);
            let accept = candidate > f64::NEG_INFINITY
                && rng.random::<f64>().ln() < candidate - current;
            if accept {
                params = proposal;
                current = candidate;
            }
            if !warming {
                proposed += 1;
                accepted += u64::from(accept);
            } else {
                adapt(&mut log_scale[p], &mut adapt_count[p], accept, target_rate);
            }
        }

        // Joint move along the learned (alpha_u, sigma_u, epsilon) ridge;
        // these three share the latent trajectory and mix poorly one at a
        // time. The proposal covariance freezes when warmup ends.
        let z = [
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        ];
        if let Some(candidate_block) = block.propose([params.alpha_u, params.sigma_u, params.epsilon], z) {
            let mut proposal = params;
            proposal.alpha_u = candidate_block[0];
            proposal.sigma_u = candidate_block[1];
            proposal.epsilon = candidate_block[2];
            let candidate = log_posterior(blocks, &proposal, &latents, priors, kernel);
            let accept = candidate > f64::NEG_INFINITY
                && rng.random::<f64>().ln() < candidate - current;
            if accept {
                params = proposal;
                current = candidate;
            }
            if !warming {
                proposed += 1;
                accepted += u64::from(accept);
            } else {
                adapt(&mut block.log_scale, &mut block.adapt_count, accept, 0.25);
            }
        }
        if warming {
            block.observe([params.alpha_u, params.sigma_u, params.epsilon]);
            if (sweep + 1) % 50 == 0 {
                block.refresh();
            }
        }

        for j in 0..n_latents {
            let coord = 5 + j;
            let scale = log_scale[coord].exp();
            let step: f64 = StandardNormal.sample(&mut rng);
            let value = latents[j] + scale * step;
            let before = latent_local(blocks, &params, &latents, j, latents[j], kernel);
            let after = latent_local(blocks, &params, &latents, j, value, kernel);
            let accept = after > f64::NEG_INFINITY && rng.random::<f64>().ln() < after - before;
            if accept {
                latents[j] = value;
                current += after - before;
            }
            if !warming {
                proposed += 1;
                accepted += u64::from(accept);
            } else {
                adapt(&mut log_scale[coord], &mut adapt_count[coord], accept, target_rate);
            }
        }

        if !warming && (sweep - config.warmup + 1) % config.thin == 0 {
            out_params.push([params.alpha_e, params.alpha_u, params.epsilon, params.sigma_e, params.sigma_u]);
            out_latents.push(latents.clone());
        }
    }

    ChainOutput { params: out_params, latents: out_latents, accepted, proposed }
}

fn adapt(log_scale: &mut f64, count: &mut u64, accepted: bool, target: f64) {
    *count += 1;
    let step = 1.0 / (*count as f64).powf(0.6);
    *log_scale += step * (if accepted { 1.0 - target } else { -target });
    *log_scale = log_scale.clamp(-12.0, 3.0);
}

/// Split R-hat over chains of equal length (each chain is halved).
/// Returns NaN when fewer than two splits of length two exist, and 1.0 for
/// perfectly constant draws.
pub fn split_rhat(chains: &[Vec<f64>]) -> f64 {
    let mut splits: Vec<&[f64]> = Vec::with_capacity(chains.len() * 2);
    for c in chains {
        let n = c.len();
        if n < 4 {
            return f64::NAN;
        }
        let half = n / 2;
        splits.push(&c[..half]);
        splits.push(&c[n - half..]);
    }
    let m = splits.len() as f64;
    let n = splits[0].len() as f64;
    let means: Vec<f64> = splits.iter().map(|s| s.iter().sum::<f64>() / n).collect();
    let grand = means.iter().sum::<f64>() / m;
    let b = n / (m - 1.0) * means.iter().map(|mu| (mu - grand) * (mu - grand)).sum::<f64>();
    let w = splits
        .iter()
        .zip(&means)
        .map(|(s, mu)| s.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (n - 1.0))
        .sum::<f64>()
        / m;
    if w == 0.0 {
        // All splits constant: identical constants converged, else divergent.
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    let var_plus = (n - 1.0) / n * w + b / n;
    (var_plus / w).sqrt()
}

/// Fits every timeline independently and in parallel.
///
/// Streams are keyed by `(seed, user, chain)`, so results are bit-identical
/// for a fixed seed regardless of thread count. Non-convergence (R-hat above
/// [`RHAT_WARN`]) is reported as a warning; draws are returned regardless.
pub fn fit(
    timelines: &[UserTimeline],
    priors: &Priors,
    config: &SamplerConfig,
    seed: u64,
) -> Result<PosteriorDraws> {
    if timelines.is_empty() {
        return Err(CoreError::empty_input("no timelines to fit"));
    }
    if config.chains == 0 || config.draws_per_chain == 0 || config.thin == 0 {
        return Err(CoreError::invalid_argument("chains, draws and thin must be at least 1"));
    }
    if config.gamma <= 0.0 {
        return Err(CoreError::invalid_argument("gamma must be positive"));
    }
    let user_blocks: Vec<(usize, Vec<OwnCommentBlock>)> = timelines
        .iter()
        .enumerate()
        .map(|(i, tl)| (i, interaction_blocks(tl)))
        .collect();
    for (i, blocks) in &user_blocks {
        if blocks.is_empty() {
            return Err(CoreError::invalid_argument(format!(
                "timeline of user `{}` has no own comments",
                timelines[*i].user
            )));
        }
    }

    let key = StreamKey::new(seed, "siebc-fit");
    let tasks: Vec<(usize, usize)> = (0..timelines.len())
        .flat_map(|u| (0..config.chains).map(move |c| (u, c)))
        .collect();
    let chain_outputs: Vec<ChainOutput> = tasks
        .par_iter()
        .map(|&(u, c)| {
            let rng = key.with_str(&timelines[u].user).with_index(c as u64).rng();
            run_chain(&user_blocks[u].1, priors, config, rng)
        })
        .collect();

    let mut users = Vec::with_capacity(timelines.len());
    let mut warnings = Vec::new();
    for (u, timeline) in timelines.iter().enumerate() {
        let mut params = Vec::with_capacity(config.chains * config.draws_per_chain);
        let mut latents = Vec::with_capacity(config.chains * config.draws_per_chain);
        let mut accepted = 0u64;
        let mut proposed = 0u64;
        for c in 0..config.chains {
            let out = &chain_outputs[u * config.chains + c];
            params.extend_from_slice(&out.params);
            latents.extend(out.latents.iter().cloned());
            accepted += out.accepted;
            proposed += out.proposed;
        }
        let mut draws = UserDraws {
            user: timeline.user.clone(),
            n_events: user_blocks[u].1.len(),
            chains: config.chains,
            draws_per_chain: config.draws_per_chain,
            params,
            latents,
            rhat: [f64::NAN; 5],
            acceptance: if proposed == 0 { 0.0 } else { accepted as f64 / proposed as f64 },
        };
        for p in 0..5 {
            let chains: Vec<Vec<f64>> =
                (0..config.chains).map(|c| draws.param_chain(p, c)).collect();
            draws.rhat[p] = split_rhat(&chains);
        }
        if config.chains > 1 {
            for p in 0..5 {
                if draws.rhat[p].is_finite() && draws.rhat[p] > RHAT_WARN {
                    warnings.push(FitWarning {
                        user: timeline.user.clone(),
                        message: format!(
                            "split R-hat {:.3} for {} exceeds {RHAT_WARN}",
                            draws.rhat[p], PARAM_NAMES[p]
                        ),
                    });
                }
            }
        }
        users.push(draws);
    }

    Ok(PosteriorDraws { users, config: *config, priors: *priors, seed, warnings })
}

/// Convenience: five-number summary plus mean/sd of a parameter column.
pub fn column_stats(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{TimelineEvent, Topic};
    use crate::siebc::synthetic::{generate_synthetic, SyntheticSpec};

    fn tiny_timeline() -> UserTimeline {
        UserTimeline {
            user: "u".into(),
            topic: Topic::Mask,
            events: vec![
                TimelineEvent::OwnComment { t: 1, parent_sentiment: 0.4, expressed_sentiment: 0.2 },
                TimelineEvent::ReplyReceived { t: 2, sentiment: -0.1 },
                TimelineEvent::OwnComment { t: 3, parent_sentiment: 0.1, expressed_sentiment: 0.15 },
            ],
        }
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(fit(&[], &Priors::default(), &SamplerConfig::default(), 1).is_err());
    }

    #[test]
    fn identical_seeds_give_identical_draws() {
        let tl = vec![tiny_timeline()];
        let config = SamplerConfig { chains: 2, draws_per_chain: 30, warmup: 20, ..Default::default() };
        let a = fit(&tl, &Priors::default(), &config, 5).unwrap();
        let b = fit(&tl, &Priors::default(), &config, 5).unwrap();
        assert_eq!(a.users[0].params, b.users[0].params);
        assert_eq!(a.users[0].latents, b.users[0].latents);
        let c = fit(&tl, &Priors::default(), &config, 6).unwrap();
        assert_ne!(a.users[0].params, c.users[0].params);
    }

    #[test]
    fn draws_satisfy_support_constraints() {
        let tl = vec![tiny_timeline()];
        let config = SamplerConfig { chains: 2, draws_per_chain: 50, warmup: 30, ..Default::default() };
        let draws = fit(&tl, &Priors::default(), &config, 9).unwrap();
        for row in &draws.users[0].params {
            assert!(row[0] >= 0.0 && row[1] >= 0.0);
            assert!((0.0..=2.0).contains(&row[2]));
            assert!(row[3] > 0.0 && row[4] > 0.0);
        }
        for lat in &draws.users[0].latents {
            assert_eq!(lat.len(), 3);
            assert!(lat.iter().all(|u| (-1.0..=1.0).contains(u)));
        }
    }

    #[test]
    fn log_posterior_prefers_true_parameters_over_inflated_alpha_e() {
        let spec = SyntheticSpec::recovery_benchmark(10, 80);
        let data = generate_synthetic(&spec, 42).unwrap();
        let priors = Priors::default();
        let mut wins = 0;
        for (tl, truth) in data.timelines.iter().zip(&data.truth) {
            let blocks = interaction_blocks(tl);
            let mut latents = vec![truth.u0];
            latents.extend_from_slice(&truth.trajectory);
            let lp_true = log_posterior(&blocks, &truth.params, &latents, &priors, KernelKind::Bounded);
            let mut inflated = truth.params;
            inflated.alpha_e *= 1.5;
            let lp_bad = log_posterior(&blocks, &inflated, &latents, &priors, KernelKind::Bounded);
            if lp_true > lp_bad {
                wins += 1;
            }
        }
        assert!(wins >= 9, "true parameters won only {wins}/10 likelihood comparisons");
    }

    #[test]
    fn split_rhat_detects_disagreeing_chains() {
        let close: Vec<Vec<f64>> = (0..4)
            .map(|c| (0..100).map(|i| ((i * 37 + c * 11) % 100) as f64 / 100.0).collect())
            .collect();
        assert!(split_rhat(&close) < 1.05);
        let mut far = close.clone();
        for v in &mut far[0] {
            *v += 50.0;
        }
        assert!(split_rhat(&far) > 2.0);
    }

    #[test]
    fn split_rhat_handles_constant_chains() {
        let constant = vec![vec![1.0; 10], vec![1.0; 10]];
        assert_eq!(split_rhat(&constant), 1.0);
        let short = vec![vec![1.0; 3]];
        assert!(split_rhat(&short).is_nan());
    }
}
