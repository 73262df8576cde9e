//! Forward simulation of the SIEBC dynamics.

use rand::Rng;

use crate::corpus::{TimelineEvent, UserTimeline};

use super::blocks::interaction_blocks;
use super::kernel::KernelKind;
use super::truncnorm::truncated_normal_sample;
use super::SiebcParams;

/// Coupled sentiment states of one user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserState {
    /// Latent internal sentiment.
    pub internal: f64,
    /// Sentiment of the latest comment.
    pub expressed: f64,
}

/// Advances a user through one own comment.
///
/// The expressed value is drawn around the kernel update of the previous
/// internal state toward the parent; the internal state folds one kernel
/// update per interaction (replies then parent, chronological), then draws.
pub fn step_user(
    state: UserState,
    parent_sentiment: f64,
    interactions: &[f64],
    params: &SiebcParams,
    kernel: KernelKind,
    rng: &mut impl Rng,
) -> UserState {
    let mu_e = kernel.apply(state.internal, parent_sentiment, params.alpha_e, params.epsilon, params.gamma);
    let expressed = truncated_normal_sample(mu_e, params.sigma_e, rng);

    let mut mu_u = state.internal;
    for &s in interactions {
        mu_u = kernel.apply(mu_u, s, params.alpha_u, params.epsilon, params.gamma);
    }
    let internal = truncated_normal_sample(mu_u, params.sigma_u, rng);

    UserState { internal, expressed }
}

/// Fills the expressed sentiments of a timeline skeleton by simulating the
/// dynamics forward from `u0`. Parent and reply sentiments are taken as
/// given; existing expressed values are ignored and overwritten.
pub fn simulate(
    skeleton: &UserTimeline,
    params: &SiebcParams,
    kernel: KernelKind,
    u0: f64,
    rng: &mut impl Rng,
) -> UserTimeline {
    let (timeline, _) = simulate_with_trajectory(skeleton, params, kernel, u0, rng);
    timeline
}

/// As [`simulate`], additionally returning the internal state at each own
/// comment.
pub fn simulate_with_trajectory(
    skeleton: &UserTimeline,
    params: &SiebcParams,
    kernel: KernelKind,
    u0: f64,
    rng: &mut impl Rng,
) -> (UserTimeline, Vec<f64>) {
    let blocks = interaction_blocks(skeleton);
    let mut state = UserState { internal: u0.clamp(-1.0, 1.0), expressed: u0.clamp(-1.0, 1.0) };
    let mut trajectory = Vec::with_capacity(blocks.len());
    let mut filled = Vec::with_capacity(blocks.len());
    for block in &blocks {
        state = step_user(state, block.parent_sentiment, &block.interactions, params, kernel, rng);
        trajectory.push(state.internal);
        filled.push(state.expressed);
    }

    let mut events = Vec::with_capacity(skeleton.events.len());
    let mut next = filled.into_iter();
    for event in &skeleton.events {
        match *event {
            TimelineEvent::OwnComment { t, parent_sentiment, .. } => {
                events.push(TimelineEvent::OwnComment {
                    t,
                    parent_sentiment,
                    expressed_sentiment: next.next().expect("one fill per own comment"),
                });
            }
            ref reply => events.push(reply.clone()),
        }
    }
    (
        UserTimeline { user: skeleton.user.clone(), topic: skeleton.topic, events },
        trajectory,
    )
}
