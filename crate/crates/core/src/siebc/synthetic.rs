//! Synthetic interaction corpora with known ground truth, used to validate
//! the calibration end to end.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{TimelineEvent, Topic, UserTimeline};
use crate::rng::StreamKey;
use crate::{CoreError, Result};

use super::kernel::KernelKind;
use super::simulate::{step_user, UserState};
use super::SiebcParams;

/// Closed range a true parameter is drawn from (degenerate for a fixed value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
}

impl ParamRange {
    pub fn fixed(v: f64) -> Self {
        ParamRange { lo: v, hi: v }
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.hi > self.lo {
            rng.random_range(self.lo..self.hi)
        } else {
            self.lo
        }
    }
}

/// How initial internal states are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialStateSpec {
    /// Uniform on [-1, 1].
    Uniform,
    /// Two equal camps at +magnitude and -magnitude.
    Camps { magnitude: f64 },
}

/// How a commenting user picks the post it replies to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PartnerChoice {
    /// Any other user, uniformly.
    Uniform,
    /// With probability `p_within`, a user from the same initial camp.
    Assortative { p_within: f64 },
}

/// Configuration of the synthetic generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_users: usize,
    pub comments_per_user: usize,
    pub alpha_e: ParamRange,
    pub alpha_u: ParamRange,
    pub epsilon: ParamRange,
    pub sigma_e: ParamRange,
    pub sigma_u: ParamRange,
    pub gamma: f64,
    pub initial_state: InitialStateSpec,
    pub partner: PartnerChoice,
    pub kernel: KernelKind,
    pub topic: Topic,
}

impl SyntheticSpec {
    /// The recovery benchmark: identical true parameters for every user,
    /// uniform initial states and partners.
    pub fn recovery_benchmark(n_users: usize, comments_per_user: usize) -> Self {
        SyntheticSpec {
            n_users,
            comments_per_user,
            alpha_e: ParamRange::fixed(0.8),
            alpha_u: ParamRange::fixed(0.4),
            epsilon: ParamRange::fixed(0.6),
            sigma_e: ParamRange::fixed(0.1),
            sigma_u: ParamRange::fixed(0.1),
            gamma: super::DEFAULT_GAMMA,
            initial_state: InitialStateSpec::Uniform,
            partner: PartnerChoice::Uniform,
            kernel: KernelKind::Bounded,
            topic: Topic::Mask,
        }
    }

    /// Two entrenched camps talking mostly among themselves, with a narrow
    /// confidence threshold: bounded-confidence dynamics keep the camps
    /// apart where a linear kernel would average them together. The small
    /// internal noise keeps each camp's consensus point from wandering into
    /// the other's confidence range over the run.
    pub fn polarized_benchmark(n_users: usize, comments_per_user: usize) -> Self {
        SyntheticSpec {
            n_users,
            comments_per_user,
            alpha_e: ParamRange::fixed(0.6),
            alpha_u: ParamRange::fixed(0.3),
            epsilon: ParamRange::fixed(0.4),
            sigma_e: ParamRange::fixed(0.05),
            sigma_u: ParamRange::fixed(0.04),
            gamma: super::DEFAULT_GAMMA,
            initial_state: InitialStateSpec::Camps { magnitude: 0.7 },
            partner: PartnerChoice::Assortative { p_within: 0.85 },
            kernel: KernelKind::Bounded,
            topic: Topic::Mask,
        }
    }
}

/// Hidden truth for one synthetic user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserTruth {
    pub user: String,
    pub params: SiebcParams,
    pub u0: f64,
    /// Internal state at each own comment.
    pub trajectory: Vec<f64>,
}

/// Timelines plus the ground truth that generated them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticData {
    pub timelines: Vec<UserTimeline>,
    pub truth: Vec<UserTruth>,
}

/// Simulates a shared arena: users comment in round-robin order, each time
/// replying to another user's latest post and notifying that user of the
/// reply. Deterministic for a fixed seed.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<SyntheticData> {
    if spec.n_users < 2 {
        return Err(CoreError::invalid_argument("synthetic corpus needs at least 2 users"));
    }
    if spec.comments_per_user == 0 {
        return Err(CoreError::invalid_argument("comments_per_user must be at least 1"));
    }
    let mut rng = StreamKey::new(seed, "synthetic").rng();

    let n = spec.n_users;
    let camp = |i: usize| i % 2; // even users in camp 0, odd in camp 1
    let mut params = Vec::with_capacity(n);
    let mut u0 = Vec::with_capacity(n);
    for i in 0..n {
        params.push(SiebcParams {
            alpha_e: spec.alpha_e.sample(&mut rng),
            alpha_u: spec.alpha_u.sample(&mut rng),
            epsilon: spec.epsilon.sample(&mut rng),
            sigma_e: spec.sigma_e.sample(&mut rng),
            sigma_u: spec.sigma_u.sample(&mut rng),
            gamma: spec.gamma,
        });
        params[i].validate()?;
        u0.push(match spec.initial_state {
            InitialStateSpec::Uniform => rng.random_range(-1.0..1.0),
            InitialStateSpec::Camps { magnitude } => {
                if camp(i) == 0 {
                    magnitude
                } else {
                    -magnitude
                }
            }
        });
    }

    let mut states: Vec<UserState> =
        u0.iter().map(|&u| UserState { internal: u, expressed: u }).collect();
    let mut pending: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut events: Vec<Vec<TimelineEvent>> = vec![Vec::new(); n];
    let mut trajectories: Vec<Vec<f64>> = vec![Vec::new(); n];

    let mut t: i64 = 0;
    for _round in 0..spec.comments_per_user {
        for i in 0..n {
            t += 1;
            let partner = pick_partner(i, n, spec.partner, camp, &mut rng);
            let parent_sentiment = states[partner].expressed;
            let mut interactions = std::mem::take(&mut pending[i]);
            interactions.push(parent_sentiment);
            let next = step_user(states[i], parent_sentiment, &interactions, &params[i], spec.kernel, &mut rng);
            states[i] = next;
            trajectories[i].push(next.internal);
            events[i].push(TimelineEvent::OwnComment {
                t,
                parent_sentiment,
                expressed_sentiment: next.expressed,
            });
            // The partner authored the parent post, so it receives this reply.
            pending[partner].push(next.expressed);
            events[partner].push(TimelineEvent::ReplyReceived { t, sentiment: next.expressed });
        }
    }

    let user_name = |i: usize| format!("synthetic_{i:04}");
    let timelines = events
        .into_iter()
        .enumerate()
        .map(|(i, evs)| UserTimeline { user: user_name(i), topic: spec.topic, events: evs })
        .collect();
    let truth = (0..n)
        .map(|i| UserTruth {
            user: user_name(i),
            params: params[i],
            u0: u0[i],
            trajectory: trajectories[i].clone(),
        })
        .collect();
    Ok(SyntheticData { timelines, truth })
}

fn pick_partner(
    me: usize,
    n: usize,
    choice: PartnerChoice,
    camp: impl Fn(usize) -> usize,
    rng: &mut impl Rng,
) -> usize {
    match choice {
        PartnerChoice::Uniform => {
            let j = rng.random_range(0..n - 1);
            if j >= me {
                j + 1
            } else {
                j
            }
        }
        PartnerChoice::Assortative { p_within } => {
            let same = rng.random::<f64>() < p_within;
            // Rejection over the uniform pick keeps the draw simple; camps
            // always contain at least one other user for n >= 3, and for the
            // two-user corpus the only partner is the other camp.
            for _ in 0..1024 {
                let j = rng.random_range(0..n - 1);
                let j = if j >= me { j + 1 } else { j };
                if n <= 2 || (camp(j) == camp(me)) == same {
                    return j;
                }
            }
            // A camp with no other member: fall back to any other user.
            let j = rng.random_range(0..n - 1);
            if j >= me {
                j + 1
            } else {
                j
            }
        }
    }
}
