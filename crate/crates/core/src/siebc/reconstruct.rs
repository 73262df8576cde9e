//! Reconstruction of the population's internal sentiment over calendar time.

use std::collections::HashMap;

use chrono::NaiveDate;

use crate::corpus::UserTimeline;
use crate::stats::{median_sorted, quantile_type7_sorted};
use crate::temporal::utc_date;
use crate::{CoreError, Result};

use super::blocks::interaction_blocks;
use super::fit::PosteriorDraws;

/// Cross-user spread of reconstructed internal sentiment on one day.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyInternal {
    pub date: NaiveDate,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    /// Users contributing a value that day.
    pub n_users: usize,
}

/// Posterior-median internal trajectory per user, carried forward onto a
/// daily grid; per day the median and interquartile range across users.
///
/// A user contributes from the day of their first comment onward (the latest
/// posterior-median state at or before that day).
pub fn reconstruct_internal(
    draws: &PosteriorDraws,
    timelines: &[UserTimeline],
) -> Result<Vec<DailyInternal>> {
    if draws.users.is_empty() {
        return Err(CoreError::empty_input("no posterior draws"));
    }
    let by_user: HashMap<&str, &UserTimeline> =
        timelines.iter().map(|tl| (tl.user.as_str(), tl)).collect();

    // Per user: (date of comment, posterior-median internal state there).
    let mut stepped: Vec<Vec<(NaiveDate, f64)>> = Vec::with_capacity(draws.users.len());
    for user in &draws.users {
        let tl = by_user.get(user.user.as_str()).ok_or_else(|| {
            CoreError::invalid_argument(format!("no timeline for fitted user `{}`", user.user))
        })?;
        let blocks = interaction_blocks(tl);
        if blocks.len() + 1 != user.latents.first().map_or(0, Vec::len) {
            return Err(CoreError::invalid_argument(format!(
                "latent trajectory of `{}` does not match its timeline",
                user.user
            )));
        }
        let mut points = Vec::with_capacity(blocks.len());
        for (k, block) in blocks.iter().enumerate() {
            // latents[.][0] is the initial state; the state at comment k is k+1.
            let mut values: Vec<f64> = user.latents.iter().map(|lat| lat[k + 1]).collect();
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite latent draws"));
            points.push((utc_date(block.t), median_sorted(&values)));
        }
        stepped.push(points);
    }

    let start = stepped.iter().filter_map(|p| p.first()).map(|&(d, _)| d).min();
    let end = stepped.iter().filter_map(|p| p.last()).map(|&(d, _)| d).max();
    let (Some(start), Some(end)) = (start, end) else {
        return Err(CoreError::empty_input("no own comments to reconstruct from"));
    };

    let mut out = Vec::new();
    let mut cursors = vec![0usize; stepped.len()];
    let mut current: Vec<Option<f64>> = vec![None; stepped.len()];
    let mut day = start;
    while day <= end {
        for (ui, points) in stepped.iter().enumerate() {
            while cursors[ui] < points.len() && points[cursors[ui]].0 <= day {
                current[ui] = Some(points[cursors[ui]].1);
                cursors[ui] += 1;
            }
        }
        let mut values: Vec<f64> = current.iter().flatten().copied().collect();
        if !values.is_empty() {
            values.sort_by(|a, b| a.partial_cmp(b).expect("finite medians"));
            out.push(DailyInternal {
                date: day,
                median: median_sorted(&values),
                q1: quantile_type7_sorted(&values, 0.25),
                q3: quantile_type7_sorted(&values, 0.75),
                n_users: values.len(),
            });
        }
        day = day + chrono::Days::new(1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{TimelineEvent, Topic};
    use crate::siebc::fit::{Priors, SamplerConfig, UserDraws};
    use crate::siebc::KernelKind;

    const DAY: i64 = 86_400;

    fn timeline(user: &str, times: &[i64]) -> UserTimeline {
        UserTimeline {
            user: user.into(),
            topic: Topic::Mask,
            events: times
                .iter()
                .map(|&t| TimelineEvent::OwnComment {
                    t,
                    parent_sentiment: 0.0,
                    expressed_sentiment: 0.0,
                })
                .collect(),
        }
    }

    fn user_draws(user: &str, trajectories: Vec<Vec<f64>>) -> UserDraws {
        UserDraws {
            user: user.into(),
            n_events: trajectories[0].len() - 1,
            chains: 1,
            draws_per_chain: trajectories.len(),
            params: vec![[0.5, 0.5, 1.0, 0.1, 0.1]; trajectories.len()],
            latents: trajectories,
            rhat: [1.0; 5],
            acceptance: 0.4,
        }
    }

    fn wrap(users: Vec<UserDraws>) -> PosteriorDraws {
        PosteriorDraws {
            users,
            config: SamplerConfig { kernel: KernelKind::Bounded, ..Default::default() },
            priors: Priors::default(),
            seed: 0,
            warnings: Vec::new(),
        }
    }

    #[test]
    fn constant_single_user_is_flat_with_zero_iqr() {
        let tl = vec![timeline("u", &[0, DAY, 3 * DAY])];
        let draws = wrap(vec![user_draws("u", vec![vec![0.1, 0.4, 0.4, 0.4]; 5])]);
        let daily = reconstruct_internal(&draws, &tl).unwrap();
        assert_eq!(daily.len(), 4);
        for d in &daily {
            assert!((d.median - 0.4).abs() < 1e-12);
            assert!((d.q3 - d.q1).abs() < 1e-12);
            assert_eq!(d.n_users, 1);
        }
    }

    #[test]
    fn symmetric_users_have_zero_median() {
        let tl = vec![timeline("a", &[0, DAY]), timeline("b", &[0, DAY])];
        let draws = wrap(vec![
            user_draws("a", vec![vec![0.0, 0.6, 0.6]; 3]),
            user_draws("b", vec![vec![0.0, -0.6, -0.6]; 3]),
        ]);
        let daily = reconstruct_internal(&draws, &tl).unwrap();
        for d in &daily {
            assert!(d.median.abs() < 1e-12);
            assert_eq!(d.n_users, 2);
        }
    }

    #[test]
    fn carry_forward_fills_gap_days() {
        let tl = vec![timeline("u", &[0, 5 * DAY])];
        let draws = wrap(vec![user_draws("u", vec![vec![0.0, -0.2, 0.8]; 3])]);
        let daily = reconstruct_internal(&draws, &tl).unwrap();
        assert_eq!(daily.len(), 6);
        for d in &daily[..5] {
            assert!((d.median + 0.2).abs() < 1e-12);
        }
        assert!((daily[5].median - 0.8).abs() < 1e-12);
    }

    #[test]
    fn late_starters_join_the_panel_late() {
        let tl = vec![timeline("a", &[0]), timeline("b", &[2 * DAY])];
        let draws = wrap(vec![
            user_draws("a", vec![vec![0.0, 0.5]; 3]),
            user_draws("b", vec![vec![0.0, -0.5]; 3]),
        ]);
        let daily = reconstruct_internal(&draws, &tl).unwrap();
        assert_eq!(daily[0].n_users, 1);
        assert_eq!(daily[1].n_users, 1);
        assert_eq!(daily[2].n_users, 2);
    }
}
