//! Population summary of expressed-versus-internal update strengths.

use crate::stats::mann_whitney_greater;
use crate::{CoreError, Result};

use super::fit::PosteriorDraws;

/// Fraction of users whose posterior `alpha_e` draws stochastically dominate
/// their `alpha_u` draws per a one-sided Mann-Whitney U test at `p_threshold`.
pub fn kappa(draws: &PosteriorDraws, p_threshold: f64) -> Result<f64> {
    if draws.users.is_empty() {
        return Err(CoreError::empty_input("no users in posterior draws"));
    }
    if !(0.0..1.0).contains(&p_threshold) || p_threshold <= 0.0 {
        return Err(CoreError::invalid_argument("p_threshold must lie in (0, 1)"));
    }
    let mut dominated = 0usize;
    for user in &draws.users {
        if user.total_draws() < 2 {
            return Err(CoreError::invalid_argument(format!(
                "user `{}` has fewer than 2 draws",
                user.user
            )));
        }
        let alpha_e = user.param_column(0);
        let alpha_u = user.param_column(1);
        let test = mann_whitney_greater(&alpha_e, &alpha_u)?;
        if test.p_greater < p_threshold {
            dominated += 1;
        }
    }
    Ok(dominated as f64 / draws.users.len() as f64)
}
