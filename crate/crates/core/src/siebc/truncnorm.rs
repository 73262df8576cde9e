//! Normal distribution truncated to [-1, 1]: sampling and log-density.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::stats::{log_normal_mass, normal_logpdf_std};

/// Below this scale the draw degenerates to clamping the mean.
pub const DEGENERATE_SIGMA: f64 = 1e-9;

/// Samples from Normal(mu, sigma) conditioned on [-1, 1].
pub fn truncated_normal_sample(mu: f64, sigma: f64, rng: &mut impl Rng) -> f64 {
    if sigma < DEGENERATE_SIGMA {
        return mu.clamp(-1.0, 1.0);
    }
    let a = (-1.0 - mu) / sigma;
    let b = (1.0 - mu) / sigma;
    let z = sample_std_interval(a, b, rng);
    (mu + sigma * z).clamp(-1.0, 1.0)
}

/// Standard normal conditioned on [a, b].
fn sample_std_interval(a: f64, b: f64, rng: &mut impl Rng) -> f64 {
    debug_assert!(a < b);
    if b < 0.0 {
        // Mirror so the interval sits on the right.
        return -sample_std_interval(-b, -a, rng);
    }
    if a <= 0.0 {
        if b - a >= 1.0 {
            // The interval straddles the mode with decent mass: plain rejection.
            loop {
                let z: f64 = StandardNormal.sample(rng);
                if z >= a && z <= b {
                    return z;
                }
            }
        }
        // Narrow interval around the mode: uniform proposal, density accept.
        loop {
            let z = rng.random_range(a..b);
            if rng.random::<f64>() <= (-0.5 * z * z).exp() {
                return z;
            }
        }
    }
    // One-sided tail at a > 0: shifted-exponential proposal (Robert 1995).
    let lambda = 0.5 * (a + (a * a + 4.0).sqrt());
    loop {
        let z = a - (1.0 - rng.random::<f64>()).ln() / lambda;
        let accept = (-0.5 * (z - lambda) * (z - lambda)).exp();
        if z <= b && rng.random::<f64>() <= accept {
            return z;
        }
    }
}

/// Log-density of the [-1, 1]-truncated normal, including the truncation
/// normalization (the mean depends on model parameters, so the constant
/// cannot be dropped).
pub fn truncated_normal_logpdf(x: f64, mu: f64, sigma: f64) -> f64 {
    if !(-1.0..=1.0).contains(&x) {
        return f64::NEG_INFINITY;
    }
    let a = (-1.0 - mu) / sigma;
    let b = (1.0 - mu) / sigma;
    normal_logpdf_std((x - mu) / sigma) - sigma.ln() - log_normal_mass(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn draws(mu: f64, sigma: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (0..n).map(|_| truncated_normal_sample(mu, sigma, &mut rng)).collect()
    }

    #[test]
    fn samples_stay_in_range() {
        for (mu, sigma) in [(0.0, 0.5), (0.95, 0.1), (-3.0, 0.2), (2.5, 1.5), (0.0, 4.0)] {
            for x in draws(mu, sigma, 2_000, 42) {
                assert!((-1.0..=1.0).contains(&x), "mu={mu} sigma={sigma} x={x}");
            }
        }
    }

    #[test]
    fn symmetric_case_has_zero_mean() {
        let xs = draws(0.0, 0.5, 100_000, 7);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        // sd of the truncated variable is below sigma; 4 sigma_mean band.
        assert!(mean.abs() < 4.0 * 0.5 / (xs.len() as f64).sqrt());
    }

    #[test]
    fn sample_mean_matches_analytic_truncated_mean() {
        // Oracle: mu + sigma (phi(a) - phi(b)) / (Phi(b) - Phi(a)), computed
        // here from scratch. For mu = 1, sigma = 1: 0.2772102477547692.
        let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let cdf = |z: f64| 0.5 * libm::erfc(-z / std::f64::consts::SQRT_2);
        let (mu, sigma) = (1.0, 1.0);
        let (a, b) = ((-1.0 - mu) / sigma, (1.0 - mu) / sigma);
        let analytic = mu + sigma * (phi(a) - phi(b)) / (cdf(b) - cdf(a));
        assert!((analytic - 0.277_210_247_754_769_2).abs() < 1e-15);

        let xs = draws(mu, sigma, 200_000, 11);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - analytic).abs() < 4.0 * 0.6 / (xs.len() as f64).sqrt(), "mean={mean}");
    }

    #[test]
    fn degenerate_sigma_clamps_the_mean() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        assert_eq!(truncated_normal_sample(3.0, 1e-12, &mut rng), 1.0);
        assert_eq!(truncated_normal_sample(-3.0, 1e-12, &mut rng), -1.0);
        assert_eq!(truncated_normal_sample(0.25, 1e-12, &mut rng), 0.25);
    }

    #[test]
    fn far_tail_sampling_works() {
        // mu far outside the interval: all mass near the boundary.
        let xs = draws(-4.0, 0.3, 5_000, 13);
        assert!(xs.iter().all(|&x| (-1.0..=1.0).contains(&x)));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean < -0.95, "tail mass should hug -1, mean={mean}");
    }

    #[test]
    fn logpdf_integrates_to_one() {
        // Trapezoid over [-1, 1] for a few parameter choices.
        for (mu, sigma) in [(0.0, 0.5), (0.8, 0.2), (-2.0, 0.7), (1.5, 2.0)] {
            let n = 20_000;
            let h = 2.0 / n as f64;
            let mut total = 0.0;
            for k in 0..=n {
                let x = -1.0 + k as f64 * h;
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                total += w * truncated_normal_logpdf(x, mu, sigma).exp();
            }
            total *= h;
            assert!((total - 1.0).abs() < 1e-6, "mu={mu} sigma={sigma} total={total}");
        }
    }

    #[test]
    fn logpdf_is_minus_infinity_outside_support() {
        assert_eq!(truncated_normal_logpdf(1.01, 0.0, 0.5), f64::NEG_INFINITY);
        assert_eq!(truncated_normal_logpdf(-1.01, 0.0, 0.5), f64::NEG_INFINITY);
    }

    #[test]
    fn histogram_tracks_density_shape() {
        // Compare sampled bin frequencies to the density for an asymmetric case.
        let (mu, sigma) = (0.6, 0.4);
        let xs = draws(mu, sigma, 400_000, 29);
        let bins = 20;
        let mut counts = vec![0usize; bins];
        for &x in &xs {
            let b = (((x + 1.0) / 0.1).floor() as usize).min(bins - 1);
            counts[b] += 1;
        }
        for (b, &c) in counts.iter().enumerate() {
            let mid = -1.0 + (b as f64 + 0.5) * 0.1;
            let expected = truncated_normal_logpdf(mid, mu, sigma).exp() * 0.1;
            let got = c as f64 / xs.len() as f64;
            // Midpoint rule is only approximate; allow a few percent.
            assert!(
                (got - expected).abs() < 0.05 * expected.max(2e-3) + 6.0 * (expected / xs.len() as f64).sqrt(),
                "bin {b}: got {got}, expected {expected}"
            );
        }
    }
}
