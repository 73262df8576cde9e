//! First Wasserstein distance between uniformly binned distributions.

use crate::homophily::bins_per_axis;
use crate::{CoreError, Result};

/// A normalized distribution over [-1, 1] in uniform bins.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedDistribution {
    pub bin_width: f64,
    pub masses: Vec<f64>,
}

impl BinnedDistribution {
    /// Bins raw values (all in [-1, 1]) and normalizes.
    pub fn from_values(values: &[f64], bin_width: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(CoreError::empty_input("no values to bin"));
        }
        let bins = bins_per_axis(bin_width);
        let mut masses = vec![0.0; bins];
        let weight = 1.0 / values.len() as f64;
        for &v in values {
            if !(-1.0..=1.0).contains(&v) {
                return Err(CoreError::invalid_argument(format!("value {v} outside [-1, 1]")));
            }
            let b = (((v + 1.0) / bin_width).floor() as isize).clamp(0, bins as isize - 1) as usize;
            masses[b] += weight;
        }
        Ok(BinnedDistribution { bin_width, masses })
    }

    /// Wraps an explicit mass vector, normalizing it.
    pub fn from_masses(masses: Vec<f64>, bin_width: f64) -> Result<Self> {
        let bins = bins_per_axis(bin_width);
        if masses.len() != bins {
            return Err(CoreError::BinningMismatch(format!(
                "{} masses for {bins} bins",
                masses.len()
            )));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 || masses.iter().any(|&m| m < 0.0) {
            return Err(CoreError::invalid_argument("masses must be non-negative with positive total"));
        }
        Ok(BinnedDistribution { bin_width, masses: masses.into_iter().map(|m| m / total).collect() })
    }
}

/// `W1 = w * sum_i |sum_{j<=i} (O_j - P_j)|` for distributions on the same
/// binning.
pub fn wasserstein_1(observed: &BinnedDistribution, predicted: &BinnedDistribution) -> Result<f64> {
    if observed.masses.len() != predicted.masses.len()
        || observed.bin_width != predicted.bin_width
    {
        return Err(CoreError::BinningMismatch(format!(
            "{} bins of width {} vs {} bins of width {}",
            observed.masses.len(),
            observed.bin_width,
            predicted.masses.len(),
            predicted.bin_width
        )));
    }
    let mut cum = 0.0;
    let mut total = 0.0;
    for (o, p) in observed.masses.iter().zip(&predicted.masses) {
        cum += o - p;
        total += cum.abs();
    }
    Ok(observed.bin_width * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_mass(bin: usize, bins: usize, w: f64) -> BinnedDistribution {
        let mut masses = vec![0.0; bins];
        masses[bin] = 1.0;
        BinnedDistribution { bin_width: w, masses }
    }

    #[test]
    fn identical_distributions_have_zero_distance() {
        let d = BinnedDistribution::from_values(&[0.1, -0.4, 0.9], 0.05).unwrap();
        assert_eq!(wasserstein_1(&d, &d).unwrap(), 0.0);
    }

    #[test]
    fn adjacent_point_masses_cost_one_bin_width() {
        let a = point_mass(10, 40, 0.05);
        let b = point_mass(11, 40, 0.05);
        assert!((wasserstein_1(&a, &b).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn separated_point_masses_cost_k_bin_widths() {
        for k in [2usize, 7, 25] {
            let a = point_mass(5, 40, 0.05);
            let b = point_mass(5 + k, 40, 0.05);
            assert!((wasserstein_1(&a, &b).unwrap() - k as f64 * 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn binning_mismatch_is_rejected() {
        let a = point_mass(1, 40, 0.05);
        let b = point_mass(1, 20, 0.1);
        assert!(wasserstein_1(&a, &b).is_err());
    }

    #[test]
    fn from_masses_normalizes() {
        let d = BinnedDistribution::from_masses(vec![1.0; 40], 0.05).unwrap();
        assert!((d.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(BinnedDistribution::from_masses(vec![0.0; 40], 0.05).is_err());
    }
}
