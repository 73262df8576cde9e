//! Exact null model for the position of a user's first initiated discussion.
//!
//! The null keeps a user's counts of initiations and participations but
//! shuffles their order uniformly. Out of the `C(n_I + n_P, n_I)` orderings,
//! those whose first initiation sits at position `i` start with `i - 1`
//! participations followed by an initiation, leaving `C(n_I + n_P - i,
//! n_I - 1)` arrangements of the tail, so
//!
//! ```text
//! P(i) = C(n_I + n_P - i, n_I - 1) / C(n_I + n_P, n_I),   i = 1 .. n_P + 1.
//! ```
//!
//! Probabilities are computed with exact rational arithmetic and converted to
//! floating point once per entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::corpus::DiscussionSequence;
use crate::{CoreError, Result};

/// Null distribution of the first-initiation position for one `(n_I, n_P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstInitiationPmf {
    pub n_initiations: usize,
    pub n_participations: usize,
    /// `pmf[i - 1]` is the probability that the first initiation is the
    /// `i`-th discussion; the support ends at `n_P + 1`.
    pub pmf: Vec<f64>,
}

impl FirstInitiationPmf {
    /// Null probability that the first initiation occurs at position <= i.
    pub fn cdf(&self, i: usize) -> f64 {
        self.pmf.iter().take(i).sum()
    }
}

/// Exact PMF of the first-initiation position under the random-order null.
pub fn first_initiation_pmf(n_initiations: usize, n_participations: usize) -> Result<FirstInitiationPmf> {
    if n_initiations == 0 {
        return Err(CoreError::invalid_argument(
            "first-initiation PMF undefined without initiations",
        ));
    }
    let n = (n_initiations + n_participations) as i64;
    let k = n_initiations as i64;
    // P(1) = n_I / (n_I + n_P); successive ratio P(i+1)/P(i) = (n-i-k+1)/(n-i).
    let mut current = BigRational::new(BigInt::from(k), BigInt::from(n));
    let mut pmf = Vec::with_capacity(n_participations + 1);
    for i in 1..=(n_participations as i64 + 1) {
        pmf.push(current.to_f64().expect("probability fits in f64"));
        if i <= n_participations as i64 {
            current *= BigRational::new(BigInt::from(n - i - k + 1), BigInt::from(n - i));
        }
    }
    debug_assert!({
        let total: f64 = pmf.iter().sum();
        (total - 1.0).abs() < 1e-9
    });
    Ok(FirstInitiationPmf { n_initiations, n_participations, pmf })
}

/// Exact binomial coefficient, used by the direct formula route.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Observed and null-expected proportions of users whose first initiation
/// falls within the first `i` discussions.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoCurves {
    /// `observed[i - 1]` for i = 1..=max_i.
    pub observed: Vec<f64>,
    pub expected: Vec<f64>,
    pub n_users: usize,
}

/// Computes both rho curves over a set of per-user sequences.
///
/// Users without initiations never count; users with fewer than `i`
/// discussions contribute their final status. The expected curve averages the
/// null CDF at `min(i, n_I + n_P)` over users.
pub fn rho_curves(sequences: &[DiscussionSequence], max_i: usize) -> Result<RhoCurves> {
    if sequences.is_empty() {
        return Err(CoreError::empty_input("no discussion sequences"));
    }
    if max_i == 0 {
        return Err(CoreError::invalid_argument("max_i must be at least 1"));
    }
    let n_users = sequences.len();

    let mut observed = vec![0.0; max_i];
    for seq in sequences {
        if let Some(pos) = seq.first_initiation_position() {
            for i in pos..=max_i {
                observed[i - 1] += 1.0;
            }
        }
    }
    for o in &mut observed {
        *o /= n_users as f64;
    }

    let mut pmf_cache: std::collections::HashMap<(usize, usize), FirstInitiationPmf> =
        std::collections::HashMap::new();
    let mut expected = vec![0.0; max_i];
    for seq in sequences {
        if seq.n_initiations == 0 {
            continue;
        }
        let key = (seq.n_initiations, seq.n_participations);
        if !pmf_cache.contains_key(&key) {
            pmf_cache.insert(key, first_initiation_pmf(key.0, key.1)?);
        }
        let pmf = &pmf_cache[&key];
        let len = seq.labels.len();
        for i in 1..=max_i {
            expected[i - 1] += pmf.cdf(i.min(len));
        }
    }
    for e in &mut expected {
        *e /= n_users as f64;
    }

    Ok(RhoCurves { observed, expected, n_users })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DiscussionSequence, SeqLabel, Topic};

    fn sequence(labels: &[SeqLabel]) -> DiscussionSequence {
        let n_i = labels.iter().filter(|&&l| l == SeqLabel::Initiation).count();
        DiscussionSequence {
            user: "u".into(),
            topic: Topic::Mask,
            labels: labels.to_vec(),
            n_initiations: n_i,
            n_participations: labels.len() - n_i,
        }
    }

    #[test]
    fn all_initiations_concentrate_at_one() {
        for k in 1..6 {
            let pmf = first_initiation_pmf(k, 0).unwrap();
            assert_eq!(pmf.pmf.len(), 1);
            assert!((pmf.pmf[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn small_cases_match_enumeration_by_hand() {
        let pmf = first_initiation_pmf(1, 1).unwrap();
        assert!((pmf.pmf[0] - 0.5).abs() < 1e-15);
        assert!((pmf.pmf[1] - 0.5).abs() < 1e-15);

        let pmf = first_initiation_pmf(2, 1).unwrap();
        assert!((pmf.pmf[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((pmf.pmf[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_agrees_with_direct_binomial_formula() {
        for n_i in 1..=8usize {
            for n_p in 0..=8usize {
                let pmf = first_initiation_pmf(n_i, n_p).unwrap();
                let denom = binomial(n_i + n_p, n_i);
                for (idx, &p) in pmf.pmf.iter().enumerate() {
                    let i = idx + 1;
                    let num = binomial(n_i + n_p - i, n_i - 1);
                    let exact = BigRational::new(num, denom.clone()).to_f64().unwrap();
                    assert!((p - exact).abs() < 1e-15, "n_i={n_i} n_p={n_p} i={i}");
                }
            }
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        for n_i in 1..=12 {
            for n_p in 0..=12 {
                let pmf = first_initiation_pmf(n_i, n_p).unwrap();
                let total: f64 = pmf.pmf.iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "n_i={n_i} n_p={n_p}");
            }
        }
    }

    #[test]
    fn zero_initiations_is_rejected() {
        assert!(first_initiation_pmf(0, 3).is_err());
    }

    #[test]
    fn rho_all_zero_when_no_user_initiates() {
        let seqs = vec![sequence(&[SeqLabel::Participation; 3]); 4];
        let rho = rho_curves(&seqs, 5).unwrap();
        assert!(rho.observed.iter().all(|&x| x == 0.0));
        assert!(rho.expected.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rho_expected_single_user_case() {
        // One user with n_I = 1, n_P = 1: expected rho(1) = 1/2, rho(2) = 1.
        let seqs = vec![sequence(&[SeqLabel::Participation, SeqLabel::Initiation])];
        let rho = rho_curves(&seqs, 3).unwrap();
        assert!((rho.expected[0] - 0.5).abs() < 1e-15);
        assert!((rho.expected[1] - 1.0).abs() < 1e-15);
        // Short sequences contribute their final status past their length.
        assert!((rho.expected[2] - 1.0).abs() < 1e-15);
        assert_eq!(rho.observed, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn rho_curves_converge_to_initiator_fraction() {
        let seqs = vec![
            sequence(&[SeqLabel::Initiation]),
            sequence(&[SeqLabel::Participation, SeqLabel::Initiation]),
            sequence(&[SeqLabel::Participation; 4]),
            sequence(&[SeqLabel::Participation, SeqLabel::Participation, SeqLabel::Initiation]),
        ];
        let rho = rho_curves(&seqs, 20).unwrap();
        let fraction = 3.0 / 4.0;
        assert!((rho.observed[19] - fraction).abs() < 1e-12);
        assert!((rho.expected[19] - fraction).abs() < 1e-12);
        // Both curves are non-decreasing and bounded by the fraction.
        for i in 1..20 {
            assert!(rho.observed[i] >= rho.observed[i - 1]);
            assert!(rho.expected[i] >= rho.expected[i - 1]);
            assert!(rho.observed[i] <= fraction + 1e-12);
            assert!(rho.expected[i] <= fraction + 1e-12);
        }
    }
}
