//! Small statistical helpers shared by the analysis modules.

use crate::{CoreError, Result};

/// Type-7 quantile (linear interpolation of order statistics) on unsorted data.
pub fn quantile_type7(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(CoreError::empty_input("quantile of empty set"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(CoreError::invalid_argument(format!("quantile level {q} outside [0,1]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in quantile input"));
    Ok(quantile_type7_sorted(&sorted, q))
}

/// Type-7 quantile on data already sorted ascending.
pub fn quantile_type7_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Median; even-sized sets take the mean of the two central order statistics.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(CoreError::empty_input("median of empty set"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in median input"));
    Ok(median_sorted(&sorted))
}

pub fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Ordinary least squares fit of `y = intercept + slope * t`.
///
/// Returns `None` when there are fewer than two points or the abscissae are
/// degenerate.
pub fn ols_line(t: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if t.len() != y.len() || t.len() < 2 {
        return None;
    }
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut stt, mut sty) = (0.0, 0.0);
    for (ti, yi) in t.iter().zip(y) {
        stt += (ti - tm) * (ti - tm);
        sty += (ti - tm) * (yi - ym);
    }
    if stt == 0.0 {
        return None;
    }
    let slope = sty / stt;
    Some((slope, ym - slope * tm))
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal log-density.
pub fn normal_logpdf_std(z: f64) -> f64 {
    -0.5 * z * z - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// log Φ(z), stable far into the left tail.
pub fn log_normal_cdf(z: f64) -> f64 {
    if z > -10.0 {
        normal_cdf(z).ln()
    } else {
        // Asymptotic expansion of Mills' ratio: Φ(z) ≈ φ(z)/(-z) · (1 - 1/z² + 3/z⁴)
        let z2 = z * z;
        normal_logpdf_std(z) - (-z).ln() + (1.0 - 1.0 / z2 + 3.0 / (z2 * z2)).ln()
    }
}

/// log(Φ(b) − Φ(a)) for a < b, stable in both tails.
pub fn log_normal_mass(a: f64, b: f64) -> f64 {
    debug_assert!(a < b);
    // Work on the side where erfc stays small: mirror when the mass sits left of zero.
    let (a, b) = if a + b > 0.0 { (-b, -a) } else { (a, b) };
    // Now b ≤ mirror point; mass = Φ(b) − Φ(a) with b "more central".
    let mass = 0.5 * (libm::erfc(-b / std::f64::consts::SQRT_2) - libm::erfc(-a / std::f64::consts::SQRT_2));
    if mass > 0.0 {
        mass.ln()
    } else {
        // Deep tail: the interval mass is dominated by the bound nearer zero.
        log_normal_cdf(b)
    }
}

/// One-sided Mann-Whitney result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// U statistic for the first sample (wins, ties counted half).
    pub u: f64,
    /// One-sided p-value for the alternative "first sample stochastically larger".
    pub p_greater: f64,
    /// True when the p-value comes from complete permutation enumeration.
    pub exact: bool,
}

/// Largest number of permutations enumerated before falling back to the
/// normal approximation.
const MW_EXACT_CAP: u128 = 200_000;

/// One-sided Mann-Whitney U test (alternative: `xs` tends larger than `ys`).
///
/// Small samples get an exact permutation p-value (all `C(m+n, m)` group
/// assignments); larger ones use the normal approximation with tie correction
/// and continuity correction.
pub fn mann_whitney_greater(xs: &[f64], ys: &[f64]) -> Result<MannWhitney> {
    if xs.is_empty() || ys.is_empty() {
        return Err(CoreError::empty_input("Mann-Whitney requires two non-empty samples"));
    }
    let u = u_statistic(xs, ys);
    let m = xs.len();
    let n = ys.len();
    if binomial_u128(m + n, m).is_some_and(|c| c <= MW_EXACT_CAP) {
        let p = exact_p_greater(xs, ys, u);
        Ok(MannWhitney { u, p_greater: p, exact: true })
    } else {
        let p = asymptotic_p_greater(xs, ys, u);
        Ok(MannWhitney { u, p_greater: p, exact: false })
    }
}

/// U for the first sample by direct pair counting; ties count one half.
fn u_statistic(xs: &[f64], ys: &[f64]) -> f64 {
    let mut u = 0.0;
    for &x in xs {
        for &y in ys {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Exact permutation p-value: P(U_perm ≥ U_obs) over all group assignments.
fn exact_p_greater(xs: &[f64], ys: &[f64], u_obs: f64) -> f64 {
    let mut pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    // Sorting the pool makes the enumeration independent of input order.
    pooled.sort_by(|a, b| a.partial_cmp(b).expect("non-finite Mann-Whitney input"));
    let m = xs.len();
    let total = pooled.len();
    let mut count: u64 = 0;
    let mut n_perm: u64 = 0;
    // Iterate all m-subsets of indices via the revolving-door style successor.
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let group1: Vec<f64> = idx.iter().map(|&i| pooled[i]).collect();
        let mut group2 = Vec::with_capacity(total - m);
        let mut mark = vec![false; total];
        for &i in &idx {
            mark[i] = true;
        }
        for (i, &v) in pooled.iter().enumerate() {
            if !mark[i] {
                group2.push(v);
            }
        }
        let u = u_statistic(&group1, &group2);
        // Tolerance absorbs the half-tie arithmetic; U values live on a 0.5 grid.
        if u >= u_obs - 1e-9 {
            count += 1;
        }
        n_perm += 1;
        // Next combination in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return count as f64 / n_perm as f64;
            }
            i -= 1;
            if idx[i] != i + total - m {
                idx[i] += 1;
                for j in i + 1..m {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Normal approximation with tie correction and continuity correction.
fn asymptotic_p_greater(xs: &[f64], ys: &[f64], u: f64) -> f64 {
    let m = xs.len() as f64;
    let n = ys.len() as f64;
    let nt = m + n;
    let mut pooled: Vec<f64> = xs.iter().chain(ys).copied().collect();
    pooled.sort_by(|a, b| a.partial_cmp(b).expect("non-finite Mann-Whitney input"));
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j] == pooled[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let mean = m * n / 2.0;
    let var = m * n / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));
    if var <= 0.0 {
        // All values tied: no evidence either way.
        return 0.5;
    }
    let z = (u - mean - 0.5) / var.sqrt();
    1.0 - normal_cdf(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_matches_hand_computed_type7() {
        // 200 values: 50 at -1 then 150 at +1; h = 199*0.275 = 54.725 lands in the +1 run.
        let mut v = vec![-1.0; 50];
        v.extend(vec![1.0; 150]);
        assert_eq!(quantile_type7(&v, 0.275).unwrap(), 1.0);
        // Interpolation inside a run boundary.
        let v = vec![1.0, 2.0, 3.0, 4.0];
        assert!((quantile_type7(&v, 0.5).unwrap() - 2.5).abs() < 1e-15);
        assert!((quantile_type7(&v, 1.0 / 3.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]).unwrap(), 2.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]).unwrap(), 2.5);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let t: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = t.iter().map(|ti| 2.0 * ti + 3.0).collect();
        let (slope, intercept) = ols_line(&t, &y).unwrap();
        assert!((slope - 2.0).abs() < 1e-9);
        assert!((intercept - 3.0).abs() < 1e-9);
    }

    #[test]
    fn ols_three_point_case() {
        let (slope, intercept) = ols_line(&[0.0, 1.0, 2.0], &[0.0, 1.0, 3.0]).unwrap();
        assert!((slope - 1.5).abs() < 1e-12);
        assert!((intercept + 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn normal_cdf_reference_points() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
        assert!((normal_cdf(-1.959963984540054) - 0.025).abs() < 1e-9);
    }

    #[test]
    fn log_normal_mass_matches_direct_in_easy_range() {
        let direct = (normal_cdf(0.7) - normal_cdf(-0.3)).ln();
        assert!((log_normal_mass(-0.3, 0.7) - direct).abs() < 1e-12);
        let direct = (normal_cdf(2.5) - normal_cdf(1.5)).ln();
        assert!((log_normal_mass(1.5, 2.5) - direct).abs() < 1e-10);
    }

    #[test]
    fn log_normal_mass_deep_tail_is_finite_and_ordered() {
        let a = log_normal_mass(-60.0, -58.0);
        let b = log_normal_mass(-50.0, -48.0);
        assert!(a.is_finite() && b.is_finite());
        assert!(a < b);
        // Symmetric on the right side.
        let c = log_normal_mass(58.0, 60.0);
        assert!((a - c).abs() < 1e-9);
    }

    #[test]
    fn mann_whitney_exact_small_case() {
        // {3,4} vs {1,2}: U = 4, one-sided p = 1/6 by enumeration of C(4,2) splits.
        let r = mann_whitney_greater(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert!(r.exact);
        assert!((r.u - 4.0).abs() < 1e-12);
        assert!((r.p_greater - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn mann_whitney_identical_samples_show_no_evidence() {
        let xs = vec![1.0, 2.0, 3.0];
        let r = mann_whitney_greater(&xs, &xs).unwrap();
        assert!(r.p_greater > 0.4);
    }

    #[test]
    fn mann_whitney_asymptotic_total_separation() {
        let xs: Vec<f64> = (0..200).map(|i| 10.0 + i as f64).collect();
        let ys: Vec<f64> = (0..200).map(|i| -10.0 - i as f64).collect();
        let r = mann_whitney_greater(&xs, &ys).unwrap();
        assert!(!r.exact);
        assert!(r.p_greater < 1e-10);
    }
}
