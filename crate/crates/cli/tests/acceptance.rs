//! Acceptance suite: one test per contract criterion, each printing a
//! PASS line (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::process::Command;
use std::time::Instant;

use common::{assert_trees_identical, write_fixture_corpus, Lcg};

use siebc_core::homophily::{
    bins_per_axis, difference_histogram, homophily_measure, null_histogram, DifferenceHistogram,
    NullSpec,
};
use siebc_core::initiation::first_initiation_pmf;
use siebc_core::rng::StreamKey;
use siebc_core::siebc::{
    bc_kernel, fit, generate_synthetic, linear_kernel, posterior_predictive, wasserstein_1,
    BinnedDistribution, KernelKind, PredictiveConfig, Priors, SamplerConfig, SyntheticSpec,
};
use siebc_core::stats::{mann_whitney_greater, quantile_type7};
use siebc_core::temporal::{negative_days, WeightedSentimentSet};

fn pass(n: usize, what: &str) {
    println!("ACCEPTANCE {n:>2} PASS - {what}");
}

/// The compute-heavy criteria run one at a time so their wall-clock budgets
/// are not distorted by harness-level test parallelism.
static HEAVY: std::sync::Mutex<()> = std::sync::Mutex::new(());

fn heavy() -> std::sync::MutexGuard<'static, ()> {
    HEAVY.lock().unwrap_or_else(|e| e.into_inner())
}

/// 1. The first-initiation PMF equals exhaustive enumeration of all
///    orderings for every (n_I, n_P) with n_I + n_P <= 12, within 1e-12,
///    in under five seconds.
#[test]
fn criterion_01_initiation_null_model_exactness() {
    let start = Instant::now();
    for total in 1usize..=12 {
        // Enumerate all 2^total orderings once; bit k set = initiation at
        // position k+1.
        let mut tallies = vec![vec![0u64; total + 2]; total + 1];
        for mask in 0u32..(1 << total) {
            let n_i = mask.count_ones() as usize;
            if n_i == 0 {
                continue;
            }
            let first = mask.trailing_zeros() as usize + 1;
            tallies[n_i][first] += 1;
        }
        for n_i in 1..=total {
            let n_p = total - n_i;
            let pmf = first_initiation_pmf(n_i, n_p).unwrap();
            let denom: u64 = tallies[n_i].iter().sum();
            for i in 1..=n_p + 1 {
                let exact = tallies[n_i][i] as f64 / denom as f64;
                assert!(
                    (pmf.pmf[i - 1] - exact).abs() < 1e-12,
                    "n_i={n_i} n_p={n_p} i={i}: {} vs {exact}",
                    pmf.pmf[i - 1]
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(1, "first-initiation PMF matches exhaustive enumeration (n <= 12, 1e-12)");
}

/// 2. With epsilon = 2 and gamma = 1e6 the bounded kernel matches the linear
///    kernel within 1e-6 over a 201x201 grid of [-1, 1]^2. The two corner
///    points with |s2 - s1| exactly at the threshold are excluded: the gate
///    is pinned to one half there (criterion 3), not to the open-gate limit.
#[test]
fn criterion_02_kernel_limit() {
    let alpha = 0.7;
    let mut worst = 0.0f64;
    for i in 0..=200 {
        for j in 0..=200 {
            let s1 = -1.0 + i as f64 * 0.01;
            let s2 = -1.0 + j as f64 * 0.01;
            if ((s2 - s1).abs() - 2.0).abs() < 1e-15 {
                continue;
            }
            let d = (bc_kernel(s1, s2, alpha, 2.0, 1e6) - linear_kernel(s1, s2, alpha)).abs();
            worst = worst.max(d);
        }
    }
    assert!(worst < 1e-6, "max deviation {worst}");
    pass(2, "bounded kernel at eps=2, gamma=1e6 matches linear within 1e-6");
}

/// 3. At |s2 - s1| = eps the bounded kernel returns the exact half update
///    for 100 random triples, within 1e-12.
#[test]
fn criterion_03_kernel_anchor_points() {
    let mut rng = Lcg(0x5eed);
    for k in 0..100 {
        let s1 = rng.range(-1.0, 1.0);
        let alpha = rng.range(0.0, 2.0);
        let eps_raw = rng.range(0.01, 2.0);
        let sign = if rng.unit() < 0.5 { 1.0 } else { -1.0 };
        let s2 = s1 + sign * eps_raw;
        // The representable difference is the effective threshold.
        let eps = (s2 - s1).abs();
        let got = bc_kernel(s1, s2, alpha, eps, 50.0);
        let want = s1 + alpha * (s2 - s1) / 2.0;
        assert!((got - want).abs() < 1e-12, "triple {k}: {got} vs {want}");
    }
    pass(3, "kernel returns s1 + alpha*(s2-s1)/2 exactly at the threshold");
}

/// 4. The homophily measure reproduces the pinned values 0, 1 and -2.9 and
///    is linear and transpose-invariant on random grids, within 1e-12.
#[test]
fn criterion_04_homophily_measure() {
    let bins = bins_per_axis(0.05);
    let h = |g: Vec<f64>| homophily_measure(&DifferenceHistogram::from_delta_grid(0.05, g).unwrap());

    assert_eq!(h(vec![0.0; bins * bins]), 0.0);

    let mut diag = vec![0.0; bins * bins];
    diag[17 * bins + 17] = 1.0;
    assert!((h(diag) - 1.0).abs() < 1e-12);

    let mut corner = vec![0.0; bins * bins];
    corner[39] = 1.0; // midpoints (-0.975, 0.975)
    assert!((h(corner) + 2.9).abs() < 1e-12);

    let mut rng = Lcg(0xabcd);
    for _ in 0..20 {
        let g1: Vec<f64> = (0..bins * bins).map(|_| rng.range(-1.0, 1.0)).collect();
        let g2: Vec<f64> = (0..bins * bins).map(|_| rng.range(-1.0, 1.0)).collect();
        let (a, b) = (rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
        let combo: Vec<f64> = g1.iter().zip(&g2).map(|(x, y)| a * x + b * y).collect();
        assert!((h(combo) - (a * h(g1.clone()) + b * h(g2))).abs() < 1e-12);

        let mut transposed = vec![0.0; bins * bins];
        for i in 0..bins {
            for j in 0..bins {
                transposed[j * bins + i] = g1[i * bins + j];
            }
        }
        assert!((h(g1) - h(transposed)).abs() < 1e-12);
    }
    pass(4, "homophily measure pinned values, linearity, transpose invariance (1e-12)");
}

/// 5. Feeding null-generated data into the difference histogram (B = 1000)
///    yields a significant-bin fraction in [0.03, 0.07] and a mean homophily
///    within 0.02 of zero, averaged over 20 trials, in under two minutes.
#[test]
fn criterion_05_null_calibration() {
    let _guard = heavy();
    let start = Instant::now();
    let pool: Vec<f64> = (0..=2000).map(|k| -1.0 + k as f64 / 1000.0).collect();
    let spec = NullSpec { comment_pool: pool.clone(), context_pool: pool, n: 1 };
    let total_pairs = 16_000;
    let mut fractions = Vec::new();
    let mut hs = Vec::new();
    for trial in 0..20u64 {
        let mut rng = StreamKey::new(911, "calib-observed").with_index(trial).rng();
        let observed = null_histogram(&spec, total_pairs, 0.05, &mut rng).unwrap();
        let seed = StreamKey::new(911, "calib-null").with_index(trial).seed();
        let diff = difference_histogram(&observed, &spec, 1000, seed).unwrap();
        fractions.push(diff.nonzero_fraction());
        hs.push(homophily_measure(&diff));
    }
    let mean_fraction = fractions.iter().sum::<f64>() / 20.0;
    let mean_h = hs.iter().sum::<f64>() / 20.0;
    let elapsed = start.elapsed();
    assert!(
        (0.03..=0.07).contains(&mean_fraction),
        "significant-bin fraction {mean_fraction}"
    );
    assert!(mean_h.abs() <= 0.02, "mean h {mean_h}");
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    pass(5, "self-null calibration: fraction in [0.03, 0.07], mean h within 0.02");
}

/// 6. The four-day fixture (three +1 days, one -1 day, 50 unit-score posts
///    each, q = 0.275, minimum 50) flags exactly the negative day.
#[test]
fn criterion_06_negative_day_fixture() {
    let mut days = std::collections::BTreeMap::new();
    let d0 = chrono::NaiveDate::from_ymd_opt(2020, 3, 1).unwrap();
    for (i, v) in [1.0, 1.0, -1.0, 1.0].iter().enumerate() {
        days.insert(d0 + chrono::Days::new(i as u64), vec![*v; 50]);
    }
    let ws = WeightedSentimentSet { topic: siebc_core::corpus::Topic::Mask, days };
    let flagged = negative_days(&ws, 0.275, 50).unwrap();
    assert_eq!(flagged, vec![d0 + chrono::Days::new(2)]);
    pass(6, "negative-day fixture flags exactly the -1 day");
}

/// 7. Calibration on 20 synthetic users x 200 comments with true
///    (alpha_e, alpha_u, eps, sigma) = (0.8, 0.4, 0.6, 0.1): the 90% credible
///    intervals cover both true update strengths for at least 80% of users
///    and the posterior median of alpha_e exceeds alpha_u's for at least 90%,
///    within 30 minutes.
#[test]
fn criterion_07_synthetic_parameter_recovery() {
    let _guard = heavy();
    let start = Instant::now();
    let spec = SyntheticSpec::recovery_benchmark(20, 200);
    let data = generate_synthetic(&spec, 11).unwrap();
    let config = SamplerConfig {
        chains: 6,
        draws_per_chain: 500,
        warmup: 1200,
        thin: 4,
        ..Default::default()
    };
    let draws = fit(&data.timelines, &Priors::default(), &config, 2024).unwrap();

    let mut cover_e = 0;
    let mut cover_u = 0;
    let mut ordered = 0;
    for (user, truth) in draws.users.iter().zip(&data.truth) {
        let alpha_e = user.param_column(0);
        let alpha_u = user.param_column(1);
        let ci = |v: &[f64]| {
            (quantile_type7(v, 0.05).unwrap(), quantile_type7(v, 0.95).unwrap())
        };
        let (e_lo, e_hi) = ci(&alpha_e);
        let (u_lo, u_hi) = ci(&alpha_u);
        if e_lo <= truth.params.alpha_e && truth.params.alpha_e <= e_hi {
            cover_e += 1;
        }
        if u_lo <= truth.params.alpha_u && truth.params.alpha_u <= u_hi {
            cover_u += 1;
        }
        if quantile_type7(&alpha_e, 0.5).unwrap() > quantile_type7(&alpha_u, 0.5).unwrap() {
            ordered += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(cover_e >= 16, "alpha_e coverage {cover_e}/20");
    assert!(cover_u >= 16, "alpha_u coverage {cover_u}/20");
    assert!(ordered >= 18, "median ordering {ordered}/20");
    assert!(elapsed.as_secs_f64() < 1800.0, "took {elapsed:?}");
    pass(7, "synthetic recovery: CI coverage >= 80%, alpha_e > alpha_u medians >= 90%");
}

/// 8. On the polarized fixture the bounded-confidence fit achieves strictly
///    lower posterior-predictive Wasserstein distance than the linear fit.
#[test]
fn criterion_08_kernel_comparison_direction() {
    let _guard = heavy();
    let spec = SyntheticSpec::polarized_benchmark(10, 120);
    let data = generate_synthetic(&spec, 0).unwrap();
    let predictive = PredictiveConfig { h_draws: 8, h_replicates: 100, ..Default::default() };
    let mut w1 = Vec::new();
    for kernel in [KernelKind::Bounded, KernelKind::Linear] {
        let config = SamplerConfig {
            chains: 4,
            draws_per_chain: 300,
            warmup: 800,
            thin: 3,
            kernel,
            ..Default::default()
        };
        let draws = fit(&data.timelines, &Priors::default(), &config, 77).unwrap();
        let pred = posterior_predictive(&draws, &data.timelines, &predictive, 33).unwrap();
        w1.push(pred.w1);
    }
    assert!(
        w1[0] < w1[1],
        "bounded W1 {} should be strictly below linear W1 {}",
        w1[0],
        w1[1]
    );
    pass(8, "bounded-confidence fit beats the linear fit on predictive W1");
}

/// 9. Wasserstein axioms on 1000 random binned triples within 1e-12:
///    non-negativity, symmetry, identity, triangle inequality.
#[test]
fn criterion_09_wasserstein_metric_axioms() {
    let mut rng = Lcg(0x77aa);
    let bins = bins_per_axis(0.05);
    let random_dist = |rng: &mut Lcg| {
        let masses: Vec<f64> = (0..bins).map(|_| rng.unit() + 1e-9).collect();
        BinnedDistribution::from_masses(masses, 0.05).unwrap()
    };
    for _ in 0..1000 {
        let o = random_dist(&mut rng);
        let p = random_dist(&mut rng);
        let q = random_dist(&mut rng);
        let op = wasserstein_1(&o, &p).unwrap();
        assert!(op >= 0.0);
        assert!((op - wasserstein_1(&p, &o).unwrap()).abs() < 1e-12);
        assert_eq!(wasserstein_1(&o, &o).unwrap(), 0.0);
        let oq = wasserstein_1(&o, &q).unwrap();
        let qp = wasserstein_1(&q, &p).unwrap();
        assert!(op <= oq + qp + 1e-12);
    }
    pass(9, "Wasserstein axioms hold on 1000 random triples (1e-12)");
}

/// 10. Exact Mann-Whitney p-values match complete permutation enumeration
///     for every sample-size pair with m + n <= 10, within 1e-12.
#[test]
fn criterion_10_mann_whitney_exactness() {
    let mut rng = Lcg(0x3c3c);
    for m in 1usize..=9 {
        for n in 1..=(10 - m) {
            for _rep in 0..3 {
                // Quantized values force ties, exercising the 0.5 counting.
                let xs: Vec<f64> = (0..m).map(|_| (rng.range(-2.0, 2.0) * 2.0).round() / 2.0).collect();
                let ys: Vec<f64> = (0..n).map(|_| (rng.range(-2.0, 2.0) * 2.0).round() / 2.0).collect();
                let got = mann_whitney_greater(&xs, &ys).unwrap();
                assert!(got.exact);

                // Oracle: walk every bitmask with m set bits over the pool.
                let pooled: Vec<f64> = xs.iter().chain(&ys).copied().collect();
                let total = pooled.len();
                let u_of = |group1: &[f64], group2: &[f64]| {
                    let mut u = 0.0;
                    for &x in group1 {
                        for &y in group2 {
                            if x > y {
                                u += 1.0;
                            } else if x == y {
                                u += 0.5;
                            }
                        }
                    }
                    u
                };
                let observed_u = u_of(&xs, &ys);
                let mut hits = 0u64;
                let mut count = 0u64;
                for mask in 0u32..(1 << total) {
                    if mask.count_ones() as usize != m {
                        continue;
                    }
                    let mut g1 = Vec::with_capacity(m);
                    let mut g2 = Vec::with_capacity(total - m);
                    for (bit, &v) in pooled.iter().enumerate() {
                        if mask & (1 << bit) != 0 {
                            g1.push(v);
                        } else {
                            g2.push(v);
                        }
                    }
                    if u_of(&g1, &g2) >= observed_u - 1e-9 {
                        hits += 1;
                    }
                    count += 1;
                }
                let exact = hits as f64 / count as f64;
                assert!(
                    (got.p_greater - exact).abs() < 1e-12,
                    "m={m} n={n}: {} vs {exact}",
                    got.p_greater
                );
            }
        }
    }
    pass(10, "Mann-Whitney p equals permutation enumeration for m+n <= 10");
}

/// 11. Two `analyze` + `fit` runs of the binary with identical config and
///     seed produce byte-identical output trees.
#[test]
fn criterion_11_end_to_end_determinism() {
    let _guard = heavy();
    let base = std::env::temp_dir().join(format!("siebc-acceptance-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);
    std::fs::create_dir_all(&base).unwrap();
    let corpus = base.join("corpus.ndjson");
    write_fixture_corpus(&corpus, 4242);

    let exe = env!("CARGO_BIN_EXE_siebc");
    let run = |out: &std::path::Path| {
        let config_path = base.join(format!(
            "{}.conf",
            out.file_name().unwrap().to_string_lossy()
        ));
        std::fs::write(
            &config_path,
            format!(
                "corpus={}\nout={}\nseed=77\nreplicates=120\nmin_comments=4\nchains=2\ndraws=25\nwarmup=25\nrho_max_i=6\ncontext_max_n=2\npredictive_h_draws=4\npredictive_h_replicates=100\nmin_posts=5\n",
                corpus.display(),
                out.display()
            ),
        )
        .unwrap();
        for command in ["ingest", "analyze", "fit"] {
            let status = Command::new(exe)
                .args([command, "--config", config_path.to_str().unwrap()])
                .status()
                .unwrap();
            assert!(status.success(), "{command} failed");
        }
    };

    let out_a = base.join("run_a");
    let out_b = base.join("run_b");
    run(&out_a);
    run(&out_b);
    assert_trees_identical(&out_a, &out_b);
    let _ = std::fs::remove_dir_all(&base);
    pass(11, "analyze + fit reruns are byte-identical");
}
