//! Joint sentiment histograms, Monte-Carlo null models, the significance-
//! filtered difference histogram, and the homophily measure.

use rand::Rng;
use rayon::prelude::*;

use crate::corpus::{build_contexts, ContextKind, Corpus, Topic};
use crate::rng::StreamKey;
use crate::{CoreError, Result};

/// Default bin width of the joint histograms.
pub const DEFAULT_BIN_WIDTH: f64 = 0.05;

/// Number of bins per axis for a given width over [-1, 1].
pub fn bins_per_axis(bin_width: f64) -> usize {
    let r = 2.0 / bin_width;
    if (r - r.round()).abs() < 1e-9 {
        r.round() as usize
    } else {
        r.ceil() as usize
    }
}

fn bin_index(value: f64, bin_width: f64, bins: usize) -> usize {
    // Half-open bins [a, a + w), the last one closed so +1 lands inside.
    (((value + 1.0) / bin_width).floor() as isize).clamp(0, bins as isize - 1) as usize
}

/// Midpoint of bin `b` on either axis.
pub fn bin_midpoint(b: usize, bin_width: f64) -> f64 {
    -1.0 + (b as f64 + 0.5) * bin_width
}

/// Normalized 2-D histogram of (comment sentiment, context sentiment) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentHistogram {
    pub bin_width: f64,
    pub bins: usize,
    /// Row-major `[comment bin][context bin]` probability masses.
    pub masses: Vec<f64>,
    pub total_pairs: usize,
}

impl SentimentHistogram {
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.masses[i * self.bins + j]
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// Bins and normalizes sentiment pairs.
pub fn joint_histogram(pairs: &[(f64, f64)], bin_width: f64) -> Result<SentimentHistogram> {
    if pairs.is_empty() {
        return Err(CoreError::empty_input("no sentiment pairs"));
    }
    for &(a, b) in pairs {
        if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) {
            return Err(CoreError::invalid_argument(format!(
                "sentiment pair ({a}, {b}) outside [-1, 1]^2"
            )));
        }
    }
    let bins = bins_per_axis(bin_width);
    let mut masses = vec![0.0; bins * bins];
    let weight = 1.0 / pairs.len() as f64;
    for &(comment, context) in pairs {
        let i = bin_index(comment, bin_width, bins);
        let j = bin_index(context, bin_width, bins);
        masses[i * bins + j] += weight;
    }
    Ok(SentimentHistogram { bin_width, bins, masses, total_pairs: pairs.len() })
}

/// Pools and context size defining the random-pairing null model.
#[derive(Debug, Clone)]
pub struct NullSpec {
    /// Observed comment sentiments.
    pub comment_pool: Vec<f64>,
    /// Observed sentiments a context can draw from (for comment-parent pairs
    /// this additionally contains submission sentiments).
    pub context_pool: Vec<f64>,
    /// Context size: the null context value is the mean of `n` draws.
    pub n: usize,
}

/// One synthetic histogram under the null: comment values drawn uniformly
/// from the comment pool, context values as means of `n` uniform draws from
/// the context pool (with replacement).
pub fn null_histogram(
    spec: &NullSpec,
    total_pairs: usize,
    bin_width: f64,
    rng: &mut impl Rng,
) -> Result<SentimentHistogram> {
    if spec.comment_pool.is_empty() || spec.context_pool.is_empty() {
        return Err(CoreError::empty_input("null model pools must be non-empty"));
    }
    if spec.n == 0 {
        return Err(CoreError::invalid_argument("null context size must be at least 1"));
    }
    if total_pairs == 0 {
        return Err(CoreError::invalid_argument("total_pairs must be at least 1"));
    }
    let bins = bins_per_axis(bin_width);
    let mut masses = vec![0.0; bins * bins];
    let weight = 1.0 / total_pairs as f64;
    for _ in 0..total_pairs {
        let comment = spec.comment_pool[rng.random_range(0..spec.comment_pool.len())];
        let mut acc = 0.0;
        for _ in 0..spec.n {
            acc += spec.context_pool[rng.random_range(0..spec.context_pool.len())];
        }
        let context = acc / spec.n as f64;
        let i = bin_index(comment, bin_width, bins);
        let j = bin_index(context, bin_width, bins);
        masses[i * bins + j] += weight;
    }
    Ok(SentimentHistogram { bin_width, bins, masses, total_pairs })
}

/// Observed-minus-expected histogram with non-significant entries zeroed.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceHistogram {
    pub bin_width: f64,
    pub bins: usize,
    /// Signed masses, zero where p > the significance level.
    pub delta: Vec<f64>,
    /// Two-sided empirical p-value per bin.
    pub p_values: Vec<f64>,
    /// Mean null mass per bin over the replicates.
    pub null_mean: Vec<f64>,
    pub replicates: usize,
}

impl DifferenceHistogram {
    /// Wraps an explicit signed grid (no significance filter), mainly for
    /// composing and testing homophily computations.
    pub fn from_delta_grid(bin_width: f64, delta: Vec<f64>) -> Result<Self> {
        let bins = bins_per_axis(bin_width);
        if delta.len() != bins * bins {
            return Err(CoreError::BinningMismatch(format!(
                "grid of {} entries does not match {bins}x{bins} bins",
                delta.len()
            )));
        }
        let n = delta.len();
        Ok(DifferenceHistogram {
            bin_width,
            bins,
            delta,
            p_values: vec![0.0; n],
            null_mean: vec![0.0; n],
            replicates: 0,
        })
    }

    pub fn delta_at(&self, i: usize, j: usize) -> f64 {
        self.delta[i * self.bins + j]
    }

    /// Fraction of bins carrying a significant (nonzero) difference.
    pub fn nonzero_fraction(&self) -> f64 {
        let nz = self.delta.iter().filter(|&&d| d != 0.0).count();
        nz as f64 / self.delta.len() as f64
    }
}

/// Significance level of the difference filter.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Builds the difference histogram against `replicates` Monte-Carlo null
/// draws with the same pair count as the observed histogram.
///
/// Per bin, the two-sided empirical p-value is the fraction of replicates
/// whose mass deviates from the replicate mean at least as much as the
/// observed mass does; entries with p above [`SIGNIFICANCE_LEVEL`] are zeroed.
pub fn difference_histogram(
    observed: &SentimentHistogram,
    spec: &NullSpec,
    replicates: usize,
    seed: u64,
) -> Result<DifferenceHistogram> {
    if replicates < 100 {
        return Err(CoreError::invalid_argument("at least 100 null replicates required"));
    }
    let key = StreamKey::new(seed, "homophily-null");
    let reps: Vec<SentimentHistogram> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = key.with_index(r as u64).rng();
            null_histogram(spec, observed.total_pairs, observed.bin_width, &mut rng)
        })
        .collect::<Result<_>>()?;

    let n_bins = observed.masses.len();
    let mut null_mean = vec![0.0; n_bins];
    for rep in &reps {
        for (m, &v) in null_mean.iter_mut().zip(&rep.masses) {
            *m += v;
        }
    }
    for m in &mut null_mean {
        *m /= replicates as f64;
    }

    let mut delta = vec![0.0; n_bins];
    let mut p_values = vec![1.0; n_bins];
    for b in 0..n_bins {
        let observed_dev = (observed.masses[b] - null_mean[b]).abs();
        let extreme = reps
            .iter()
            .filter(|rep| (rep.masses[b] - null_mean[b]).abs() >= observed_dev)
            .count();
        let p = extreme as f64 / replicates as f64;
        p_values[b] = p;
        if p <= SIGNIFICANCE_LEVEL {
            delta[b] = observed.masses[b] - null_mean[b];
        }
    }

    Ok(DifferenceHistogram {
        bin_width: observed.bin_width,
        bins: observed.bins,
        delta,
        p_values,
        null_mean,
        replicates,
    })
}

/// The homophily measure: bin masses weighted by `1 - 2 |i - j|` over the bin
/// midpoints, positive for diagonal (like-with-like) excess.
pub fn homophily_measure(diff: &DifferenceHistogram) -> f64 {
    let mut h = 0.0;
    for i in 0..diff.bins {
        let mi = bin_midpoint(i, diff.bin_width);
        for j in 0..diff.bins {
            let mj = bin_midpoint(j, diff.bin_width);
            h += diff.delta_at(i, j) * (1.0 - 2.0 * (mi - mj).abs());
        }
    }
    h
}

/// Homophily of one context kind and size.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextHomophilyPoint {
    pub n: usize,
    pub kind: ContextKind,
    pub h: f64,
    pub pairs: usize,
}

/// Parameters of the context-homophily sweep.
#[derive(Debug, Clone, Copy)]
pub struct ContextHomophilyParams {
    pub bin_width: f64,
    pub replicates: usize,
    pub seed: u64,
    /// Context sizes 1..=max_n are evaluated; eligibility is fixed at the
    /// largest size so the curves compare the same comment set.
    pub max_n: usize,
}

/// Computes `h` per context size and kind over the comments that own both
/// contexts at the largest requested size.
///
/// The null pairs a random eligible comment sentiment with the mean of `n`
/// random draws from the topic's observed sentiments (comments and
/// submissions). An empty eligible set yields an empty curve, not an error.
pub fn context_homophily(
    corpus: &Corpus,
    topic: Topic,
    params: &ContextHomophilyParams,
) -> Result<Vec<ContextHomophilyPoint>> {
    if params.max_n == 0 {
        return Err(CoreError::invalid_argument("max_n must be at least 1"));
    }
    let build = build_contexts(corpus, params.max_n)?;
    let eligible: Vec<_> = build.pairs.iter().filter(|p| p.topic == topic).collect();
    if eligible.is_empty() {
        return Ok(Vec::new());
    }
    let comment_pool: Vec<f64> = eligible.iter().map(|p| p.focal_sentiment).collect();
    let context_pool = corpus.sentiments(topic, true);

    let mut points = Vec::new();
    for n in 1..=params.max_n {
        for kind in [ContextKind::Ancestral, ContextKind::User] {
            let pairs: Vec<(f64, f64)> = eligible
                .iter()
                .map(|p| {
                    let ctx = match kind {
                        ContextKind::Ancestral => &p.ancestral,
                        ContextKind::User => &p.user,
                    };
                    (p.focal_sentiment, ctx.prefix_mean(n))
                })
                .collect();
            let observed = joint_histogram(&pairs, params.bin_width)?;
            let spec = NullSpec {
                comment_pool: comment_pool.clone(),
                context_pool: context_pool.clone(),
                n,
            };
            let seed = StreamKey::new(params.seed, "context-homophily")
                .with_str(topic.as_str())
                .with_str(kind.as_str())
                .with_index(n as u64)
                .seed();
            let diff = difference_histogram(&observed, &spec, params.replicates, seed)?;
            points.push(ContextHomophilyPoint {
                n,
                kind,
                h: homophily_measure(&diff),
                pairs: pairs.len(),
            });
        }
    }
    Ok(points)
}
