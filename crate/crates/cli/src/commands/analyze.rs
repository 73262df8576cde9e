//! `siebc analyze`: temporal series, initiation curves, and sentiment
//! homophily per topic, emitted as CSV plus a manifest.

use siebc_core::corpus::{build_sequences, segment_discussions, Topic};
use siebc_core::homophily::{
    bin_midpoint, context_homophily, difference_histogram, homophily_measure, joint_histogram,
    ContextHomophilyParams, NullSpec,
};
use siebc_core::initiation::rho_curves;
use siebc_core::rng::StreamKey;
use siebc_core::temporal::{
    build_daily_series, build_weighted_sentiments, negative_days, piecewise_trend, rolling_mean,
    EventCalendar,
};

use crate::commands::{load_cache, study_window};
use crate::config::RunConfig;
use crate::report::{csv_field, fmt_f64, CsvWriter, Manifest};
use crate::CliError;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let corpus = load_cache(config)?;
    let window = study_window(config, &corpus)?;
    let segmentation = segment_discussions(&corpus);
    let sequences = build_sequences(&corpus, &segmentation);

    let mut manifest = Manifest::new(
        "analyze",
        config.seed,
        serde_json::json!({
            "window_start": window.0.to_string(),
            "window_end": window.1.to_string(),
            "rolling_window": config.rolling_window,
            "q": config.negative_q,
            "min_posts": config.negative_min_posts,
            "bin_width": config.bin_width,
            "replicates": config.replicates,
            "context_max_n": config.context_max_n,
            "rho_max_i": config.rho_max_i,
            "topics": config.topics.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        }),
    );

    let h_path = config.out.join("h_summary.csv");
    let mut h_csv = CsvWriter::create(&h_path, "topic,kind,n,h,pairs")?;

    for &topic in &config.topics {
        analyze_topic(config, &corpus, topic, window, &sequences, &mut manifest, &mut h_csv)?;
    }

    h_csv.finish()?;
    manifest.add(&h_path);
    manifest.write(&config.out, "analyze_manifest.json")?;
    println!("analysis artifacts written to {}", config.out.display());
    Ok(())
}

fn analyze_topic(
    config: &RunConfig,
    corpus: &siebc_core::corpus::Corpus,
    topic: Topic,
    window: (chrono::NaiveDate, chrono::NaiveDate),
    sequences: &[siebc_core::corpus::DiscussionSequence],
    manifest: &mut Manifest,
    h_csv: &mut CsvWriter,
) -> Result<(), CliError> {
    // Daily volume, rolling mean, negative days.
    let series = build_daily_series(corpus, topic, window)?;
    let smoothed = rolling_mean(&series.counts, config.rolling_window, config.rolling_mode)?;
    let weighted = build_weighted_sentiments(corpus, topic, window);
    // q = 0 degenerates to "below the minimum", which nothing satisfies.
    let flagged = if weighted.pooled().is_empty() || config.negative_q == 0.0 {
        Vec::new()
    } else {
        negative_days(&weighted, config.negative_q, config.negative_min_posts)?
    };

    let daily_path = config.out.join(format!("{topic}_daily.csv"));
    let mut daily = CsvWriter::create(&daily_path, "date,count,rolling_mean,flagged")?;
    for (i, &count) in series.counts.iter().enumerate() {
        let date = series.date(i);
        let flag = flagged.contains(&date);
        daily.row(&format!("{date},{count},{},{}", fmt_f64(smoothed[i]), u8::from(flag)))?;
    }
    daily.finish()?;
    manifest.add(&daily_path);

    // Piecewise trend between configured events (empty calendar: one segment).
    let calendar = match config.events.get(&topic) {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
            EventCalendar::parse(topic, &text)?
        }
        None => EventCalendar::new(topic, Vec::new())?,
    };
    let trend_path = config.out.join(format!("{topic}_trends.csv"));
    let mut trends = CsvWriter::create(&trend_path, "segment_start,segment_end,n_days,slope,intercept")?;
    for seg in piecewise_trend(&series, &calendar)? {
        match seg.line {
            Some((slope, intercept)) => trends.row(&format!(
                "{},{},{},{},{}",
                seg.start,
                seg.end,
                seg.n_days,
                fmt_f64(slope),
                fmt_f64(intercept)
            ))?,
            None => trends.row(&format!("{},{},{},,", seg.start, seg.end, seg.n_days))?,
        }
    }
    trends.finish()?;
    manifest.add(&trend_path);

    // Initiation curves.
    let topic_sequences: Vec<_> =
        sequences.iter().filter(|s| s.topic == topic).cloned().collect();
    let rho_path = config.out.join(format!("{topic}_rho.csv"));
    let mut rho_csv = CsvWriter::create(&rho_path, "i,rho_observed,rho_expected")?;
    if !topic_sequences.is_empty() {
        let rho = rho_curves(&topic_sequences, config.rho_max_i)?;
        for i in 0..config.rho_max_i {
            rho_csv.row(&format!(
                "{},{},{}",
                i + 1,
                fmt_f64(rho.observed[i]),
                fmt_f64(rho.expected[i])
            ))?;
        }
    }
    rho_csv.finish()?;
    manifest.add(&rho_path);

    // Comment-parent homophily with the randomized-pairing null.
    let pairs = corpus.comment_parent_pairs(topic);
    let grid_path = config.out.join(format!("{topic}_comment_parent_grid.csv"));
    let mut grid = CsvWriter::create(&grid_path, "i_mid,j_mid,observed,null_mean,delta,p")?;
    if !pairs.is_empty() {
        let observed = joint_histogram(&pairs, config.bin_width)?;
        let spec = NullSpec {
            comment_pool: pairs.iter().map(|&(c, _)| c).collect(),
            context_pool: corpus.sentiments(topic, true),
            n: 1,
        };
        let seed = derived_seed(config.seed, topic);
        let diff = difference_histogram(&observed, &spec, config.replicates, seed)?;
        for i in 0..diff.bins {
            for j in 0..diff.bins {
                let b = i * diff.bins + j;
                grid.row(&format!(
                    "{},{},{},{},{},{}",
                    fmt_f64(bin_midpoint(i, config.bin_width)),
                    fmt_f64(bin_midpoint(j, config.bin_width)),
                    fmt_f64(observed.masses[b]),
                    fmt_f64(diff.null_mean[b]),
                    fmt_f64(diff.delta[b]),
                    fmt_f64(diff.p_values[b])
                ))?;
            }
        }
        h_csv.row(&format!(
            "{},comment_parent,1,{},{}",
            csv_field(topic.as_str()),
            fmt_f64(homophily_measure(&diff)),
            pairs.len()
        ))?;
    }
    grid.finish()?;
    manifest.add(&grid_path);

    // Context homophily curves; eligibility fixed at the largest size.
    let params = ContextHomophilyParams {
        bin_width: config.bin_width,
        replicates: config.replicates,
        seed: config.seed,
        max_n: config.context_max_n,
    };
    for point in context_homophily(corpus, topic, &params)? {
        h_csv.row(&format!(
            "{},{},{},{},{}",
            csv_field(topic.as_str()),
            point.kind.as_str(),
            point.n,
            fmt_f64(point.h),
            point.pairs
        ))?;
    }

    // Flagged days on their own for quick joining.
    let neg_path = config.out.join(format!("{topic}_negative_days.csv"));
    let mut neg = CsvWriter::create(&neg_path, "date")?;
    for d in &flagged {
        neg.row(&d.to_string())?;
    }
    neg.finish()?;
    manifest.add(&neg_path);

    Ok(())
}

fn derived_seed(seed: u64, topic: Topic) -> u64 {
    StreamKey::new(seed, "analyze-homophily").with_str(topic.as_str()).seed()
}
