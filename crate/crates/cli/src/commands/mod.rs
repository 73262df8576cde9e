pub mod analyze;
pub mod fit;
pub mod ingest;
pub mod reconstruct;
pub mod simulate;

use std::collections::HashMap;
use std::io::BufReader;
use std::path::Path;

use siebc_core::corpus::{read_posts, Corpus, UserTimeline};

use crate::config::RunConfig;
use crate::CliError;

/// Loads the normalized corpus cache written by `ingest`.
pub fn load_cache(config: &RunConfig) -> Result<Corpus, CliError> {
    let path = config.cache_path();
    let file = std::fs::File::open(&path).map_err(|_| {
        CliError::data(format!(
            "no ingested cache at {}; run `siebc ingest` first",
            path.display()
        ))
    })?;
    let posts = read_posts(BufReader::new(file))?;
    Ok(Corpus::build(posts)?)
}

/// Loads timelines from a JSON file written by `simulate`.
pub fn load_timelines(path: &Path) -> Result<Vec<UserTimeline>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::data(format!("cannot parse {}: {e}", path.display())))
}

/// Study window: configured bounds, or the corpus span per topic.
pub fn study_window(
    config: &RunConfig,
    corpus: &Corpus,
) -> Result<(chrono::NaiveDate, chrono::NaiveDate), CliError> {
    use siebc_core::temporal::utc_date;
    let data_bounds = || -> Option<(chrono::NaiveDate, chrono::NaiveDate)> {
        let mut min = None;
        let mut max = None;
        for p in corpus.posts() {
            let d = utc_date(p.created_utc);
            min = Some(min.map_or(d, |m: chrono::NaiveDate| m.min(d)));
            max = Some(max.map_or(d, |m: chrono::NaiveDate| m.max(d)));
        }
        Some((min?, max?))
    };
    let bounds = data_bounds();
    let start = config.window_start.or(bounds.map(|b| b.0));
    let end = config.window_end.or(bounds.map(|b| b.1));
    match (start, end) {
        (Some(s), Some(e)) if s <= e => Ok((s, e)),
        (Some(s), Some(e)) => Err(CliError::usage(format!("window start {s} after end {e}"))),
        _ => Err(CliError::data("empty corpus: cannot derive study window")),
    }
}

/// Groups timelines per topic for commands that accept a timelines file.
pub fn timelines_by_topic(
    timelines: Vec<UserTimeline>,
) -> HashMap<siebc_core::corpus::Topic, Vec<UserTimeline>> {
    let mut map: HashMap<_, Vec<UserTimeline>> = HashMap::new();
    for tl in timelines {
        map.entry(tl.topic).or_default().push(tl);
    }
    for list in map.values_mut() {
        list.sort_by(|a, b| a.user.cmp(&b.user));
    }
    map
}
