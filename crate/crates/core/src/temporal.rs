//! Daily activity series, rolling means, piecewise trends between event
//! dates, and significantly-negative-day detection.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::corpus::{Corpus, Topic};
use crate::stats;
use crate::{CoreError, Result};

/// UTC calendar day of an epoch timestamp.
pub fn utc_date(created_utc: i64) -> NaiveDate {
    chrono::DateTime::from_timestamp(created_utc, 0)
        .expect("timestamp in range")
        .date_naive()
}

/// Daily post counts for one topic over a contiguous study window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailySeries {
    pub topic: Topic,
    pub start: NaiveDate,
    /// One count per day from `start`; missing days are zero.
    pub counts: Vec<u64>,
}

impl DailySeries {
    pub fn date(&self, i: usize) -> NaiveDate {
        self.start + chrono::Days::new(i as u64)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Counts posts (submissions and comments) per UTC day inside the window
/// (inclusive bounds). Posts outside the window are ignored.
pub fn build_daily_series(
    corpus: &Corpus,
    topic: Topic,
    window: (NaiveDate, NaiveDate),
) -> Result<DailySeries> {
    let (start, end) = window;
    if end < start {
        return Err(CoreError::invalid_argument("study window end before start"));
    }
    let days = (end - start).num_days() as usize + 1;
    let mut counts = vec![0u64; days];
    for p in corpus.posts() {
        if p.topic != topic {
            continue;
        }
        let d = utc_date(p.created_utc);
        if d < start || d > end {
            continue;
        }
        counts[(d - start).num_days() as usize] += 1;
    }
    Ok(DailySeries { topic, start, counts })
}

/// Alignment of the rolling window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RollingMode {
    /// Window ends at the current day.
    Trailing,
    /// Window centred on the current day (left-heavy for even widths).
    Centered,
}

/// Rolling mean of a daily series. Days with a partial window average over
/// the days actually available.
pub fn rolling_mean(values: &[u64], window_days: usize, mode: RollingMode) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(CoreError::empty_input("rolling mean of empty series"));
    }
    if window_days == 0 {
        return Err(CoreError::invalid_argument("window must be at least one day"));
    }
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = match mode {
            RollingMode::Trailing => (i.saturating_sub(window_days - 1), i),
            RollingMode::Centered => {
                let half_left = (window_days - 1) / 2 + (window_days - 1) % 2;
                let half_right = (window_days - 1) / 2;
                (i.saturating_sub(half_left), (i + half_right).min(n - 1))
            }
        };
        let span = &values[lo..=hi];
        out.push(span.iter().sum::<u64>() as f64 / span.len() as f64);
    }
    Ok(out)
}

/// A dated event splitting the trend fit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub date: NaiveDate,
    pub label: String,
}

/// Ordered event dates for one topic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventCalendar {
    pub topic: Topic,
    pub events: Vec<Event>,
}

impl EventCalendar {
    pub fn new(topic: Topic, events: Vec<Event>) -> Result<Self> {
        for w in events.windows(2) {
            if w[1].date <= w[0].date {
                return Err(CoreError::invalid_argument(format!(
                    "event dates must be strictly increasing ({} then {})",
                    w[0].date, w[1].date
                )));
            }
        }
        Ok(EventCalendar { topic, events })
    }

    /// Parses `YYYY-MM-DD<TAB>label` lines; blank lines are skipped.
    pub fn parse(topic: Topic, text: &str) -> Result<Self> {
        let mut events = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (date, label) = line.split_once('\t').ok_or_else(|| {
                CoreError::invalid_argument(format!(
                    "event line {} lacks a tab separator",
                    lineno + 1
                ))
            })?;
            let date = NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d").map_err(|e| {
                CoreError::invalid_argument(format!("event line {}: {e}", lineno + 1))
            })?;
            events.push(Event { date, label: label.trim().to_string() });
        }
        EventCalendar::new(topic, events)
    }
}

/// OLS line fitted to one inter-event segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTrend {
    pub start: NaiveDate,
    /// Exclusive end.
    pub end: NaiveDate,
    pub n_days: usize,
    /// Slope per day and intercept at the segment start; `None` when the
    /// segment holds fewer than two observations.
    pub line: Option<(f64, f64)>,
}

/// Fits an independent OLS line per half-open segment `[b_k, b_{k+1})` of the
/// raw daily values, with the window edges as outer boundaries. Segments with
/// fewer than two points are reported unfittable, not fatal.
pub fn piecewise_trend(
    series: &DailySeries,
    calendar: &EventCalendar,
) -> Result<Vec<SegmentTrend>> {
    if series.is_empty() {
        return Err(CoreError::empty_input("trend of empty series"));
    }
    let window_end = series.date(series.len() - 1) + chrono::Days::new(1);
    let mut bounds = vec![series.start];
    for e in &calendar.events {
        if e.date > series.start && e.date < window_end {
            bounds.push(e.date);
        }
    }
    bounds.push(window_end);

    let mut segments = Vec::new();
    for w in bounds.windows(2) {
        let (seg_start, seg_end) = (w[0], w[1]);
        let i0 = (seg_start - series.start).num_days() as usize;
        let i1 = (seg_end - series.start).num_days() as usize;
        let t: Vec<f64> = (0..i1 - i0).map(|k| k as f64).collect();
        let y: Vec<f64> = series.counts[i0..i1].iter().map(|&c| c as f64).collect();
        segments.push(SegmentTrend {
            start: seg_start,
            end: seg_end,
            n_days: i1 - i0,
            line: stats::ols_line(&t, &y),
        });
    }
    Ok(segments)
}

/// Score-weighted sentiments of one topic, partitioned per day.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSentimentSet {
    pub topic: Topic,
    pub days: BTreeMap<NaiveDate, Vec<f64>>,
}

impl WeightedSentimentSet {
    /// All values pooled, in date order.
    pub fn pooled(&self) -> Vec<f64> {
        self.days.values().flatten().copied().collect()
    }
}

/// Collects `score * sentiment` per post with sentiment, per UTC day inside
/// the window.
pub fn build_weighted_sentiments(
    corpus: &Corpus,
    topic: Topic,
    window: (NaiveDate, NaiveDate),
) -> WeightedSentimentSet {
    let mut days: BTreeMap<NaiveDate, Vec<f64>> = BTreeMap::new();
    for p in corpus.posts() {
        if p.topic != topic {
            continue;
        }
        let Some(s) = p.sentiment else { continue };
        let d = utc_date(p.created_utc);
        if d < window.0 || d > window.1 {
            continue;
        }
        days.entry(d).or_default().push(p.score as f64 * s);
    }
    WeightedSentimentSet { topic, days }
}

/// Flags days whose median weighted sentiment falls strictly below the
/// `q`-quantile (type 7) of the pooled set, requiring at least `min_posts`
/// sentiment-bearing posts on the day.
pub fn negative_days(
    ws: &WeightedSentimentSet,
    q: f64,
    min_posts: usize,
) -> Result<Vec<NaiveDate>> {
    if !(0.0 < q && q < 1.0) {
        return Err(CoreError::invalid_argument(format!("quantile level {q} outside (0, 1)")));
    }
    if min_posts == 0 {
        return Err(CoreError::invalid_argument("min_posts must be at least 1"));
    }
    let pooled = ws.pooled();
    if pooled.is_empty() {
        return Err(CoreError::empty_input("weighted sentiment set is empty"));
    }
    let threshold = stats::quantile_type7(&pooled, q)?;
    let mut flagged = Vec::new();
    for (&date, values) in &ws.days {
        if values.len() < min_posts {
            continue;
        }
        if stats::median(values)? < threshold {
            flagged.push(date);
        }
    }
    Ok(flagged)
}
