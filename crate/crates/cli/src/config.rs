//! Run configuration: `key=value` file plus command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use siebc_core::corpus::Topic;
use siebc_core::siebc::KernelKind;
use siebc_core::temporal::RollingMode;

use crate::CliError;

/// Everything a run needs; every field has a default so a config file is
/// only required where the defaults do not fit.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub timelines: Option<PathBuf>,
    pub out: PathBuf,
    pub topics: Vec<Topic>,
    pub seed: u64,
    pub strict: bool,

    pub window_start: Option<NaiveDate>,
    pub window_end: Option<NaiveDate>,
    pub rolling_window: usize,
    pub rolling_mode: RollingMode,
    pub negative_q: f64,
    pub negative_min_posts: usize,
    pub na_filter_fraction: f64,

    pub bin_width: f64,
    pub replicates: usize,
    pub context_max_n: usize,
    pub rho_max_i: usize,

    pub min_comments: usize,
    pub gamma: f64,
    pub kernel: KernelKind,
    pub chains: usize,
    pub draws: usize,
    pub warmup: usize,
    pub thin: usize,
    pub alpha_prior_mean: f64,
    pub sigma_prior_mean: f64,
    pub epsilon_max: f64,
    pub predictive_h_draws: usize,
    pub predictive_h_replicates: usize,

    pub synthetic_users: usize,
    pub synthetic_comments: usize,
    pub synthetic_benchmark: String,

    /// Per-topic event calendar files.
    pub events: BTreeMap<Topic, PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            timelines: None,
            out: PathBuf::from("out"),
            topics: vec![Topic::Lockdown, Topic::Mask, Topic::Vaccination],
            seed: 42,
            strict: false,
            window_start: None,
            window_end: None,
            rolling_window: 14,
            rolling_mode: RollingMode::Trailing,
            negative_q: 0.275,
            negative_min_posts: 50,
            na_filter_fraction: 0.9,
            bin_width: 0.05,
            replicates: 1000,
            context_max_n: 5,
            rho_max_i: 20,
            min_comments: 40,
            gamma: 50.0,
            kernel: KernelKind::Bounded,
            chains: 6,
            draws: 500,
            warmup: 250,
            thin: 1,
            alpha_prior_mean: 0.5,
            sigma_prior_mean: 0.5,
            epsilon_max: 2.0,
            predictive_h_draws: 50,
            predictive_h_replicates: 200,
            synthetic_users: 20,
            synthetic_comments: 200,
            synthetic_benchmark: "recovery".into(),
            events: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    /// Parses a config file: one `key=value` per line, `#` comments allowed.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut config = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {} is not key=value: `{raw}`", lineno + 1))
            })?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| CliError::usage(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            value.parse().map_err(|e| format!("bad value for {key}: {e}"))
        }
        match key {
            "corpus" => self.corpus = Some(PathBuf::from(value)),
            "timelines" => self.timelines = Some(PathBuf::from(value)),
            "out" => self.out = PathBuf::from(value),
            "topics" => {
                let mut topics = Vec::new();
                for t in value.split(',') {
                    let t = t.trim();
                    topics.push(
                        Topic::parse(t).ok_or_else(|| format!("unknown topic `{t}`"))?,
                    );
                }
                if topics.is_empty() {
                    return Err("topics must not be empty".into());
                }
                self.topics = topics;
            }
            "seed" => self.seed = parse(key, value)?,
            "window_start" => self.window_start = Some(parse_date(value)?),
            "window_end" => self.window_end = Some(parse_date(value)?),
            "rolling_window" => self.rolling_window = parse(key, value)?,
            "rolling_mode" => {
                self.rolling_mode = match value {
                    "trailing" => RollingMode::Trailing,
                    "centered" => RollingMode::Centered,
                    other => return Err(format!("unknown rolling mode `{other}`")),
                }
            }
            "q" | "negative_q" => self.negative_q = parse(key, value)?,
            "min_posts" | "negative_min_posts" => self.negative_min_posts = parse(key, value)?,
            "na_filter_fraction" => self.na_filter_fraction = parse(key, value)?,
            "bin_width" => self.bin_width = parse(key, value)?,
            "replicates" => self.replicates = parse(key, value)?,
            "context_max_n" => self.context_max_n = parse(key, value)?,
            "rho_max_i" => self.rho_max_i = parse(key, value)?,
            "min_comments" => self.min_comments = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "kernel" => {
                self.kernel = KernelKind::parse(value)
                    .ok_or_else(|| format!("unknown kernel `{value}`"))?
            }
            "chains" => self.chains = parse(key, value)?,
            "draws" => self.draws = parse(key, value)?,
            "warmup" => self.warmup = parse(key, value)?,
            "thin" => self.thin = parse(key, value)?,
            "alpha_prior_mean" => self.alpha_prior_mean = parse(key, value)?,
            "sigma_prior_mean" => self.sigma_prior_mean = parse(key, value)?,
            "epsilon_max" => self.epsilon_max = parse(key, value)?,
            "predictive_h_draws" => self.predictive_h_draws = parse(key, value)?,
            "predictive_h_replicates" => self.predictive_h_replicates = parse(key, value)?,
            "synthetic_users" => self.synthetic_users = parse(key, value)?,
            "synthetic_comments" => self.synthetic_comments = parse(key, value)?,
            "synthetic_benchmark" => {
                if value != "recovery" && value != "polarized" {
                    return Err(format!("unknown synthetic benchmark `{value}`"));
                }
                self.synthetic_benchmark = value.to_string();
            }
            _ => {
                if let Some(topic_name) = key.strip_prefix("events.") {
                    let topic = Topic::parse(topic_name)
                        .ok_or_else(|| format!("unknown topic in `{key}`"))?;
                    self.events.insert(topic, PathBuf::from(value));
                } else {
                    return Err(format!("unknown config key `{key}`"));
                }
            }
        }
        Ok(())
    }

    /// Path of the normalized corpus cache inside the output directory.
    pub fn cache_path(&self) -> PathBuf {
        self.out.join("corpus.ndjson")
    }
}

fn parse_date(value: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(value, "%Y-%m-%d").map_err(|e| format!("bad date `{value}`: {e}"))
}
