use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{CoreError, Result};

/// Author value the platform substitutes when an account is deleted.
/// It aggregates unrelated people, so user-level analyses skip it.
pub const DELETED_AUTHOR: &str = "[deleted]";

/// Topic label of a post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topic {
    Lockdown,
    Mask,
    Vaccination,
    Other,
    NotApplicable,
}

/// The three mitigation-measure topics every analysis runs over.
pub const MEASURE_TOPICS: [Topic; 3] = [Topic::Lockdown, Topic::Mask, Topic::Vaccination];

impl Topic {
    /// True for the specific mitigation measures (not `other`/`not_applicable`).
    pub fn is_measure(self) -> bool {
        matches!(self, Topic::Lockdown | Topic::Mask | Topic::Vaccination)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Topic::Lockdown => "lockdown",
            Topic::Mask => "mask",
            Topic::Vaccination => "vaccination",
            Topic::Other => "other",
            Topic::NotApplicable => "not_applicable",
        }
    }

    pub fn parse(s: &str) -> Option<Topic> {
        match s {
            "lockdown" => Some(Topic::Lockdown),
            "mask" => Some(Topic::Mask),
            "vaccination" => Some(Topic::Vaccination),
            "other" => Some(Topic::Other),
            "not_applicable" => Some(Topic::NotApplicable),
            _ => None,
        }
    }
}

impl std::fmt::Display for Topic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One submission or comment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub parent_id: Option<String>,
    pub author: String,
    pub created_utc: i64,
    pub score: i64,
    pub topic: Topic,
    pub sentiment: Option<f64>,
    pub is_submission: bool,
}

impl Post {
    /// Field-level validation; structural checks live in `Corpus::build`.
    pub fn validate(&self) -> Result<()> {
        if self.parent_id.is_none() != self.is_submission {
            return Err(CoreError::InvalidPost {
                id: self.id.clone(),
                message: "parent_id must be absent exactly for submissions".into(),
            });
        }
        if let Some(s) = self.sentiment {
            if !s.is_finite() || !(-1.0..=1.0).contains(&s) {
                return Err(CoreError::InvalidPost {
                    id: self.id.clone(),
                    message: format!("sentiment {s} outside [-1, 1]"),
                });
            }
        }
        Ok(())
    }
}

/// Combines classifier scores into a single sentiment: positive minus negative.
pub fn combine_sentiment(pos: f64, neg: f64) -> Result<f64> {
    for (name, v) in [("positive", pos), ("negative", neg)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(CoreError::invalid_argument(format!("{name} score {v} outside [0, 1]")));
        }
    }
    Ok(pos - neg)
}

/// Reads newline-delimited JSON posts. Unknown fields are ignored; blank
/// lines are skipped. Errors carry the 1-based line number.
pub fn read_posts<R: BufRead>(reader: R) -> Result<Vec<Post>> {
    let mut posts = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let post: Post = serde_json::from_str(&line).map_err(|e| CoreError::MalformedRecord {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        posts.push(post);
    }
    if posts.is_empty() {
        return Err(CoreError::empty_input("no posts"));
    }
    Ok(posts)
}

/// Writes posts as newline-delimited JSON; the exact inverse of [`read_posts`].
pub fn write_posts<W: Write>(mut writer: W, posts: &[Post]) -> Result<()> {
    for post in posts {
        serde_json::to_writer(&mut writer, post).map_err(|e| CoreError::MalformedRecord {
            line: 0,
            message: e.to_string(),
        })?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
