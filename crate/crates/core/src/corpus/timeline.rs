//! Per-user interaction timelines feeding the opinion model.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{CoreError, Result};

use super::{Corpus, Topic, DELETED_AUTHOR};

/// One event in a user's timeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimelineEvent {
    /// A comment the user wrote: the sentiment of its parent and the
    /// sentiment the user expressed.
    OwnComment { t: i64, parent_sentiment: f64, expressed_sentiment: f64 },
    /// A direct reply someone else made to one of the user's comments.
    ReplyReceived { t: i64, sentiment: f64 },
}

impl TimelineEvent {
    pub fn t(&self) -> i64 {
        match *self {
            TimelineEvent::OwnComment { t, .. } | TimelineEvent::ReplyReceived { t, .. } => t,
        }
    }
}

/// Time-ordered interaction events of one user on one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserTimeline {
    pub user: String,
    pub topic: Topic,
    pub events: Vec<TimelineEvent>,
}

impl UserTimeline {
    pub fn own_comment_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, TimelineEvent::OwnComment { .. })).count()
    }
}

/// Construction counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TimelineStats {
    /// Users meeting the comment threshold.
    pub eligible_users: usize,
    /// Eligible users dropped because no comment was usable as an observation.
    pub users_without_observations: usize,
    /// Topic comments excluded from own-comment events (own or parent
    /// sentiment missing).
    pub excluded_own_comments: usize,
}

/// Result of [`build_timelines`].
#[derive(Debug, Clone)]
pub struct TimelineBuild {
    pub timelines: Vec<UserTimeline>,
    pub stats: TimelineStats,
}

/// Builds the timeline of every user with at least `min_comments` comments on
/// `topic`.
///
/// Own-comment events need both the comment's and the parent's sentiment;
/// reply events need the reply's sentiment and exclude self-replies. Events
/// are ordered by `(t, post id)`. Users whose timeline would contain no
/// own-comment event are dropped (nothing observable remains).
pub fn build_timelines(corpus: &Corpus, topic: Topic, min_comments: usize) -> Result<TimelineBuild> {
    if min_comments == 0 {
        return Err(CoreError::invalid_argument("min_comments must be at least 1"));
    }

    let mut comment_counts: HashMap<&str, usize> = HashMap::new();
    for p in corpus.posts() {
        if !p.is_submission && p.topic == topic && p.author != DELETED_AUTHOR {
            *comment_counts.entry(p.author.as_str()).or_default() += 1;
        }
    }
    let mut eligible: Vec<&str> = comment_counts
        .iter()
        .filter_map(|(&a, &c)| (c >= min_comments).then_some(a))
        .collect();
    eligible.sort_unstable();
    let eligible_set: HashMap<&str, usize> =
        eligible.iter().enumerate().map(|(k, &a)| (a, k)).collect();

    let mut stats =
        TimelineStats { eligible_users: eligible.len(), ..TimelineStats::default() };

    // Per eligible user: (t, post id, event) for deterministic ordering.
    let mut events: Vec<Vec<(i64, &str, TimelineEvent)>> = vec![Vec::new(); eligible.len()];
    for (i, p) in corpus.posts().iter().enumerate() {
        if p.is_submission || p.topic != topic {
            continue;
        }
        let Some(&user_slot) = eligible_set.get(p.author.as_str()) else { continue };
        match (p.sentiment, corpus.parent_of(i).and_then(|j| corpus.post(j).sentiment)) {
            (Some(expressed), Some(parent_sentiment)) => {
                events[user_slot].push((
                    p.created_utc,
                    p.id.as_str(),
                    TimelineEvent::OwnComment {
                        t: p.created_utc,
                        parent_sentiment,
                        expressed_sentiment: expressed,
                    },
                ));
            }
            _ => stats.excluded_own_comments += 1,
        }
        // Direct replies to this comment, regardless of the reply's topic.
        for &r in corpus.children_of(i) {
            let reply = corpus.post(r);
            if reply.author == p.author {
                continue;
            }
            if let Some(s) = reply.sentiment {
                events[user_slot].push((
                    reply.created_utc,
                    reply.id.as_str(),
                    TimelineEvent::ReplyReceived { t: reply.created_utc, sentiment: s },
                ));
            }
        }
    }

    let mut timelines = Vec::new();
    for (slot, user) in eligible.iter().enumerate() {
        let mut evs = std::mem::take(&mut events[slot]);
        evs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let ordered: Vec<TimelineEvent> = evs.into_iter().map(|(_, _, e)| e).collect();
        if ordered.iter().any(|e| matches!(e, TimelineEvent::OwnComment { .. })) {
            timelines.push(UserTimeline { user: user.to_string(), topic, events: ordered });
        } else {
            stats.users_without_observations += 1;
        }
    }

    Ok(TimelineBuild { timelines, stats })
}
