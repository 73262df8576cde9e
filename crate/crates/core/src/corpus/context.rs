//! Ancestral and user contexts of focal comments.

use std::collections::HashMap;

use crate::{CoreError, Result};

use super::{Corpus, Topic, DELETED_AUTHOR};

/// Which history a context summarizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ContextKind {
    /// The n nearest ancestors of the focal comment.
    Ancestral,
    /// The parents of the focal comment and of the author's n-1 most recent
    /// prior same-topic comments.
    User,
}

impl ContextKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ContextKind::Ancestral => "ancestral",
            ContextKind::User => "user",
        }
    }
}

/// Sentiment context of one focal comment.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub kind: ContextKind,
    /// Nearest-first for ancestral contexts; focal parent first, then parents
    /// of the most recent prior comments, for user contexts. The prefix of
    /// length k is exactly the size-k context.
    pub member_sentiments: Vec<f64>,
    pub mean_sentiment: f64,
}

impl Context {
    fn new(kind: ContextKind, member_sentiments: Vec<f64>) -> Self {
        let mean = member_sentiments.iter().sum::<f64>() / member_sentiments.len() as f64;
        Context { kind, member_sentiments, mean_sentiment: mean }
    }

    pub fn size(&self) -> usize {
        self.member_sentiments.len()
    }

    /// Mean of the first k members (the size-k sub-context).
    pub fn prefix_mean(&self, k: usize) -> f64 {
        self.member_sentiments[..k].iter().sum::<f64>() / k as f64
    }
}

/// A focal comment that owns both context kinds at the requested size.
#[derive(Debug, Clone)]
pub struct ContextPair {
    pub focal: usize,
    pub focal_sentiment: f64,
    pub topic: Topic,
    pub ancestral: Context,
    pub user: Context,
}

/// Why focal comments were skipped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ContextSkips {
    pub focal_without_sentiment: usize,
    pub too_few_ancestors: usize,
    pub ancestor_without_sentiment: usize,
    pub too_little_history: usize,
    pub prior_parent_without_sentiment: usize,
    pub deleted_author: usize,
}

/// Result of [`build_contexts`].
#[derive(Debug, Clone)]
pub struct ContextBuild {
    pub n: usize,
    pub pairs: Vec<ContextPair>,
    pub skips: ContextSkips,
}

/// Builds, for every eligible focal comment on a measure topic, its ancestral
/// and user contexts of size `n`. Ineligible comments are skipped and counted.
pub fn build_contexts(corpus: &Corpus, n: usize) -> Result<ContextBuild> {
    if n == 0 {
        return Err(CoreError::invalid_argument("context size must be at least 1"));
    }

    // Per (author, topic): comment indices ordered by (created_utc, id).
    let mut history: HashMap<(&str, Topic), Vec<usize>> = HashMap::new();
    for (i, p) in corpus.posts().iter().enumerate() {
        if !p.is_submission && p.topic.is_measure() && p.author != DELETED_AUTHOR {
            history.entry((p.author.as_str(), p.topic)).or_default().push(i);
        }
    }
    for list in history.values_mut() {
        list.sort_by_key(|&i| (corpus.post(i).created_utc, corpus.post(i).id.clone()));
    }

    let mut pairs = Vec::new();
    let mut skips = ContextSkips::default();

    'focal: for (i, p) in corpus.posts().iter().enumerate() {
        if p.is_submission || !p.topic.is_measure() {
            continue;
        }
        if p.author == DELETED_AUTHOR {
            skips.deleted_author += 1;
            continue;
        }
        let Some(focal_sentiment) = p.sentiment else {
            skips.focal_without_sentiment += 1;
            continue;
        };

        let mut ancestral = Vec::with_capacity(n);
        for a in corpus.ancestors(i) {
            match corpus.post(a).sentiment {
                Some(s) => ancestral.push(s),
                None => {
                    skips.ancestor_without_sentiment += 1;
                    continue 'focal;
                }
            }
            if ancestral.len() == n {
                break;
            }
        }
        if ancestral.len() < n {
            skips.too_few_ancestors += 1;
            continue;
        }

        let own = &history[&(p.author.as_str(), p.topic)];
        let pos = own.binary_search_by_key(&(p.created_utc, p.id.clone()), |&j| {
            (corpus.post(j).created_utc, corpus.post(j).id.clone())
        });
        let pos = pos.expect("focal comment present in its own history");
        if pos < n - 1 {
            skips.too_little_history += 1;
            continue;
        }
        // Focal parent first (it already passed the sentiment check above as
        // the nearest ancestor), then parents of the most recent priors.
        let mut user = Vec::with_capacity(n);
        user.push(ancestral[0]);
        for &j in own[pos - (n - 1)..pos].iter().rev() {
            let parent = corpus.parent_of(j).expect("comment has parent");
            match corpus.post(parent).sentiment {
                Some(s) => user.push(s),
                None => {
                    skips.prior_parent_without_sentiment += 1;
                    continue 'focal;
                }
            }
        }

        pairs.push(ContextPair {
            focal: i,
            focal_sentiment,
            topic: p.topic,
            ancestral: Context::new(ContextKind::Ancestral, ancestral),
            user: Context::new(ContextKind::User, user),
        });
    }

    Ok(ContextBuild { n, pairs, skips })
}
