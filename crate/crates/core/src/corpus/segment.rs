//! Discussion segmentation and per-user initiation/participation sequences.
//!
//! A post on a measure topic is *initiating* when no ancestor carries the
//! same topic, *participating* otherwise. A discussion is the set of
//! same-topic posts linked through nearest-same-topic-ancestor chains to one
//! initiating post, so a thread can host several discussions and a topical
//! chain interrupted by another topic resumes the interrupted discussion.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Corpus, Topic, DELETED_AUTHOR, MEASURE_TOPICS};

/// Role of a post inside its discussion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Initiating,
    Participating,
}

/// One discussion: a measure topic plus its unique initiating post.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discussion {
    pub topic: Topic,
    pub initiating_post: usize,
    pub thread_root: usize,
}

/// Discussion assignment for every post of a corpus.
#[derive(Debug, Clone)]
pub struct Segmentation {
    /// Per post index: the discussion it belongs to and its role, when the
    /// post carries a measure topic.
    pub assignment: Vec<Option<(usize, Role)>>,
    pub discussions: Vec<Discussion>,
}

fn measure_slot(topic: Topic) -> Option<usize> {
    MEASURE_TOPICS.iter().position(|&t| t == topic)
}

/// Assigns every measure-topic post to a discussion.
///
/// Topics must be resolved first (see [`Corpus::inherit_topics`]). Traversal
/// is depth-first with children in `(created_utc, id)` order, so discussion
/// ids are deterministic.
pub fn segment_discussions(corpus: &Corpus) -> Segmentation {
    let mut assignment = vec![None; corpus.len()];
    let mut discussions = Vec::new();

    for &root in corpus.roots() {
        // Per measure topic, the discussion open on the current root path.
        let mut stack: Vec<(usize, [Option<usize>; 3])> = vec![(root, [None; 3])];
        while let Some((i, mut open)) = stack.pop() {
            if let Some(slot) = measure_slot(corpus.post(i).topic) {
                let (disc, role) = match open[slot] {
                    Some(d) => (d, Role::Participating),
                    None => {
                        discussions.push(Discussion {
                            topic: corpus.post(i).topic,
                            initiating_post: i,
                            thread_root: root,
                        });
                        (discussions.len() - 1, Role::Initiating)
                    }
                };
                assignment[i] = Some((disc, role));
                open[slot] = Some(disc);
            }
            for &c in corpus.children_of(i).iter().rev() {
                stack.push((c, open));
            }
        }
    }

    Segmentation { assignment, discussions }
}

/// Label of one discussion inside a user's sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeqLabel {
    Initiation,
    Participation,
}

/// Per user, per topic: the time-ordered labels of the discussions taken part in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscussionSequence {
    pub user: String,
    pub topic: Topic,
    /// Ordered by the timestamp of the user's first post in each discussion.
    pub labels: Vec<SeqLabel>,
    pub n_initiations: usize,
    pub n_participations: usize,
}

impl DiscussionSequence {
    /// 1-based position of the first initiation, if any.
    pub fn first_initiation_position(&self) -> Option<usize> {
        self.labels.iter().position(|&l| l == SeqLabel::Initiation).map(|p| p + 1)
    }
}

/// Builds per-(user, topic) discussion sequences.
///
/// A user appears once per discussion regardless of comment count; entries
/// are ordered by the user's first post in each discussion (ties by post id).
/// The deleted-author sentinel is excluded. Output is sorted by (topic, user).
pub fn build_sequences(corpus: &Corpus, segmentation: &Segmentation) -> Vec<DiscussionSequence> {
    // (author, discussion) -> first post key of that author in the discussion.
    let mut first_post: HashMap<(&str, usize), (i64, &str)> = HashMap::new();
    for (i, slot) in segmentation.assignment.iter().enumerate() {
        let Some((disc, _)) = slot else { continue };
        let post = corpus.post(i);
        if post.author == DELETED_AUTHOR {
            continue;
        }
        let key = (post.author.as_str(), *disc);
        let candidate = (post.created_utc, post.id.as_str());
        first_post
            .entry(key)
            .and_modify(|cur| {
                if candidate < *cur {
                    *cur = candidate;
                }
            })
            .or_insert(candidate);
    }

    let mut grouped: HashMap<(&str, Topic), Vec<(i64, &str, usize)>> = HashMap::new();
    for (&(author, disc), &(t, id)) in &first_post {
        let topic = segmentation.discussions[disc].topic;
        grouped.entry((author, topic)).or_default().push((t, id, disc));
    }

    let mut sequences: Vec<DiscussionSequence> = grouped
        .into_iter()
        .map(|((author, topic), mut entries)| {
            entries.sort();
            let labels: Vec<SeqLabel> = entries
                .iter()
                .map(|&(_, _, disc)| {
                    let initiator = corpus.post(segmentation.discussions[disc].initiating_post).author.as_str();
                    if initiator == author {
                        SeqLabel::Initiation
                    } else {
                        SeqLabel::Participation
                    }
                })
                .collect();
            let n_initiations = labels.iter().filter(|&&l| l == SeqLabel::Initiation).count();
            let n_participations = labels.len() - n_initiations;
            DiscussionSequence {
                user: author.to_string(),
                topic,
                labels,
                n_initiations,
                n_participations,
            }
        })
        .collect();
    sequences.sort_by(|a, b| (a.topic, &a.user).cmp(&(b.topic, &b.user)));
    sequences
}
