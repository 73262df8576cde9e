//! Timeline preprocessing shared by simulation and calibration.

use crate::corpus::{TimelineEvent, UserTimeline};

/// One own-comment observation together with the interactions absorbed since
/// the previous own comment.
#[derive(Debug, Clone, PartialEq)]
pub struct OwnCommentBlock {
    pub t: i64,
    pub parent_sentiment: f64,
    pub expressed_sentiment: f64,
    /// Reply sentiments received since the previous own comment, in time
    /// order, with the parent sentiment appended last (the parent is read at
    /// posting time).
    pub interactions: Vec<f64>,
}

/// Splits a timeline into own-comment blocks. Replies received after the
/// final own comment are dropped: they can never influence an observation.
pub fn interaction_blocks(timeline: &UserTimeline) -> Vec<OwnCommentBlock> {
    let mut blocks = Vec::with_capacity(timeline.own_comment_count());
    let mut pending: Vec<f64> = Vec::new();
    for event in &timeline.events {
        match *event {
            TimelineEvent::ReplyReceived { sentiment, .. } => pending.push(sentiment),
            TimelineEvent::OwnComment { t, parent_sentiment, expressed_sentiment } => {
                let mut interactions = std::mem::take(&mut pending);
                interactions.push(parent_sentiment);
                blocks.push(OwnCommentBlock {
                    t,
                    parent_sentiment,
                    expressed_sentiment,
                    interactions,
                });
            }
        }
    }
    blocks
}
