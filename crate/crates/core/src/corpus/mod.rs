//! Corpus ingestion and thread reconstruction.
//!
//! A corpus is an immutable forest of thread trees built from newline-delimited
//! JSON post records. Construction validates structure (one root per thread,
//! no dangling parents, no cycles), after which the corpus is shared read-only
//! by every analysis.
//!
//! The processing pipeline mirrors the upstream data preparation: submissions
//! that are `not_applicable` along with (nearly) all of their comments are
//! dropped first, then unresolved comment topics inherit from their parents in
//! a single top-down pass.

mod context;
mod post;
mod segment;
mod timeline;

pub use context::{build_contexts, Context, ContextBuild, ContextKind, ContextPair, ContextSkips};
pub use post::{combine_sentiment, read_posts, write_posts, Post, Topic, DELETED_AUTHOR, MEASURE_TOPICS};
pub use segment::{build_sequences, segment_discussions, Discussion, DiscussionSequence, Role, SeqLabel, Segmentation};
pub use timeline::{build_timelines, TimelineBuild, TimelineEvent, TimelineStats, UserTimeline};

use std::collections::HashMap;

use crate::{CoreError, Result};

/// Maximum number of offending ids echoed in structural error messages.
const ERROR_ID_SAMPLE: usize = 8;

/// An immutable, validated forest of discussion threads.
///
/// Posts are stored in ingest order; structural relations are index-based.
/// Children and roots are ordered by `(created_utc, id)` so every traversal
/// is deterministic.
#[derive(Debug, Clone)]
pub struct Corpus {
    posts: Vec<Post>,
    by_id: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
    depth: Vec<u32>,
}

impl Corpus {
    /// Builds and validates the forest from a list of posts.
    pub fn build(posts: Vec<Post>) -> Result<Self> {
        if posts.is_empty() {
            return Err(CoreError::empty_input("no posts"));
        }
        let mut by_id = HashMap::with_capacity(posts.len());
        for (i, p) in posts.iter().enumerate() {
            p.validate()?;
            if by_id.insert(p.id.clone(), i).is_some() {
                return Err(CoreError::DuplicateId { id: p.id.clone() });
            }
        }

        let mut parent = vec![None; posts.len()];
        let mut dangling = Vec::new();
        for (i, p) in posts.iter().enumerate() {
            if let Some(pid) = &p.parent_id {
                match by_id.get(pid) {
                    Some(&j) => parent[i] = Some(j),
                    None => dangling.push(p.id.clone()),
                }
            }
        }
        if !dangling.is_empty() {
            dangling.sort();
            let count = dangling.len();
            dangling.truncate(ERROR_ID_SAMPLE);
            return Err(CoreError::DanglingParents { count, sample: dangling });
        }

        let mut children: Vec<Vec<usize>> = vec![Vec::new(); posts.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(j) = p {
                children[*j].push(i);
            }
        }
        let sort_key = |&i: &usize| (posts[i].created_utc, posts[i].id.clone());
        for c in &mut children {
            c.sort_by_key(sort_key);
        }
        let mut roots: Vec<usize> = (0..posts.len()).filter(|&i| posts[i].is_submission).collect();
        roots.sort_by_key(sort_key);

        // Depth assignment doubles as the reachability check: a comment not
        // reached from any submission sits on a cycle or a detached chain.
        let mut depth = vec![u32::MAX; posts.len()];
        let mut stack: Vec<usize> = Vec::new();
        for &r in &roots {
            depth[r] = 0;
            stack.push(r);
            while let Some(i) = stack.pop() {
                for &c in &children[i] {
                    depth[c] = depth[i] + 1;
                    stack.push(c);
                }
            }
        }
        let mut unreachable: Vec<String> = (0..posts.len())
            .filter(|&i| depth[i] == u32::MAX)
            .map(|i| posts[i].id.clone())
            .collect();
        if !unreachable.is_empty() {
            unreachable.sort();
            let count = unreachable.len();
            unreachable.truncate(ERROR_ID_SAMPLE);
            return Err(CoreError::UnreachablePosts { count, sample: unreachable });
        }

        Ok(Corpus { posts, by_id, parent, children, roots, depth })
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }

    pub fn posts(&self) -> &[Post] {
        &self.posts
    }

    pub fn post(&self, idx: usize) -> &Post {
        &self.posts[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn parent_of(&self, idx: usize) -> Option<usize> {
        self.parent[idx]
    }

    pub fn children_of(&self, idx: usize) -> &[usize] {
        &self.children[idx]
    }

    /// Thread roots (submissions), ordered by `(created_utc, id)`.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn depth(&self, idx: usize) -> u32 {
        self.depth[idx]
    }

    /// Iterates a thread's posts in depth-first preorder (children ordered by
    /// `(created_utc, id)`).
    pub fn thread_preorder(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            order.push(i);
            // Reverse push keeps children in ascending order on a LIFO stack.
            for &c in self.children[i].iter().rev() {
                stack.push(c);
            }
        }
        order
    }

    /// Ancestors of a post, nearest first, ending at the submission.
    pub fn ancestors(&self, idx: usize) -> AncestorIter<'_> {
        AncestorIter { corpus: self, current: self.parent[idx] }
    }

    /// Drops threads whose submission is `not_applicable` and at least the
    /// given fraction of whose comments are `not_applicable` too.
    ///
    /// Runs on raw labels, before topic inheritance. A comment-free
    /// `not_applicable` submission is removed (its comment share is vacuously
    /// total). Returns the surviving corpus and the removal counts.
    pub fn filter_na_submissions(self, min_na_fraction: f64) -> Result<(Corpus, FilterReport)> {
        let mut drop_thread = vec![false; self.roots.len()];
        for (t, &root) in self.roots.iter().enumerate() {
            if self.posts[root].topic != Topic::NotApplicable {
                continue;
            }
            let members = self.thread_preorder(root);
            let comments = members.len() - 1;
            let na_comments = members
                .iter()
                .filter(|&&i| i != root && self.posts[i].topic == Topic::NotApplicable)
                .count();
            let frac = if comments == 0 { 1.0 } else { na_comments as f64 / comments as f64 };
            drop_thread[t] = frac >= min_na_fraction;
        }

        let mut keep = vec![true; self.posts.len()];
        let mut removed_threads = 0usize;
        let mut removed_posts = 0usize;
        for (t, &root) in self.roots.iter().enumerate() {
            if drop_thread[t] {
                removed_threads += 1;
                for i in self.thread_preorder(root) {
                    keep[i] = false;
                    removed_posts += 1;
                }
            }
        }
        let surviving: Vec<Post> = self
            .posts
            .into_iter()
            .enumerate()
            .filter_map(|(i, p)| keep[i].then_some(p))
            .collect();
        if surviving.is_empty() {
            return Err(CoreError::empty_input("all threads removed by the not-applicable filter"));
        }
        let report = FilterReport { removed_threads, removed_posts };
        Ok((Corpus::build(surviving)?, report))
    }

    /// Resolves comment topics top-down: a comment labelled `other` or
    /// `not_applicable` takes the already-resolved topic of its parent.
    /// Submissions never change, so inheritance is transitive by construction.
    pub fn inherit_topics(mut self) -> Corpus {
        for root in self.roots.clone() {
            for i in self.thread_preorder(root) {
                if i == root {
                    continue;
                }
                if matches!(self.posts[i].topic, Topic::Other | Topic::NotApplicable) {
                    let parent_topic = self.posts[self.parent[i].expect("comment has parent")].topic;
                    self.posts[i].topic = parent_topic;
                }
            }
        }
        self
    }

    /// Sentiments of the corpus posts on a topic; optionally submissions too.
    pub fn sentiments(&self, topic: Topic, include_submissions: bool) -> Vec<f64> {
        self.posts
            .iter()
            .filter(|p| p.topic == topic && (include_submissions || !p.is_submission))
            .filter_map(|p| p.sentiment)
            .collect()
    }

    /// Comment-parent sentiment pairs on a topic: every comment whose own and
    /// parent sentiment are both present.
    pub fn comment_parent_pairs(&self, topic: Topic) -> Vec<(f64, f64)> {
        let mut pairs = Vec::new();
        for (i, p) in self.posts.iter().enumerate() {
            if p.is_submission || p.topic != topic {
                continue;
            }
            let (Some(s), Some(parent)) = (p.sentiment, self.parent[i]) else { continue };
            if let Some(sp) = self.posts[parent].sentiment {
                pairs.push((s, sp));
            }
        }
        pairs
    }
}

/// Iterator over a post's ancestors, nearest first.
pub struct AncestorIter<'a> {
    corpus: &'a Corpus,
    current: Option<usize>,
}

impl Iterator for AncestorIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let i = self.current?;
        self.current = self.corpus.parent[i];
        Some(i)
    }
}

/// Counts from the not-applicable submission filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterReport {
    pub removed_threads: usize,
    pub removed_posts: usize,
}


#[cfg(test)]
mod tests {
    use super::testutil::post;
    use super::*;

    #[test]
    fn build_rejects_dangling_parent() {
        let posts = vec![
            post("s1", None, "a", 0, Topic::Lockdown, None),
            post("c1", Some("missing"), "b", 1, Topic::Lockdown, None),
        ];
        match Corpus::build(posts) {
            Err(CoreError::DanglingParents { count, sample }) => {
                assert_eq!(count, 1);
                assert_eq!(sample, vec!["c1".to_string()]);
            }
            other => panic!("expected dangling-parent error, got {other:?}"),
        }
    }

    #[test]
    fn build_rejects_cycles() {
        let mut a = post("c1", Some("c2"), "a", 1, Topic::Mask, None);
        a.is_submission = false;
        let mut b = post("c2", Some("c1"), "b", 2, Topic::Mask, None);
        b.is_submission = false;
        let posts = vec![post("s1", None, "a", 0, Topic::Mask, None), a, b];
        assert!(matches!(Corpus::build(posts), Err(CoreError::UnreachablePosts { count: 2, .. })));
    }

    #[test]
    fn depth_and_children_ordering() {
        let posts = vec![
            post("s1", None, "a", 0, Topic::Lockdown, None),
            post("c2", Some("s1"), "b", 5, Topic::Lockdown, None),
            post("c1", Some("s1"), "c", 5, Topic::Lockdown, None),
            post("c3", Some("c1"), "d", 6, Topic::Lockdown, None),
        ];
        let corpus = Corpus::build(posts).unwrap();
        let root = corpus.roots()[0];
        assert_eq!(corpus.depth(root), 0);
        // Equal timestamps break ties by id.
        let kids: Vec<&str> = corpus.children_of(root).iter().map(|&i| corpus.post(i).id.as_str()).collect();
        assert_eq!(kids, vec!["c1", "c2"]);
        let c3 = corpus.index_of("c3").unwrap();
        assert_eq!(corpus.depth(c3), 2);
        let chain: Vec<&str> = corpus.ancestors(c3).map(|i| corpus.post(i).id.as_str()).collect();
        assert_eq!(chain, vec!["c1", "s1"]);
    }

    #[test]
    fn na_filter_applies_threshold() {
        // Thread A: NA submission, 10/10 NA comments -> removed.
        let mut posts = vec![post("a0", None, "x", 0, Topic::NotApplicable, None)];
        for i in 0..10 {
            posts.push(post(&format!("a{}", i + 1), Some("a0"), "x", 1 + i, Topic::NotApplicable, None));
        }
        // Thread B: NA submission, 17/20 NA comments (85%) -> kept.
        posts.push(post("b0", None, "x", 100, Topic::NotApplicable, None));
        for i in 0..20 {
            let topic = if i < 3 { Topic::Mask } else { Topic::NotApplicable };
            posts.push(post(&format!("b{}", i + 1), Some("b0"), "x", 101 + i, topic, None));
        }
        // Thread C: lockdown submission, all comments NA -> kept.
        posts.push(post("c0", None, "x", 200, Topic::Lockdown, None));
        for i in 0..5 {
            posts.push(post(&format!("c{}", i + 1), Some("c0"), "x", 201 + i, Topic::NotApplicable, None));
        }
        let corpus = Corpus::build(posts).unwrap();
        let (kept, report) = corpus.filter_na_submissions(0.9).unwrap();
        assert_eq!(report.removed_threads, 1);
        assert_eq!(report.removed_posts, 11);
        assert!(kept.index_of("a0").is_none());
        assert!(kept.index_of("b0").is_some());
        assert!(kept.index_of("c0").is_some());
    }

    #[test]
    fn na_filter_removes_comment_free_na_submission() {
        let posts = vec![
            post("s1", None, "x", 0, Topic::NotApplicable, None),
            post("s2", None, "x", 1, Topic::Mask, None),
        ];
        let corpus = Corpus::build(posts).unwrap();
        let (kept, report) = corpus.filter_na_submissions(0.9).unwrap();
        assert_eq!(report.removed_threads, 1);
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn inherit_resolves_top_down_and_transitively() {
        let posts = vec![
            post("s", None, "x", 0, Topic::Mask, None),
            post("c1", Some("s"), "x", 1, Topic::NotApplicable, None),
            post("c2", Some("c1"), "x", 2, Topic::Other, None),
            post("c3", Some("c2"), "x", 3, Topic::Vaccination, None),
            post("c4", Some("c3"), "x", 4, Topic::NotApplicable, None),
        ];
        let corpus = Corpus::build(posts).unwrap().inherit_topics();
        let topic = |id: &str| corpus.post(corpus.index_of(id).unwrap()).topic;
        assert_eq!(topic("c1"), Topic::Mask);
        assert_eq!(topic("c2"), Topic::Mask);
        // A specific topic blocks inheritance and seeds its own subtree.
        assert_eq!(topic("c3"), Topic::Vaccination);
        assert_eq!(topic("c4"), Topic::Vaccination);
    }

    #[test]
    fn inherit_keeps_na_under_na_submission() {
        let posts = vec![
            post("s", None, "x", 0, Topic::NotApplicable, None),
            post("c1", Some("s"), "x", 1, Topic::Other, None),
        ];
        let corpus = Corpus::build(posts).unwrap().inherit_topics();
        assert_eq!(corpus.post(corpus.index_of("c1").unwrap()).topic, Topic::NotApplicable);
    }
}
