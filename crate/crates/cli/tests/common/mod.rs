//! Shared helpers for the integration and acceptance suites.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;

/// Small deterministic generator so fixtures need no RNG dependency.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

struct PostLine {
    parent: Option<usize>,
    author: String,
    t: i64,
    topic: &'static str,
    sentiment: Option<f64>,
    score: i64,
}

/// Writes a deterministic discussion corpus: several threads per topic with
/// a handful of chatty users, sentiments present on most posts.
pub fn write_fixture_corpus(path: &Path, seed: u64) {
    let topics = ["lockdown", "mask", "vaccination", "not_applicable"];
    let mut rng = Lcg(seed);
    let mut lines: Vec<PostLine> = Vec::new();

    const DAY: i64 = 86_400;
    let base = 1_580_000_000i64;
    for thread in 0..15 {
        let topic = topics[thread % topics.len()];
        let t0 = base + thread as i64 * 2 * DAY + rng.below(10_000) as i64;
        lines.push(PostLine {
            parent: None,
            author: format!("user{}", rng.below(10)),
            t: t0,
            topic,
            sentiment: Some(quant(rng.range(-1.0, 1.0))),
            score: rng.below(20) as i64 - 3,
        });
        let root = lines.len() - 1;
        let mut frontier = vec![root];
        for depth in 0..5i64 {
            let mut next = Vec::new();
            for &parent in &frontier {
                let n_children = 1 + rng.below(2);
                for _ in 0..n_children {
                    // Users 0..3 are the chatty ones the fit selects.
                    let author = if rng.unit() < 0.7 {
                        format!("user{}", rng.below(4))
                    } else {
                        format!("user{}", rng.below(10))
                    };
                    let child_topic = if rng.unit() < 0.75 { topic } else { topics[rng.below(3)] };
                    let sentiment =
                        if rng.unit() < 0.92 { Some(quant(rng.range(-1.0, 1.0))) } else { None };
                    lines.push(PostLine {
                        parent: Some(parent),
                        author,
                        t: t0 + (depth + 1) * 900 + rng.below(600) as i64,
                        topic: child_topic,
                        sentiment,
                        score: rng.below(20) as i64 - 3,
                    });
                    next.push(lines.len() - 1);
                }
            }
            frontier = next;
        }
    }

    let mut out = String::new();
    for (i, line) in lines.iter().enumerate() {
        let parent_json = match line.parent {
            Some(p) => format!("\"p{p:05}\""),
            None => "null".to_string(),
        };
        let sentiment_json = match line.sentiment {
            Some(s) => format!("{s}"),
            None => "null".to_string(),
        };
        writeln!(
            out,
            "{{\"id\":\"p{i:05}\",\"parent_id\":{parent_json},\"author\":\"{}\",\"created_utc\":{},\"score\":{},\"topic\":\"{}\",\"sentiment\":{sentiment_json},\"is_submission\":{}}}",
            line.author,
            line.t,
            line.score,
            line.topic,
            line.parent.is_none(),
        )
        .unwrap();
    }
    std::fs::write(path, out).unwrap();
}

/// Keeps fixture sentiments on a short-decimal grid (stable text round-trip).
fn quant(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Recursively collects relative paths of all files under a directory.
pub fn tree_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.push(path.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    files.sort();
    files
}

/// Asserts two directory trees are byte-identical.
pub fn assert_trees_identical(a: &Path, b: &Path) {
    let fa = tree_files(a);
    let fb = tree_files(b);
    assert_eq!(fa, fb, "different file sets under {} and {}", a.display(), b.display());
    for rel in fa {
        let ba = std::fs::read(a.join(&rel)).unwrap();
        let bb = std::fs::read(b.join(&rel)).unwrap();
        assert_eq!(ba, bb, "file {} differs", rel.display());
    }
}
