//! `siebc ingest`: validate, filter, resolve topics, write the corpus cache.

use std::collections::BTreeMap;
use std::io::BufReader;

use serde::Serialize;
use siebc_core::corpus::{read_posts, write_posts, Corpus, Topic, DELETED_AUTHOR, MEASURE_TOPICS};

use crate::config::RunConfig;
use crate::report::write_json;
use crate::CliError;

#[derive(Debug, Serialize)]
struct TopicCounts {
    users: usize,
    comments: usize,
    submissions: usize,
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    total: TopicCounts,
    per_topic: BTreeMap<String, TopicCounts>,
    removed_threads: usize,
    removed_posts: usize,
}

fn counts(corpus: &Corpus, topic: Option<Topic>) -> TopicCounts {
    let mut users = std::collections::HashSet::new();
    let mut comments = 0;
    let mut submissions = 0;
    for p in corpus.posts() {
        if topic.is_some_and(|t| p.topic != t) {
            continue;
        }
        if p.author != DELETED_AUTHOR {
            users.insert(p.author.as_str());
        }
        if p.is_submission {
            submissions += 1;
        } else {
            comments += 1;
        }
    }
    TopicCounts { users: users.len(), comments, submissions }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let input = config
        .corpus
        .as_ref()
        .ok_or_else(|| CliError::usage("ingest needs `corpus=PATH` in the config"))?;
    let file = std::fs::File::open(input)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", input.display())))?;
    let posts = read_posts(BufReader::new(file))?;

    let corpus = Corpus::build(posts)?;
    let (corpus, report) = corpus.filter_na_submissions(config.na_filter_fraction)?;
    let corpus = corpus.inherit_topics();

    let cache = config.cache_path();
    let out = std::fs::File::create(&cache)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", cache.display())))?;
    write_posts(std::io::BufWriter::new(out), corpus.posts())?;

    let mut per_topic = BTreeMap::new();
    for &topic in &MEASURE_TOPICS {
        per_topic.insert(topic.to_string(), counts(&corpus, Some(topic)));
    }
    let summary = IngestSummary {
        total: counts(&corpus, None),
        per_topic,
        removed_threads: report.removed_threads,
        removed_posts: report.removed_posts,
    };
    write_json(&config.out.join("ingest_summary.json"), &summary)?;

    println!("{:>14}  {:>8}  {:>9}  {:>11}", "", "users", "comments", "submissions");
    println!(
        "{:>14}  {:>8}  {:>9}  {:>11}",
        "total", summary.total.users, summary.total.comments, summary.total.submissions
    );
    for (name, c) in &summary.per_topic {
        println!("{:>14}  {:>8}  {:>9}  {:>11}", name, c.users, c.comments, c.submissions);
    }
    println!(
        "removed {} not-applicable thread(s) ({} posts); cache: {}",
        summary.removed_threads,
        summary.removed_posts,
        cache.display()
    );
    Ok(())
}
