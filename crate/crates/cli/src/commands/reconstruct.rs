//! `siebc reconstruct`: rebuild the daily internal-sentiment panel from
//! persisted posterior draws.

use std::collections::BTreeMap;
use std::path::Path;

use siebc_core::corpus::{build_timelines, Topic, UserTimeline};
use siebc_core::siebc::{reconstruct_internal, PosteriorDraws, UserDraws};

use crate::commands::{load_cache, load_timelines, timelines_by_topic};
use crate::config::RunConfig;
use crate::report::{fmt_f64, CsvWriter, Manifest};
use crate::CliError;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let by_topic: BTreeMap<Topic, Vec<UserTimeline>> = match &config.timelines {
        Some(path) => timelines_by_topic(load_timelines(path)?).into_iter().collect(),
        None => {
            let corpus = load_cache(config)?;
            let mut map = BTreeMap::new();
            for &topic in &config.topics {
                map.insert(topic, build_timelines(&corpus, topic, config.min_comments)?.timelines);
            }
            map
        }
    };

    let mut manifest = Manifest::new(
        "reconstruct",
        config.seed,
        serde_json::json!({ "min_comments": config.min_comments }),
    );
    let mut produced = false;
    for &topic in &config.topics {
        let draws_path = config.out.join(format!("{topic}_draws.csv"));
        let traj_path = config.out.join(format!("{topic}_trajectories.csv"));
        if !draws_path.exists() || !traj_path.exists() {
            continue;
        }
        let Some(timelines) = by_topic.get(&topic) else { continue };
        let draws = read_draws(config, &draws_path, &traj_path)?;
        let daily = reconstruct_internal(&draws, timelines)?;

        let out_path = config.out.join(format!("{topic}_internal_daily.csv"));
        let mut csv = CsvWriter::create(&out_path, "date,median,q1,q3,n_users")?;
        for d in &daily {
            csv.row(&format!(
                "{},{},{},{},{}",
                d.date,
                fmt_f64(d.median),
                fmt_f64(d.q1),
                fmt_f64(d.q3),
                d.n_users
            ))?;
        }
        csv.finish()?;
        manifest.add(&out_path);
        produced = true;
        println!("{topic}: {} day(s) reconstructed", daily.len());
    }
    if !produced {
        return Err(CliError::data(format!(
            "no persisted draws found in {}; run `siebc fit` first",
            config.out.display()
        )));
    }
    manifest.write(&config.out, "reconstruct_manifest.json")?;
    Ok(())
}

/// Reads the draws and trajectory CSVs written by `fit` back into memory.
fn read_draws(
    config: &RunConfig,
    draws_path: &Path,
    traj_path: &Path,
) -> Result<PosteriorDraws, CliError> {
    let parse_err =
        |path: &Path, line: usize, what: &str| CliError::data(format!("{}:{line}: {what}", path.display()));

    // user -> (chain, draw) -> params
    let mut params: BTreeMap<String, BTreeMap<(usize, usize), [f64; 5]>> = BTreeMap::new();
    let text = std::fs::read_to_string(draws_path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", draws_path.display())))?;
    for (i, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(parse_err(draws_path, i + 1, "expected 8 fields"));
        }
        let chain: usize =
            fields[1].parse().map_err(|_| parse_err(draws_path, i + 1, "bad chain"))?;
        let draw: usize =
            fields[2].parse().map_err(|_| parse_err(draws_path, i + 1, "bad draw"))?;
        let mut row = [0.0; 5];
        for (k, f) in fields[3..8].iter().enumerate() {
            row[k] = f.parse().map_err(|_| parse_err(draws_path, i + 1, "bad value"))?;
        }
        params.entry(fields[0].to_string()).or_default().insert((chain, draw), row);
    }

    // user -> (chain, draw) -> trajectory
    let mut latents: BTreeMap<String, BTreeMap<(usize, usize), Vec<f64>>> = BTreeMap::new();
    let text = std::fs::read_to_string(traj_path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", traj_path.display())))?;
    for (i, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(traj_path, i + 1, "expected 5 fields"));
        }
        let chain: usize =
            fields[1].parse().map_err(|_| parse_err(traj_path, i + 1, "bad chain"))?;
        let draw: usize = fields[2].parse().map_err(|_| parse_err(traj_path, i + 1, "bad draw"))?;
        let idx: usize =
            fields[3].parse().map_err(|_| parse_err(traj_path, i + 1, "bad event index"))?;
        let u: f64 = fields[4].parse().map_err(|_| parse_err(traj_path, i + 1, "bad u"))?;
        let traj = latents.entry(fields[0].to_string()).or_default().entry((chain, draw)).or_default();
        if traj.len() != idx {
            return Err(parse_err(traj_path, i + 1, "event indices out of order"));
        }
        traj.push(u);
    }

    let mut users = Vec::new();
    for (user, rows) in params {
        let chains = rows.keys().map(|&(c, _)| c).max().unwrap_or(0) + 1;
        let draws_per_chain = rows.keys().map(|&(_, d)| d).max().unwrap_or(0) + 1;
        if rows.len() != chains * draws_per_chain {
            return Err(CliError::data(format!("incomplete draw grid for user `{user}`")));
        }
        let lat_rows = latents
            .remove(&user)
            .ok_or_else(|| CliError::data(format!("no trajectories for user `{user}`")))?;
        if lat_rows.len() != chains * draws_per_chain {
            return Err(CliError::data(format!("incomplete trajectories for user `{user}`")));
        }
        let mut param_vec = Vec::with_capacity(chains * draws_per_chain);
        let mut latent_vec = Vec::with_capacity(chains * draws_per_chain);
        let mut n_events = None;
        for c in 0..chains {
            for d in 0..draws_per_chain {
                param_vec.push(rows[&(c, d)]);
                let traj = &lat_rows[&(c, d)];
                match n_events {
                    None => n_events = Some(traj.len() - 1),
                    Some(n) if n + 1 == traj.len() => {}
                    _ => {
                        return Err(CliError::data(format!(
                            "inconsistent trajectory lengths for user `{user}`"
                        )))
                    }
                }
                latent_vec.push(traj.clone());
            }
        }
        users.push(UserDraws {
            user,
            n_events: n_events.unwrap_or(0),
            chains,
            draws_per_chain,
            params: param_vec,
            latents: latent_vec,
            rhat: [f64::NAN; 5],
            acceptance: f64::NAN,
        });
    }
    Ok(PosteriorDraws {
        users,
        config: super::fit::sampler_config(config),
        priors: super::fit::priors(config),
        seed: config.seed,
        warnings: Vec::new(),
    })
}
