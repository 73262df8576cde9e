//! `siebc fit`: calibrate the opinion model per topic, persist draws and
//! latent trajectories, and summarize fit quality.

use std::collections::BTreeMap;

use serde::Serialize;
use siebc_core::corpus::{build_timelines, Topic, UserTimeline};
use siebc_core::siebc::{
    column_stats, fit, kappa, posterior_predictive, PosteriorDraws, PredictiveConfig, Priors,
    SamplerConfig, PARAM_NAMES,
};

use crate::commands::{load_cache, load_timelines, timelines_by_topic};
use crate::config::RunConfig;
use crate::report::{csv_field, fmt_f64, write_json, CsvWriter, Manifest};
use crate::CliError;

pub fn sampler_config(config: &RunConfig) -> SamplerConfig {
    SamplerConfig {
        chains: config.chains,
        draws_per_chain: config.draws,
        warmup: config.warmup,
        thin: config.thin,
        gamma: config.gamma,
        kernel: config.kernel,
    }
}

pub fn priors(config: &RunConfig) -> Priors {
    Priors {
        alpha_mean: config.alpha_prior_mean,
        sigma_mean: config.sigma_prior_mean,
        epsilon_max: config.epsilon_max,
    }
}

#[derive(Debug, Serialize)]
struct ParamSummary {
    mean: f64,
    sd: f64,
}

#[derive(Debug, Serialize)]
struct UserReport {
    n_events: usize,
    rhat: BTreeMap<String, f64>,
    acceptance: f64,
}

#[derive(Debug, Serialize)]
struct FitSummary {
    topic: String,
    kernel: String,
    users: usize,
    draws_per_user: usize,
    parameters: BTreeMap<String, ParamSummary>,
    kappa: f64,
    w1_predicted_vs_observed: f64,
    h_predicted: BTreeMap<String, f64>,
    per_user: BTreeMap<String, UserReport>,
    warnings: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let by_topic: BTreeMap<Topic, Vec<UserTimeline>> = match &config.timelines {
        Some(path) => timelines_by_topic(load_timelines(path)?).into_iter().collect(),
        None => {
            let corpus = load_cache(config)?;
            let mut map = BTreeMap::new();
            for &topic in &config.topics {
                let build = build_timelines(&corpus, topic, config.min_comments)?;
                map.insert(topic, build.timelines);
            }
            map
        }
    };

    let mut manifest = Manifest::new(
        "fit",
        config.seed,
        serde_json::json!({
            "min_comments": config.min_comments,
            "kernel": config.kernel.as_str(),
            "gamma": config.gamma,
            "chains": config.chains,
            "draws": config.draws,
            "warmup": config.warmup,
            "thin": config.thin,
            "alpha_prior_mean": config.alpha_prior_mean,
            "sigma_prior_mean": config.sigma_prior_mean,
            "epsilon_max": config.epsilon_max,
        }),
    );

    let mut fitted_any = false;
    let mut strict_tripped = false;
    for &topic in &config.topics {
        let Some(timelines) = by_topic.get(&topic) else { continue };
        if timelines.is_empty() {
            println!(
                "{topic}: no users with at least {} comments; skipped",
                config.min_comments
            );
            continue;
        }
        fitted_any = true;
        let draws = fit(timelines, &priors(config), &sampler_config(config), config.seed)?;
        write_topic_outputs(config, topic, &draws, timelines, &mut manifest)?;
        if config.strict && !draws.warnings.is_empty() {
            strict_tripped = true;
        }
    }
    if !fitted_any {
        return Err(CliError::data(format!(
            "no topic has users meeting the {}-comment threshold",
            config.min_comments
        )));
    }
    manifest.write(&config.out, "fit_manifest.json")?;

    if strict_tripped {
        return Err(CliError::Convergence(
            "convergence warnings present and --strict given".into(),
        ));
    }
    Ok(())
}

fn write_topic_outputs(
    config: &RunConfig,
    topic: Topic,
    draws: &PosteriorDraws,
    timelines: &[UserTimeline],
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    // Raw parameter draws.
    let draws_path = config.out.join(format!("{topic}_draws.csv"));
    let mut csv =
        CsvWriter::create(&draws_path, "user,chain,draw,alpha_e,alpha_u,epsilon,sigma_e,sigma_u")?;
    for user in &draws.users {
        for chain in 0..user.chains {
            for d in 0..user.draws_per_chain {
                let row = user.params[chain * user.draws_per_chain + d];
                csv.row(&format!(
                    "{},{},{},{},{},{},{},{}",
                    csv_field(&user.user),
                    chain,
                    d,
                    fmt_f64(row[0]),
                    fmt_f64(row[1]),
                    fmt_f64(row[2]),
                    fmt_f64(row[3]),
                    fmt_f64(row[4])
                ))?;
            }
        }
    }
    csv.finish()?;
    manifest.add(&draws_path);

    // Latent trajectories; event_index 0 is the initial state.
    let traj_path = config.out.join(format!("{topic}_trajectories.csv"));
    let mut csv = CsvWriter::create(&traj_path, "user,chain,draw,event_index,u")?;
    for user in &draws.users {
        for chain in 0..user.chains {
            for d in 0..user.draws_per_chain {
                let lat = &user.latents[chain * user.draws_per_chain + d];
                for (k, &u) in lat.iter().enumerate() {
                    csv.row(&format!(
                        "{},{},{},{},{}",
                        csv_field(&user.user),
                        chain,
                        d,
                        k,
                        fmt_f64(u)
                    ))?;
                }
            }
        }
    }
    csv.finish()?;
    manifest.add(&traj_path);

    // Convergence table.
    let rhat_path = config.out.join(format!("{topic}_rhat.csv"));
    let mut csv = CsvWriter::create(&rhat_path, "user,param,rhat")?;
    for user in &draws.users {
        for (p, name) in PARAM_NAMES.iter().enumerate() {
            csv.row(&format!("{},{},{}", csv_field(&user.user), name, fmt_f64(user.rhat[p])))?;
        }
    }
    csv.finish()?;
    manifest.add(&rhat_path);

    // Predictive pass and summary.
    let predictive = posterior_predictive(
        draws,
        timelines,
        &PredictiveConfig {
            bin_width: config.bin_width,
            h_draws: config.predictive_h_draws,
            h_replicates: config.predictive_h_replicates,
        },
        config.seed,
    )?;

    let mut parameters = BTreeMap::new();
    for (p, name) in PARAM_NAMES.iter().enumerate() {
        let pooled: Vec<f64> =
            draws.users.iter().flat_map(|u| u.param_column(p)).collect();
        let (mean, sd) = column_stats(&pooled);
        parameters.insert(name.to_string(), ParamSummary { mean, sd });
    }
    let mut per_user = BTreeMap::new();
    for user in &draws.users {
        let mut rhat = BTreeMap::new();
        for (p, name) in PARAM_NAMES.iter().enumerate() {
            rhat.insert(name.to_string(), user.rhat[p]);
        }
        per_user.insert(
            user.user.clone(),
            UserReport { n_events: user.n_events, rhat, acceptance: user.acceptance },
        );
    }
    let summary = FitSummary {
        topic: topic.to_string(),
        kernel: config.kernel.as_str().to_string(),
        users: draws.users.len(),
        draws_per_user: draws.users.first().map_or(0, |u| u.total_draws()),
        parameters,
        kappa: kappa(draws, 0.05)?,
        w1_predicted_vs_observed: predictive.w1,
        h_predicted: [
            ("min", predictive.h_summary[0]),
            ("q1", predictive.h_summary[1]),
            ("median", predictive.h_summary[2]),
            ("q3", predictive.h_summary[3]),
            ("max", predictive.h_summary[4]),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect(),
        per_user,
        warnings: draws.warnings.iter().map(|w| format!("{}: {}", w.user, w.message)).collect(),
    };
    let summary_path = config.out.join(format!("{topic}_fit_summary.json"));
    write_json(&summary_path, &summary)?;
    manifest.add(&summary_path);

    println!(
        "{topic}: {} users, kappa {:.3}, W1 {:.3}, {} warning(s)",
        summary.users,
        summary.kappa,
        summary.w1_predicted_vs_observed,
        summary.warnings.len()
    );
    Ok(())
}
