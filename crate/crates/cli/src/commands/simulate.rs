//! `siebc simulate`: generate a synthetic interaction corpus with ground
//! truth for validating the calibration.

use siebc_core::siebc::{generate_synthetic, SyntheticSpec};

use crate::config::RunConfig;
use crate::report::{write_json, Manifest};
use crate::CliError;

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let spec = match config.synthetic_benchmark.as_str() {
        "polarized" => {
            SyntheticSpec::polarized_benchmark(config.synthetic_users, config.synthetic_comments)
        }
        _ => SyntheticSpec::recovery_benchmark(config.synthetic_users, config.synthetic_comments),
    };
    let data = generate_synthetic(&spec, config.seed)?;

    let timelines_path = config.out.join("synthetic_timelines.json");
    write_json(&timelines_path, &data.timelines)?;
    let truth_path = config.out.join("synthetic_truth.json");
    write_json(&truth_path, &data.truth)?;

    let mut manifest = Manifest::new(
        "simulate",
        config.seed,
        serde_json::to_value(&spec).map_err(|e| CliError::data(e.to_string()))?,
    );
    manifest.add(&timelines_path);
    manifest.add(&truth_path);
    manifest.write(&config.out, "simulate_manifest.json")?;

    println!(
        "synthetic corpus: {} users x {} comments -> {}",
        config.synthetic_users,
        config.synthetic_comments,
        timelines_path.display()
    );
    Ok(())
}
