//! Thin experiment driver: `rlab <experiment> --config FILE [--jobs N]
//! [--force] [--seed S]`. The library does all the work; this binary only
//! parses arguments, honors `RLAB_OUT`, and maps outcomes to exit codes
//! (0 success, 2 failed invariant check, 1 any other error).

use std::path::PathBuf;
use std::process::ExitCode;

use rlab::error::ExperimentError;
use rlab::experiment::{run, ExperimentConfig, ExperimentKind};

fn usage() -> String {
    "usage: rlab <cgo|expectation|bilinear|wavepacket|kakeya|induction> \
     --config FILE [--jobs N] [--force] [--seed S]"
        .to_string()
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rlab: {e}");
            if matches!(e, ExperimentError::AssertionFailed(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn real_main() -> Result<(), ExperimentError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        println!("{}", usage());
        return Ok(());
    }
    let kind = ExperimentKind::parse(&args[0]).ok_or_else(|| ExperimentError::ConfigParse {
        line: 0,
        msg: format!("unknown experiment `{}`; {}", args[0], usage()),
    })?;
    let mut config_path: Option<PathBuf> = None;
    let mut jobs = 1usize;
    let mut force = false;
    let mut seed_override: Option<u64> = None;
    let mut i = 1;
    while i < args.len() {
        match args[i].as_str() {
            "--config" => {
                i += 1;
                config_path = Some(PathBuf::from(args.get(i).ok_or_else(|| {
                    ExperimentError::ConfigParse {
                        line: 0,
                        msg: "--config needs a path".into(),
                    }
                })?));
            }
            "--jobs" => {
                i += 1;
                jobs = args.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
                    ExperimentError::ConfigParse {
                        line: 0,
                        msg: "--jobs needs an integer".into(),
                    }
                })?;
            }
            "--seed" => {
                i += 1;
                seed_override =
                    Some(args.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
                        ExperimentError::ConfigParse {
                            line: 0,
                            msg: "--seed needs an integer".into(),
                        }
                    })?);
            }
            "--force" => force = true,
            other => {
                return Err(ExperimentError::ConfigParse {
                    line: 0,
                    msg: format!("unknown argument `{other}`; {}", usage()),
                });
            }
        }
        i += 1;
    }
    let path = config_path.ok_or_else(|| ExperimentError::ConfigParse {
        line: 0,
        msg: format!("--config is required; {}", usage()),
    })?;
    let text = std::fs::read_to_string(&path)?;
    let mut config = ExperimentConfig::parse(&text)?;
    if config.experiment != kind {
        return Err(ExperimentError::ConfigParse {
            line: 0,
            msg: format!(
                "config drives `{}` but the command line says `{}`",
                config.experiment.name(),
                kind.name()
            ),
        });
    }
    if let Some(seed) = seed_override {
        config = config.with_seed(seed);
    }
    config = config.with_jobs(jobs).with_force(force);
    if let Ok(out) = std::env::var("RLAB_OUT") {
        config = config.with_out_root(PathBuf::from(out));
    }
    let artifacts = run(&config)?;
    println!(
        "{} run {} -> {} ({} rows)",
        config.experiment.name(),
        if artifacts.reused {
            "reused"
        } else {
            "written"
        },
        artifacts.dir.display(),
        artifacts.table.rows.len()
    );
    Ok(())
}
