use std::fs::{self, File};
use std::io::BufWriter;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use vrcaptcha_core::agents::write_corpus;
use vrcaptcha_core::gateway::{Gateway, GatewayConfig};
use vrcaptcha_harness::calibrate::holdout_json;
use vrcaptcha_harness::{calibrate, rank_report, run_experiment, summary_json, write_csv, ExperimentConfig, Result};

#[derive(Parser)]
#[command(name = "vrcaptcha", version, about = "Simulate, calibrate and serve 3D-interaction CAPTCHAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML); defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every (kind, profile) cell; writes results.csv and summary.json.
    Run {
        #[command(flatten)]
        common: Common,
        /// Overrides attempts per cell.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Fit the calibration artifact; writes calibration.json, corpus.jsonl
    /// and holdout.json.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Overrides traces per class.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Rank kinds by mean simulated solve time from a results CSV.
    Rank {
        csv: PathBuf,
        /// Profile whose rows are ranked; "all" for every row.
        #[arg(long, default_value = "human")]
        profile: String,
    },
    /// Serve the gateway over HTTP.
    Serve {
        /// Gateway config (TOML); VRCAPTCHA_* variables override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured port.
        #[arg(long)]
        port: Option<u16>,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, n } => {
            let mut cfg = load(&common)?;
            if let Some(n) = n {
                cfg.n_per_cell = n;
            }
            let out = run_experiment(&cfg)?;
            fs::create_dir_all(&common.out)?;
            let csv_path = common.out.join("results.csv");
            write_csv(BufWriter::new(File::create(&csv_path)?), &out.rows)?;
            eprintln!("wrote {}", csv_path.display());
            write(&common.out.join("summary.json"), &summary_json(&out.summary))?;
            for c in &out.summary.cells {
                println!(
                    "{:<14} {:<12} pass {:>6.3}  mean {:>6.2}s  p95 {:>6.2}s",
                    c.kind.as_str(),
                    c.profile,
                    c.pass_rate,
                    c.mean_time_s,
                    c.p95_time_s
                );
            }
            for k in &out.summary.kinds {
                if let Some(auc) = k.humanness_auc {
                    println!("{:<14} humanness AUC {auc:.4}", k.kind.as_str());
                }
            }
        }
        Command::Calibrate { common, n } => {
            let mut cfg = load(&common)?;
            if let Some(n) = n {
                cfg.calibration.corpus_per_class = n;
                cfg.calibration.holdout_per_class = n;
            }
            let out = calibrate(&cfg)?;
            fs::create_dir_all(&common.out)?;
            write(&common.out.join("calibration.json"), &out.artifact.to_json())?;
            let corpus_path = common.out.join("corpus.jsonl");
            write_corpus(BufWriter::new(File::create(&corpus_path)?), &out.corpus)?;
            eprintln!("wrote {}", corpus_path.display());
            write(&common.out.join("holdout.json"), &holdout_json(&out.holdout))?;
            println!("motion_theta {}", out.artifact.motion_theta);
            for k in &out.holdout.kinds {
                println!(
                    "{:<12} train tpr {:.3} fpr {:.3} | holdout tpr {:.3} fpr {:.3} auc {:.4}",
                    k.kind.as_str(),
                    k.train.tpr,
                    k.train.fpr,
                    k.holdout.tpr,
                    k.holdout.fpr,
                    k.holdout.auc
                );
            }
        }
        Command::Rank { csv, profile } => {
            let filter = (profile != "all").then_some(profile.as_str());
            for (i, e) in rank_report(File::open(csv)?, filter)?.iter().enumerate() {
                println!("{:>2}. {:<14} {:>7.3}s  (n={})", i + 1, e.kind, e.mean_time_s, e.n);
            }
        }
        Command::Serve { config, port } => {
            let mut cfg = match config {
                Some(p) => GatewayConfig::load(p)?,
                None => GatewayConfig::default(),
            };
            cfg.apply_process_env()?;
            if let Some(port) = port {
                cfg.port = port;
            }
            let addr: SocketAddr = format!("{}:{}", cfg.bind, cfg.port)
                .parse()
                .map_err(|e| vrcaptcha_harness::HarnessError::Config(format!("bind address: {e}")))?;
            let gw = Arc::new(Gateway::new(cfg)?);
            tokio::runtime::Runtime::new()?.block_on(vrcaptcha_harness::serve::serve(gw, addr))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
