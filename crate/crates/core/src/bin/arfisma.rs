use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use arfisma::harness::{self, ExperimentConfig, Method};
use arfisma::model::SeasonalSpec;
use arfisma::{Error, Result};

const EXIT_FAILURE: u8 = 1;
const EXIT_NONCONFORMING: u8 = 3;
const EXIT_INTERRUPTED: u8 = 130;

/// Seasonal fractional ARIMA with symmetric alpha-stable innovations.
///
/// Settings come from the defaults, then the `--config` file (`key = value`
/// lines), then command-line flags; later sources win.
#[derive(Parser)]
#[command(name = "arfisma", version)]
struct Cli {
    /// Key-value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 or unset: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (simulate, estimate) or directory (experiment, select-m).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extra `key=value` setting; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ModelArgs {
    /// Study preset, 1-4.
    #[arg(long)]
    model: Option<usize>,
    /// Sample length T.
    #[arg(long)]
    length: Option<usize>,
    /// Simulator truncation M.
    #[arg(long)]
    truncation: Option<usize>,
}

#[derive(Args, Default)]
struct EcfArgs {
    /// Block overlap.
    #[arg(long)]
    m: Option<usize>,
    /// Monte Carlo integration nodes K.
    #[arg(long)]
    nodes: Option<usize>,
    /// MA truncation J_cf of the joint CF.
    #[arg(long)]
    cf_truncation: Option<usize>,
    /// Random restarts of the simplex search.
    #[arg(long)]
    restarts: Option<usize>,
}

#[derive(Args, Default)]
struct TsmArgs {
    /// Retained MH frequency draws N.
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    /// Random-walk step (radians).
    #[arg(long)]
    proposal_scale: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one path and write it as CSV.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Estimate a series read from CSV; prints a JSON report.
    Estimate {
        #[arg(long)]
        method: Method,
        /// CSV file whose first column is the series.
        #[arg(long)]
        input: PathBuf,
        /// Seasonal period.
        #[arg(long, default_value_t = 4)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Seasonal AR order.
        #[arg(long = "sp", default_value_t = 0)]
        seasonal_p: usize,
        /// Seasonal MA order.
        #[arg(long = "sq", default_value_t = 0)]
        seasonal_q: usize,
        #[command(flatten)]
        ecf: EcfArgs,
        #[command(flatten)]
        tsm: TsmArgs,
    },
    /// Run a Monte Carlo study and write replication and summary files.
    Experiment {
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        replications: Option<usize>,
        /// Use the full 1500 replications.
        #[arg(long)]
        full_scale: bool,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        ecf: EcfArgs,
        #[command(flatten)]
        tsm: TsmArgs,
    },
    /// Choose the ECF block overlap by Monte Carlo MSE.
    SelectM {
        /// Comma-separated overlaps.
        #[arg(long)]
        m_grid: Option<String>,
        #[arg(long)]
        replications: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        ecf: EcfArgs,
    },
}

fn push<T: ToString>(pairs: &mut Vec<(String, String)>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        pairs.push((key.to_string(), v.to_string()));
    }
}

impl ModelArgs {
    fn pairs(&self, out: &mut Vec<(String, String)>) {
        push(out, "model", self.model);
        push(out, "length", self.length);
        push(out, "truncation", self.truncation);
    }
}

impl EcfArgs {
    fn pairs(&self, out: &mut Vec<(String, String)>) {
        push(out, "m", self.m);
        push(out, "nodes", self.nodes);
        push(out, "cf_truncation", self.cf_truncation);
        push(out, "restarts", self.restarts);
    }
}

impl TsmArgs {
    fn pairs(&self, out: &mut Vec<(String, String)>) {
        push(out, "draws", self.draws);
        push(out, "burn_in", self.burn_in);
        push(out, "proposal_scale", self.proposal_scale);
    }
}

fn settings(cli: &Cli) -> Result<Vec<(String, String)>> {
    let mut pairs = match &cli.config {
        Some(path) => harness::parse_key_values(&std::fs::read_to_string(path)?)?,
        None => Vec::new(),
    };
    match &cli.command {
        Command::Simulate { model } => model.pairs(&mut pairs),
        Command::Estimate { method, ecf, tsm, .. } => {
            push(&mut pairs, "method", Some(method));
            ecf.pairs(&mut pairs);
            tsm.pairs(&mut pairs);
        }
        Command::Experiment { method, replications, full_scale, model, ecf, tsm } => {
            push(&mut pairs, "method", method.as_ref());
            push(&mut pairs, "replications", *replications);
            if *full_scale {
                push(&mut pairs, "full_scale", Some(true));
            }
            model.pairs(&mut pairs);
            ecf.pairs(&mut pairs);
            tsm.pairs(&mut pairs);
        }
        Command::SelectM { m_grid, replications, model, ecf } => {
            push(&mut pairs, "m_grid", m_grid.as_ref());
            push(&mut pairs, "replications", *replications);
            model.pairs(&mut pairs);
            ecf.pairs(&mut pairs);
        }
    }
    push(&mut pairs, "seed", cli.seed);
    push(&mut pairs, "threads", cli.threads);
    push(&mut pairs, "out", cli.out.as_ref().map(|p| p.display()));
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => harness::write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_summary(summary: &harness::SummaryTable) {
    println!("{:<8} {:>10} {:>10} {:>10} {:>10}", "param", "truth", "mean", "rmse", "mae");
    for p in &summary.params {
        println!("{:<8} {:>10.4} {:>10.4} {:>10.4} {:>10.4}", p.name, p.truth, p.mean, p.rmse, p.mae);
    }
    println!("used {}, failures {}", summary.used, summary.failures);
}

fn run(cli: Cli, cancel: &AtomicBool) -> Result<u8> {
    let config = ExperimentConfig::from_pairs(&settings(&cli)?)?;
    let out_dir = || config.out.clone().unwrap_or_else(|| PathBuf::from("arfisma-out"));
    match &cli.command {
        Command::Simulate { .. } => {
            let x = harness::with_threads(config.threads, || harness::simulate_replication(&config, 0))??;
            let mut header = vec![("arfisma".to_string(), harness::VERSION.to_string())];
            header.extend(config.to_pairs().into_iter().filter(|(k, _)| {
                matches!(k.as_str(), "model" | "s" | "alpha" | "d" | "D" | "phi" | "theta" | "Phi" | "Theta" | "length" | "truncation" | "seed")
            }));
            let cell = format!(
                "x[{}]",
                header.iter().skip(1).map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
            );
            match &config.out {
                Some(path) => harness::write_series(path, &cell, &x, &header)?,
                None => {
                    print!("{}", harness::comment_header(&header));
                    println!("{cell}");
                    for v in &x {
                        println!("{v}");
                    }
                }
            }
            Ok(0)
        }
        Command::Estimate { input, s, p, q, seasonal_p, seasonal_q, .. } => {
            let series = harness::read_series(input)?;
            let config = ExperimentConfig { spec: SeasonalSpec::new(*s, *p, *q, *seasonal_p, *seasonal_q)?, ..config.clone() };
            let report = harness::with_threads(config.threads, || harness::estimate_series(&config, &series, 0, config.ecf.m))??;
            let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))? + "\n";
            emit(config.out.as_deref(), &json)?;
            Ok(if report.converged { 0 } else { EXIT_NONCONFORMING })
        }
        Command::Experiment { .. } => {
            let outcome = harness::run_experiment(&config, Some(cancel))?;
            let files = harness::write_experiment(&config, &outcome, &out_dir())?;
            if let Some(s) = &outcome.summary {
                print_summary(s);
            }
            eprintln!("wrote {}, {}, {}", files.replications.display(), files.summary_csv.display(), files.summary_json.display());
            Ok(if outcome.interrupted() {
                eprintln!("interrupted: {} of {} replications completed", outcome.completed(), outcome.planned);
                EXIT_INTERRUPTED
            } else if outcome.is_conforming() {
                0
            } else {
                eprintln!("nonconforming: more than 10% of replications failed");
                EXIT_NONCONFORMING
            })
        }
        Command::SelectM { .. } => {
            let selection = harness::run_block_size(&config, Some(cancel))?;
            let dir = out_dir();
            harness::write_atomic(&dir.join("block_size.csv"), &harness::block_size_csv(&config, &selection)?)?;
            let json = serde_json::to_string_pretty(&selection).map_err(|e| Error::Io(e.to_string()))?;
            harness::write_atomic(&dir.join("block_size.json"), json.as_bytes())?;
            for row in &selection.rows {
                println!("m = {:<2} total MSE {:.6} ({} used, {} failed)", row.m, row.total_mse, row.used, row.failures);
            }
            println!("m_opt = {}", selection.m_opt);
            let worst = selection.rows.iter().map(|r| r.failures as f64 / (r.used + r.failures) as f64).fold(0.0, f64::max);
            Ok(if worst > harness::MAX_FAILURE_SHARE { EXIT_NONCONFORMING } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let cancel = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&cancel);
    if let Err(e) = ctrlc::set_handler(move || {
        log::warn!("interrupt received; finishing running replications");
        flag.store(true, Ordering::Relaxed);
    }) {
        log::warn!("cannot install interrupt handler: {e}");
    }
    match run(cli, &cancel) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Interrupted) => ExitCode::from(EXIT_INTERRUPTED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
