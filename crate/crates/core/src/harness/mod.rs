//! Monte Carlo experiments: seeded replications run in parallel, summary
//! tables and their CSV/JSON files.

mod config;
mod io;
mod summary;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use config::{parse_key_values, ExperimentConfig, Method, DEFAULT_REPLICATIONS, PAPER_REPLICATIONS};
pub use io::{comment_header, read_comment_header, read_series, write_atomic, write_series};
pub use summary::{summarize, ParamSummary, SummaryTable, MAX_FAILURE_SHARE};

use crate::ecf::{estimate_ecf, select_block_size, BlockSizeSelection, EcfConfig};
use crate::error::{Error, Result};
use crate::report::EstimationReport;
use crate::seed::{derive_seed, Stage};
use crate::simulate::{simulate, SimulationConfig};
use crate::twostep::{estimate_two_step, WhittleConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of one replication; an estimation error is kept, not raised.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub rep: usize,
    pub outcome: Result<EstimationReport>,
}

impl ReplicationRecord {
    pub fn estimate(&self) -> Option<Vec<f64>> {
        self.outcome.as_ref().ok().map(|r| r.psi_hat.to_vec())
    }
}

pub fn simulation_seed(master: u64, rep: usize) -> u64 {
    derive_seed(master, rep as u64, Stage::Simulation)
}

/// Series of replication `rep`.
pub fn simulate_replication(config: &ExperimentConfig, rep: usize) -> Result<Vec<f64>> {
    let sim = SimulationConfig::new(config.psi.clone(), config.spec, config.length, simulation_seed(config.master_seed, rep))
        .with_truncation(config.truncation);
    simulate(&sim)
}

fn ecf_config(config: &ExperimentConfig, rep: usize, m: usize) -> EcfConfig {
    EcfConfig {
        m,
        node_seed: derive_seed(config.master_seed, rep as u64, Stage::EcfNodes),
        restart_seed: derive_seed(config.master_seed, rep as u64, Stage::EcfRestart),
        ..config.ecf.clone()
    }
}

fn whittle_config(config: &ExperimentConfig, rep: usize) -> WhittleConfig {
    WhittleConfig { seed: derive_seed(config.master_seed, rep as u64, Stage::MhChain), ..config.whittle.clone() }
}

/// Estimates `series` by the configured method with the seeds of
/// replication `rep`, at overlap `m` for the ECF method.
pub fn estimate_series(config: &ExperimentConfig, series: &[f64], rep: usize, m: usize) -> Result<EstimationReport> {
    let whittle = whittle_config(config, rep);
    match config.method {
        Method::Tsm => estimate_two_step(series, &config.spec, &whittle),
        Method::Ecf => {
            let mut ecf = ecf_config(config, rep, m);
            let mut warnings = Vec::new();
            if config.tsm_start && ecf.initial.is_none() {
                match estimate_two_step(series, &config.spec, &whittle) {
                    Ok(tsm) => ecf.initial = Some(tsm.psi_hat),
                    Err(e) => warnings.push(format!("two-step start unavailable: {e}")),
                }
            }
            let mut report = estimate_ecf(series, &config.spec, &ecf)?;
            warnings.append(&mut report.warnings);
            report.warnings = warnings;
            Ok(report)
        }
    }
}

/// Simulates and estimates replication `rep`. Streams are derived from the
/// master seed and `rep` alone, so the result does not depend on which
/// thread runs it or in what order.
pub fn run_replication(config: &ExperimentConfig, rep: usize) -> ReplicationRecord {
    let outcome = simulate_replication(config, rep).and_then(|x| estimate_series(config, &x, rep, config.ecf.m));
    match &outcome {
        Ok(r) => log::info!("replication {rep}: {} ({:.1}s)", r.psi_hat, r.wall_time_secs),
        Err(e) => log::warn!("replication {rep} failed: {e}"),
    }
    ReplicationRecord { rep, outcome }
}

/// Runs `f` on a pool with `threads` workers (`None`: all cores).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    /// Completed replications in index order.
    pub records: Vec<ReplicationRecord>,
    pub planned: usize,
    pub summary: Option<SummaryTable>,
    pub wall_time_secs: f64,
}

impl ExperimentOutcome {
    pub fn completed(&self) -> usize {
        self.records.len()
    }

    pub fn interrupted(&self) -> bool {
        self.completed() < self.planned
    }

    /// Every replication ran and at most [`MAX_FAILURE_SHARE`] failed.
    pub fn is_conforming(&self) -> bool {
        !self.interrupted() && self.summary.as_ref().is_some_and(SummaryTable::is_conforming)
    }
}

/// Runs all replications in parallel. Once `cancel` is set, replications
/// not yet started are skipped and the outcome holds the completed ones.
pub fn run_experiment(config: &ExperimentConfig, cancel: Option<&AtomicBool>) -> Result<ExperimentOutcome> {
    config.validate()?;
    let started = Instant::now();
    let cancelled = || cancel.is_some_and(|c| c.load(Ordering::Relaxed));
    let records: Vec<ReplicationRecord> = with_threads(config.threads, || {
        (0..config.replications)
            .into_par_iter()
            .filter_map(|rep| (!cancelled()).then(|| run_replication(config, rep)))
            .collect()
    })?;
    let summary = summarize_records(config, &records).ok();
    Ok(ExperimentOutcome { records, planned: config.replications, summary, wall_time_secs: started.elapsed().as_secs_f64() })
}

pub fn summarize_records(config: &ExperimentConfig, records: &[ReplicationRecord]) -> Result<SummaryTable> {
    let estimates: Vec<_> = records.iter().map(ReplicationRecord::estimate).collect();
    summarize(&config.spec.param_names(), &config.psi.to_vec(), &estimates)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub replications: PathBuf,
    pub summary_csv: PathBuf,
    pub summary_json: PathBuf,
}

fn header(config: &ExperimentConfig, completed: usize) -> Vec<(String, String)> {
    let mut h = vec![
        ("arfisma".to_string(), VERSION.to_string()),
        ("completed".to_string(), format!("{completed}/{}", config.replications)),
    ];
    h.extend(config.to_pairs());
    h
}

fn csv_bytes(header: &[(String, String)], rows: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>) -> Result<Vec<u8>> {
    let mut buf = comment_header(header).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        rows(&mut w).map_err(|e| Error::Io(e.to_string()))?;
        w.flush()?;
    }
    Ok(buf)
}

/// Per-replication CSV: `rep, status, <coordinates>, objective,
/// evaluations, converged, error`. Timings are left out so that reruns
/// produce identical bytes.
pub fn replications_csv(config: &ExperimentConfig, records: &[ReplicationRecord]) -> Result<Vec<u8>> {
    let names = config.spec.param_names();
    csv_bytes(&header(config, records.len()), |w| {
        let mut cols = vec!["rep".to_string(), "status".to_string()];
        cols.extend(names.iter().cloned());
        cols.extend(["objective", "evaluations", "converged", "error"].map(String::from));
        w.write_record(&cols)?;
        for r in records {
            let mut row = vec![r.rep.to_string()];
            match &r.outcome {
                Ok(rep) => {
                    row.push("ok".into());
                    row.extend(rep.psi_hat.to_vec().iter().map(f64::to_string));
                    row.extend([rep.objective.to_string(), rep.evaluations.to_string(), rep.converged.to_string(), String::new()]);
                }
                Err(e) => {
                    row.push("failed".into());
                    row.extend(std::iter::repeat_n(String::new(), names.len() + 3));
                    row.push(e.to_string());
                }
            }
            w.write_record(&row)?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    arfisma: &'a str,
    config: std::collections::BTreeMap<String, String>,
    planned: usize,
    completed: usize,
    conforming: bool,
    wall_time_secs: f64,
    summary: Option<&'a SummaryTable>,
}

/// Writes `replications.csv`, `summary.csv` and `summary.json` into `dir`.
pub fn write_experiment(config: &ExperimentConfig, outcome: &ExperimentOutcome, dir: &Path) -> Result<OutputFiles> {
    let files = OutputFiles {
        replications: dir.join("replications.csv"),
        summary_csv: dir.join("summary.csv"),
        summary_json: dir.join("summary.json"),
    };
    write_atomic(&files.replications, &replications_csv(config, &outcome.records)?)?;

    let mut head = header(config, outcome.completed());
    if let Some(s) = &outcome.summary {
        head.push(("used".into(), s.used.to_string()));
        head.push(("failures".into(), s.failures.to_string()));
    }
    head.push(("conforming".into(), outcome.is_conforming().to_string()));
    let summary_csv = csv_bytes(&head, |w| {
        w.write_record(["param", "truth", "mean", "rmse", "mae"])?;
        for p in outcome.summary.iter().flat_map(|s| &s.params) {
            w.write_record([p.name.clone(), p.truth.to_string(), p.mean.to_string(), p.rmse.to_string(), p.mae.to_string()])?;
        }
        Ok(())
    })?;
    write_atomic(&files.summary_csv, &summary_csv)?;

    let json = SummaryFile {
        arfisma: VERSION,
        config: config.to_pairs().into_iter().collect(),
        planned: outcome.planned,
        completed: outcome.completed(),
        conforming: outcome.is_conforming(),
        wall_time_secs: outcome.wall_time_secs,
        summary: outcome.summary.as_ref(),
    };
    let text = serde_json::to_string_pretty(&json).map_err(|e| Error::Io(e.to_string()))?;
    write_atomic(&files.summary_json, text.as_bytes())?;
    Ok(files)
}

/// Reads a per-replication CSV back: the config from its header and one
/// entry per row in file order, `None` for failed replications.
pub fn read_replications(path: &Path) -> Result<(ExperimentConfig, Vec<Option<Vec<f64>>>)> {
    let text = std::fs::read_to_string(path)?;
    let pairs: Vec<_> = read_comment_header(&text)
        .into_iter()
        .filter(|(k, _)| k != "arfisma" && k != "completed")
        .collect();
    let config = ExperimentConfig::from_pairs(&pairs)?;
    let width = config.spec.param_len();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Io(e.to_string()))?;
        let row = match record.get(1) {
            Some("ok") => Some(
                (2..2 + width)
                    .map(|i| {
                        record.get(i).and_then(|v| v.parse().ok()).ok_or_else(|| Error::Io(format!("bad value in row {record:?}")))
                    })
                    .collect::<Result<Vec<f64>>>()?,
            ),
            Some("failed") => None,
            _ => return Err(Error::Io(format!("bad status in row {record:?}"))),
        };
        out.push(row);
    }
    Ok((config, out))
}

/// Block-size selection over `config.m_grid`. Replication `rep` uses the
/// same simulated series for every `m`.
pub fn run_block_size(config: &ExperimentConfig, cancel: Option<&AtomicBool>) -> Result<BlockSizeSelection> {
    config.validate()?;
    let cancelled = || cancel.is_some_and(|c| c.load(Ordering::Relaxed));
    let selection = with_threads(config.threads, || {
        select_block_size(&config.psi, &config.m_grid, config.replications, |m, rep| {
            if cancelled() {
                return Err(Error::Interrupted);
            }
            let config = ExperimentConfig { method: Method::Ecf, ..config.clone() };
            let x = simulate_replication(&config, rep)?;
            estimate_series(&config, &x, rep, m).map(|r| r.psi_hat)
        })
    })??;
    if cancelled() {
        return Err(Error::Interrupted);
    }
    Ok(selection)
}

/// `m, mse_<coordinate>..., total_mse, used, failures`.
pub fn block_size_csv(config: &ExperimentConfig, selection: &BlockSizeSelection) -> Result<Vec<u8>> {
    let mut head = header(config, config.replications);
    head.push(("m_opt".into(), selection.m_opt.to_string()));
    csv_bytes(&head, |w| {
        let mut cols = vec!["m".to_string()];
        cols.extend(config.spec.param_names().iter().map(|n| format!("mse_{n}")));
        cols.extend(["total_mse", "used", "failures"].map(String::from));
        w.write_record(&cols)?;
        for row in &selection.rows {
            let mut r = vec![row.m.to_string()];
            r.extend(row.mse.iter().map(f64::to_string));
            r.extend([row.total_mse.to_string(), row.used.to_string(), row.failures.to_string()]);
            w.write_record(&r)?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_params;

    fn small(method: Method, reps: usize) -> ExperimentConfig {
        let mut c = ExperimentConfig::preset(1).unwrap();
        c.method = method;
        c.length = 300;
        c.replications = reps;
        c.truncation = 500;
        c.ecf.nodes = 64;
        c.ecf.truncation = 500;
        c.ecf.optimizer.max_evaluations = 150;
        c.whittle.draws = 800;
        c.whittle.burn_in = 100;
        c
    }

    #[test]
    fn replications_are_deterministic_and_distinct() {
        let c = small(Method::Ecf, 2);
        let a = run_replication(&c, 0);
        let b = run_replication(&c, 0);
        assert_eq!(a.estimate(), b.estimate());
        let psi = a.outcome.unwrap().psi_hat;
        assert!(validate_params(&psi, &c.spec).is_valid());
        let x0 = simulate_replication(&c, 0).unwrap();
        let x1 = simulate_replication(&c, 1).unwrap();
        assert!(x0[..10].iter().zip(&x1[..10]).all(|(a, b)| a != b));
    }

    #[test]
    fn single_replication_rmse_is_the_error() {
        let c = small(Method::Tsm, 1);
        let out = run_experiment(&c, None).unwrap();
        let est = out.records[0].estimate().unwrap();
        for (p, (e, t)) in out.summary.unwrap().params.iter().zip(est.iter().zip(c.psi.to_vec())) {
            assert_eq!(p.rmse, (e - t).abs());
            assert_eq!(p.mae, (e - t).abs());
        }
    }

    #[test]
    fn cancelled_runs_flush_nothing_new() {
        let c = small(Method::Tsm, 3);
        let flag = AtomicBool::new(true);
        let out = run_experiment(&c, Some(&flag)).unwrap();
        assert_eq!(out.completed(), 0);
        assert!(out.interrupted() && !out.is_conforming());
        assert!(out.summary.is_none());
    }

    #[test]
    fn failures_are_recorded() {
        let mut c = small(Method::Ecf, 1);
        c.ecf.tail_tolerance = Some(1e-30);
        c.tsm_start = false;
        let r = run_replication(&c, 0);
        assert!(matches!(r.outcome, Err(Error::TruncationTail { .. })));
        let csv = String::from_utf8(replications_csv(&c, &[r]).unwrap()).unwrap();
        assert!(csv.lines().last().unwrap().starts_with("0,failed,,,,,,,"));
    }
}
