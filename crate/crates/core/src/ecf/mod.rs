//! Estimation by matching the joint empirical characteristic function of
//! moving blocks `(X_j, ..., X_{j+m})` to the model's joint CF, with the
//! exponential weight `g(r) = exp(-r'r)` integrated by Monte Carlo.

mod cf;
mod select;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub use cf::{cf_exponents, empirical_cf, joint_cf, CfExponents, TAIL_TERMS};
pub use select::{select_block_size, BlockSizeRow, BlockSizeSelection};

use crate::error::{Error, Result};
use crate::model::{ma_coeffs_unchecked, validate_params, ArfismaParams, SeasonalSpec};
use crate::optim::{nelder_mead, NelderMeadSettings};
use crate::report::EstimationReport;
use crate::seed;
use crate::simulate::DEFAULT_TRUNCATION;
use crate::transform::{AlphaMode, ParamTransform};

pub const DEFAULT_NODES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct EcfConfig {
    /// Block overlap; blocks hold `m + 1` observations.
    pub m: usize,
    /// Monte Carlo integration nodes `K`.
    pub nodes: usize,
    /// Lag `J_cf` at which the model's MA weights are cut.
    pub truncation: usize,
    pub node_seed: u64,
    /// Stream for the random restart points.
    pub restart_seed: u64,
    pub random_restarts: usize,
    /// Start from [`neutral_start`]; with this off and no restarts the
    /// search runs from `initial` alone.
    pub neutral_start: bool,
    /// Extra starting point, e.g. a two-step estimate.
    pub initial: Option<ArfismaParams>,
    pub optimizer: NelderMeadSettings,
    /// Bound on the joint-CF truncation tail; `None` skips the check.
    pub tail_tolerance: Option<f64>,
}

impl Default for EcfConfig {
    fn default() -> Self {
        EcfConfig {
            m: 1,
            nodes: DEFAULT_NODES,
            truncation: DEFAULT_TRUNCATION,
            node_seed: 0,
            restart_seed: 1,
            random_restarts: 1,
            neutral_start: true,
            initial: None,
            optimizer: NelderMeadSettings { step: 0.25, xtol: 1e-3, ftol: 1e-9, max_evaluations: 1500 },
            tail_tolerance: None,
        }
    }
}

impl EcfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::InvalidArgument("at least one integration node is needed".into()));
        }
        if self.truncation < self.m + 1 {
            return Err(Error::InvalidArgument(format!(
                "truncation {} must be at least m + 1 = {}",
                self.truncation,
                self.m + 1
            )));
        }
        Ok(())
    }
}

/// Draws `K` nodes of dimension `m + 1` from the normalized weight
/// `pi^(-(m+1)/2) exp(-r'r)`, i.e. independent `N(0, 1/2)` coordinates.
pub fn integration_nodes(m: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = seed::rng(seed);
    (0..count)
        .map(|_| (0..=m).map(|_| FRAC_1_SQRT_2 * rng.sample::<f64, _>(StandardNormal)).collect())
        .collect()
}

/// The ECF objective with nodes and empirical CF values fixed, so that it
/// is a deterministic function of the parameters.
#[derive(Debug, Clone)]
pub struct EcfObjective {
    m: usize,
    truncation: usize,
    tail_tolerance: Option<f64>,
    nodes: Vec<Vec<f64>>,
    target: Vec<Complex64>,
}

impl EcfObjective {
    pub fn new(series: &[f64], config: &EcfConfig) -> Result<Self> {
        config.validate()?;
        if series.len() <= config.m {
            return Err(Error::SeriesTooShort { needed: config.m + 1, got: series.len() });
        }
        let nodes = integration_nodes(config.m, config.nodes, config.node_seed);
        let target = nodes.iter().map(|r| empirical_cf(series, r)).collect::<Result<_>>()?;
        Ok(EcfObjective { m: config.m, truncation: config.truncation, tail_tolerance: config.tail_tolerance, nodes, target })
    }

    /// Uses caller-supplied CF values at the given nodes in place of the
    /// empirical ones.
    pub fn with_target(nodes: Vec<Vec<f64>>, target: Vec<Complex64>, truncation: usize) -> Result<Self> {
        let m = nodes.first().map(|r| r.len()).filter(|&k| k > 0).ok_or_else(|| {
            Error::InvalidArgument("nodes must be nonempty vectors".into())
        })? - 1;
        if nodes.iter().any(|r| r.len() != m + 1) || nodes.len() != target.len() || truncation < m + 1 {
            return Err(Error::InvalidArgument("inconsistent nodes, target or truncation".into()));
        }
        Ok(EcfObjective { m, truncation, tail_tolerance: None, nodes, target })
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `pi^((m+1)/2) (1/K) sum_k |c_n(r_k) - c(r_k; psi)|^2`.
    pub fn value(&self, psi: &ArfismaParams, spec: &SeasonalSpec) -> Result<f64> {
        validate_params(psi, spec).into_result()?;
        self.value_unchecked(psi, spec)
    }

    /// [`value`](Self::value) without the admissibility check. The truncated
    /// expression is finite for any `1 < alpha <= 2`, so points outside the
    /// parameter space can still be compared.
    pub fn value_unchecked(&self, psi: &ArfismaParams, spec: &SeasonalSpec) -> Result<f64> {
        let c = ma_coeffs_unchecked(psi, spec.s, self.truncation);
        let mut scratch = Vec::with_capacity(c.len());
        let mut total = 0.0;
        for (r, target) in self.nodes.iter().zip(&self.target) {
            let e = cf_exponents(&c, psi.alpha, r, &mut scratch);
            cf::check_tail(&e, self.tail_tolerance)?;
            total += (target - e.value()).norm_sqr();
        }
        let norm = PI.powf((self.m + 1) as f64 / 2.0);
        Ok(norm * total / self.nodes.len() as f64)
    }
}

/// `I_n(psi)` for one series; see [`EcfObjective`] to reuse nodes across
/// evaluations.
pub fn ecf_objective(series: &[f64], psi: &ArfismaParams, spec: &SeasonalSpec, config: &EcfConfig) -> Result<f64> {
    EcfObjective::new(series, config)?.value(psi, spec)
}

/// Neutral starting point: `alpha = 1.5`, both memories `0.1`, ARMA zero.
pub fn neutral_start(spec: &SeasonalSpec) -> ArfismaParams {
    ArfismaParams {
        alpha: 1.5,
        d: 0.1,
        d_seasonal: 0.1,
        phi: vec![0.0; spec.p],
        theta: vec![0.0; spec.q],
        phi_seasonal: vec![0.0; spec.seasonal_p],
        theta_seasonal: vec![0.0; spec.seasonal_q],
    }
}

/// Minimizes the ECF objective by Nelder–Mead in the unconstrained
/// coordinates of [`ParamTransform`], from the neutral point, the configured
/// initial point and `random_restarts` random points; keeps the best.
pub fn estimate_ecf(series: &[f64], spec: &SeasonalSpec, config: &EcfConfig) -> Result<EstimationReport> {
    let started = Instant::now();
    let objective = EcfObjective::new(series, config)?;
    let transform = ParamTransform::new(*spec, AlphaMode::Free);

    let mut starts = Vec::new();
    if config.neutral_start {
        starts.push(transform.from_params(&neutral_start(spec))?);
    }
    if let Some(init) = &config.initial {
        validate_params(init, spec).into_result()?;
        starts.push(transform.from_params(init)?);
    }
    let mut rng = seed::rng(config.restart_seed);
    for _ in 0..config.random_restarts {
        starts.push((0..transform.dim()).map(|_| rng.random_range(-1.5..1.5)).collect());
    }

    let mut failure = None;
    let mut f = |u: &[f64]| {
        let psi = transform.to_params(u);
        if !validate_params(&psi, spec).is_valid() {
            return f64::INFINITY;
        }
        match objective.value_unchecked(&psi, spec) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    };

    let mut best: Option<crate::optim::Minimum> = None;
    let mut iterations = 0;
    let mut evaluations = 0;
    for start in &starts {
        let run = nelder_mead(&mut f, start, &config.optimizer);
        iterations += run.iterations;
        evaluations += run.evaluations;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = best.ok_or_else(|| Error::InvalidArgument("no starting point: neutral start off, no initial point, no restarts".into()))?;
    if !best.value.is_finite() {
        return Err(failure.unwrap_or_else(|| Error::InvalidArgument("objective is not finite anywhere on the search path".into())));
    }
    let psi_hat = transform.to_params(&best.x);
    let mut warnings = Vec::new();
    if !best.converged {
        warnings.push(format!("simplex search stopped after {} evaluations without converging", config.optimizer.max_evaluations));
    }
    Ok(EstimationReport {
        method: format!("ecf(m={})", config.m),
        psi_hat,
        objective: best.value,
        iterations,
        evaluations,
        converged: best.converged,
        wall_time_secs: started.elapsed().as_secs_f64(),
        warnings,
    })
}
