//! Monte Carlo ensembles of GHE estimates, with shuffle surrogates.
//!
//! Each path is an independent work item: its simulation and every one of
//! its shuffles draw from RNGs keyed on `(master_seed, path, stream)`. Paths
//! are evaluated in parallel on the current rayon pool and reduced in path
//! order, so a report does not depend on the number of threads.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::inference::{identity_test, IdentityTest};
use super::seeds::{rng_for, shuffle_stream, SIMULATION_STREAM};
use crate::error::{Error, Result};
use crate::generators::{
    sample_stable_n, simulate_arfima, ArfimaParams, FbmParams, FgnGenerator, StableParams,
};
use crate::ghe::{self, GheConfig, GheResult};
use crate::msm::{simulate_msm, MsmParams};
use crate::series::{
    build_variable, shuffle_in_place, ReturnKind, ReturnSeries, VariableKind,
};
use crate::stats;

pub const DEFAULT_N_PATHS: usize = 1000;
pub const DESK_N_PATHS: usize = 200;
/// Roughly June 1976 to November 2010 in trading days.
pub const DEFAULT_PATH_LENGTH: usize = 8700;
pub const DEFAULT_N_SHUFFLES: usize = 33;

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Msm(MsmParams),
    Stable(StableParams),
    Fbm { hurst: f64 },
    Arfima(ArfimaParams),
    /// A single observed return series; shuffles are drawn from it.
    Empirical { id: String, returns: Arc<ReturnSeries> },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Msm(_) => "msm",
            Generator::Stable(_) => "stable",
            Generator::Fbm { .. } => "fbm",
            Generator::Arfima(_) => "arfima",
            Generator::Empirical { .. } => "empirical",
        }
    }

    /// Compact `key=value` description of the parameters.
    pub fn param_set(&self) -> String {
        match self {
            Generator::Msm(p) => format!("m0={};sigma={};k={}", p.m0, p.sigma, p.k),
            Generator::Stable(p) => format!("alpha={}", p.alpha),
            Generator::Fbm { hurst } => format!("H={hurst}"),
            Generator::Arfima(p) => {
                let mut s = format!("alpha={};d={}", p.stable.alpha, p.d);
                if let Some(phi) = p.ar_coeffs.first() {
                    s.push_str(&format!(";ar1={phi}"));
                }
                s
            }
            Generator::Empirical { id, .. } => id.clone(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.param_set())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub generator: Generator,
    pub n_paths: usize,
    /// Number of returns per simulated path.
    pub path_length: usize,
    pub variable: VariableKind,
    pub ghe: GheConfig,
    pub n_shuffles: usize,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(generator: Generator) -> Self {
        Self {
            generator,
            n_paths: DEFAULT_N_PATHS,
            path_length: DEFAULT_PATH_LENGTH,
            variable: VariableKind::Price,
            ghe: GheConfig::default(),
            n_shuffles: DEFAULT_N_SHUFFLES,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1 {
            return Err(Error::InvalidParams("n_paths must be >= 1".into()));
        }
        self.ghe.validate_params()?;
        let len = match &self.generator {
            Generator::Empirical { returns, .. } => returns.len(),
            _ => self.path_length,
        };
        let needed = 4 * self.ghe.max_tau();
        if len < needed {
            return Err(Error::TooShort { needed, got: len });
        }
        match &self.generator {
            Generator::Msm(p) => p.validate(),
            Generator::Stable(p) => p.validate(),
            Generator::Fbm { hurst } => FbmParams::new(*hurst, self.path_length).map(|_| ()),
            Generator::Arfima(p) => p.validate(),
            Generator::Empirical { .. } => Ok(()),
        }
    }

    fn effective_paths(&self) -> usize {
        match self.generator {
            Generator::Empirical { .. } => 1,
            _ => self.n_paths,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        Self {
            mean: stats::mean(values),
            std: stats::sample_std(values),
        }
    }
}

/// Estimates for one path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSummary {
    /// `h_mean` per configured q.
    pub h: Vec<f64>,
    /// Dispersion of each `h` over the tau_max grid.
    pub h_grid_std: Vec<f64>,
    /// Per-q mean over the shuffles of this path.
    pub h_shuffled: Option<Vec<f64>>,
    /// Per-q standard deviation over the shuffles of this path.
    pub h_shuffled_std: Option<Vec<f64>>,
    pub delta_h: Option<f64>,
    pub delta_h_shuff: Option<f64>,
    /// Smallest log-log R² over q for the original series.
    pub min_r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QSummary {
    pub q: f64,
    pub original: MeanStd,
    pub shuffled: Option<MeanStd>,
    /// Mean over paths of the standard deviation across shuffles.
    pub shuffle_spread: Option<f64>,
    /// Original against shuffled exponents.
    pub shuffle_test: Option<IdentityTest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub generator: String,
    pub param_set: String,
    pub variable: VariableKind,
    pub n_paths: usize,
    pub n_shuffles: usize,
    pub per_q: Vec<QSummary>,
    pub delta_h: Option<MeanStd>,
    pub delta_h_shuff: Option<MeanStd>,
    /// Number of paths whose log-log fit fell below the R² warning level.
    pub scaling_warnings: usize,
    pub paths: Vec<PathSummary>,
}

impl EnsembleReport {
    pub fn get(&self, q: f64) -> Option<&QSummary> {
        self.per_q.iter().find(|s| s.q == q)
    }

    pub fn original(&self, q: f64) -> Option<MeanStd> {
        self.get(q).map(|s| s.original)
    }

    pub fn shuffled(&self, q: f64) -> Option<MeanStd> {
        self.get(q).and_then(|s| s.shuffled)
    }
}

enum Source {
    Msm(MsmParams),
    Stable(StableParams),
    Fbm(FgnGenerator),
    Arfima(ArfimaParams),
    Empirical(Arc<ReturnSeries>),
}

impl Source {
    fn prepare(spec: &EnsembleSpec) -> Result<Self> {
        Ok(match &spec.generator {
            Generator::Msm(p) => Source::Msm(*p),
            Generator::Stable(p) => Source::Stable(*p),
            Generator::Fbm { hurst } => {
                Source::Fbm(FgnGenerator::new(FbmParams::new(*hurst, spec.path_length)?)?)
            }
            Generator::Arfima(p) => Source::Arfima(p.clone()),
            Generator::Empirical { returns, .. } => Source::Empirical(Arc::clone(returns)),
        })
    }

    fn returns(&self, spec: &EnsembleSpec, path_index: usize) -> Result<ReturnSeries> {
        let mut rng = rng_for(spec.master_seed, path_index as u64, SIMULATION_STREAM);
        let n = spec.path_length;
        match self {
            Source::Msm(p) => simulate_msm(p, n, &mut rng),
            Source::Stable(p) => Ok(ReturnSeries::new(
                sample_stable_n(p, n, &mut rng)?,
                ReturnKind::Difference,
            )),
            Source::Fbm(g) => Ok(ReturnSeries::new(g.sample(&mut rng), ReturnKind::Difference)),
            Source::Arfima(p) => simulate_arfima(p, n, &mut rng),
            Source::Empirical(r) => Ok((**r).clone()),
        }
    }
}

/// Simulates one path of returns for `spec` exactly as the ensemble does.
pub fn simulate_path(spec: &EnsembleSpec, path_index: usize) -> Result<ReturnSeries> {
    spec.validate()?;
    Source::prepare(spec)?.returns(spec, path_index)
}

pub fn run_ensemble(spec: &EnsembleSpec) -> Result<EnsembleReport> {
    let mut reports = run_ensemble_multi(spec, &[spec.variable])?;
    Ok(reports.remove(0))
}

/// Runs the ensemble once and evaluates several cumulative variables on the
/// same simulated returns and the same shuffles. `spec.variable` is ignored.
pub fn run_ensemble_multi(
    spec: &EnsembleSpec,
    variables: &[VariableKind],
) -> Result<Vec<EnsembleReport>> {
    spec.validate()?;
    if variables.is_empty() {
        return Err(Error::InvalidParams("no variables requested".into()));
    }
    if let Generator::Empirical { .. } = spec.generator {
        if spec.n_paths != 1 {
            log::warn!("empirical ensemble uses its single series; n_paths = {} ignored", spec.n_paths);
        }
    }
    let source = Source::prepare(spec)?;
    let n_paths = spec.effective_paths();

    let outcomes: Vec<Result<Vec<PathSummary>>> = (0..n_paths)
        .into_par_iter()
        .map(|i| run_path(spec, &source, variables, i).map_err(|e| e.at_path(i)))
        .collect();
    let mut per_path = Vec::with_capacity(n_paths);
    for o in outcomes {
        per_path.push(o?);
    }

    Ok(variables
        .iter()
        .enumerate()
        .map(|(vi, &variable)| {
            let paths: Vec<PathSummary> = per_path.iter().map(|p| p[vi].clone()).collect();
            aggregate(spec, variable, paths)
        })
        .collect())
}

fn run_path(
    spec: &EnsembleSpec,
    source: &Source,
    variables: &[VariableKind],
    path_index: usize,
) -> Result<Vec<PathSummary>> {
    let returns = source.returns(spec, path_index)?;
    let cfg = &spec.ghe;
    let nq = cfg.q_values.len();

    let originals = variables
        .iter()
        .map(|&v| ghe::generalized_hurst(&build_variable(&returns, v)?, cfg))
        .collect::<Result<Vec<GheResult>>>()?;

    // shuffled_h[variable][shuffle][q]
    let mut shuffled_h = vec![Vec::with_capacity(spec.n_shuffles); variables.len()];
    let mut buf = returns.clone();
    for s in 0..spec.n_shuffles {
        buf.values.copy_from_slice(&returns.values);
        let mut rng = rng_for(spec.master_seed, path_index as u64, shuffle_stream(s));
        shuffle_in_place(&mut buf.values, &mut rng);
        for (vi, &v) in variables.iter().enumerate() {
            let res = ghe::generalized_hurst(&build_variable(&buf, v)?, cfg)?;
            shuffled_h[vi].push(res.estimates.iter().map(|e| e.h_mean).collect::<Vec<_>>());
        }
    }

    Ok(originals
        .into_iter()
        .zip(shuffled_h)
        .map(|(orig, shuf)| {
            let h: Vec<f64> = orig.estimates.iter().map(|e| e.h_mean).collect();
            let h_grid_std = orig.estimates.iter().map(|e| e.h_std).collect();
            let min_r2 = orig
                .estimates
                .iter()
                .map(|e| e.scaling_r2)
                .fold(f64::INFINITY, f64::min);
            let (h_shuffled, h_shuffled_std) = if shuf.is_empty() {
                (None, None)
            } else {
                let cols: Vec<Vec<f64>> = (0..nq)
                    .map(|qi| shuf.iter().map(|row| row[qi]).collect())
                    .collect();
                (
                    Some(cols.iter().map(|c| stats::mean(c)).collect::<Vec<_>>()),
                    Some(cols.iter().map(|c| stats::sample_std(c)).collect::<Vec<_>>()),
                )
            };
            let delta_h = orig.delta_h;
            let delta_h_shuff = h_shuffled
                .as_ref()
                .and_then(|hs| delta_from(&cfg.q_values, hs));
            PathSummary {
                h,
                h_grid_std,
                h_shuffled,
                h_shuffled_std,
                delta_h,
                delta_h_shuff,
                min_r2,
            }
        })
        .collect())
}

fn delta_from(qs: &[f64], hs: &[f64]) -> Option<f64> {
    let i1 = qs.iter().position(|&q| q == 1.0)?;
    let i3 = qs.iter().position(|&q| q == 3.0)?;
    Some(hs[i1] - hs[i3])
}

fn aggregate(spec: &EnsembleSpec, variable: VariableKind, paths: Vec<PathSummary>) -> EnsembleReport {
    let qs = &spec.ghe.q_values;
    let single = paths.len() == 1;
    let has_shuffles = spec.n_shuffles >= 1;

    let per_q = qs
        .iter()
        .enumerate()
        .map(|(qi, &q)| {
            let orig: Vec<f64> = paths.iter().map(|p| p.h[qi]).collect();
            let mut original = MeanStd::of(&orig);
            if single {
                // one series: report its tau_max-grid dispersion
                original.std = paths[0].h_grid_std[qi];
            }
            let (shuffled, shuffle_spread) = if has_shuffles {
                let sh: Vec<f64> = paths
                    .iter()
                    .map(|p| p.h_shuffled.as_ref().expect("shuffled block")[qi])
                    .collect();
                let spreads: Vec<f64> = paths
                    .iter()
                    .map(|p| p.h_shuffled_std.as_ref().expect("shuffled block")[qi])
                    .collect();
                let spread = stats::mean(&spreads);
                let mut m = MeanStd::of(&sh);
                if single {
                    m.std = spread;
                }
                (Some(m), Some(spread))
            } else {
                (None, None)
            };
            let shuffle_test = shuffled
                .and_then(|s| identity_test(original.mean, original.std, s.mean, s.std).ok());
            QSummary {
                q,
                original,
                shuffled,
                shuffle_spread,
                shuffle_test,
            }
        })
        .collect();

    let delta = |f: fn(&PathSummary) -> Option<f64>| -> Option<MeanStd> {
        let v: Option<Vec<f64>> = paths.iter().map(f).collect();
        v.map(|v| MeanStd::of(&v))
    };
    let delta_h = delta(|p| p.delta_h);
    let delta_h_shuff = if has_shuffles {
        delta(|p| p.delta_h_shuff)
    } else {
        None
    };
    let scaling_warnings = paths
        .iter()
        .filter(|p| p.min_r2 < ghe::SCALING_R2_WARNING)
        .count();
    if scaling_warnings > 0 {
        log::warn!(
            "{}: {scaling_warnings} of {} paths have log-log R² below {}",
            spec.generator,
            paths.len(),
            ghe::SCALING_R2_WARNING
        );
    }

    EnsembleReport {
        generator: spec.generator.name().to_string(),
        param_set: spec.generator.param_set(),
        variable,
        n_paths: paths.len(),
        n_shuffles: spec.n_shuffles,
        per_q,
        delta_h,
        delta_h_shuff,
        scaling_warnings,
        paths,
    }
}
