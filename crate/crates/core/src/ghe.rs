//! Generalized Hurst exponent estimation.
//!
//! For a level series `X(t)` the q-order structure function is
//!
//! ```text
//! K_q(tau) = < |X(t + tau) - X(t)|^q > / < |X(t)|^q >
//! ```
//!
//! and `H(q)` is read off the scaling `K_q(tau) ~ tau^(q H(q))` by an
//! ordinary least-squares fit in log-log space over `tau = 1..=tau_max`.
//! The reported exponent is the mean of those fits over a grid of
//! `tau_max` values; their standard deviation is the reported dispersion.
//!
//! All sums run left to right in a fixed order so results are bit-for-bit
//! reproducible regardless of how callers parallelize over paths.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::series::SeriesPath;
use crate::stats;

/// Above this order the moment scaling of finite financial samples is known
/// to break down; larger q is allowed but logged.
pub const MAX_RECOMMENDED_Q: f64 = 3.0;

/// R² below which a log-log fit is reported as a scaling violation.
pub const SCALING_R2_WARNING: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct GheConfig {
    pub q_values: Vec<f64>,
    /// Inclusive range of `tau_max` values averaged over.
    pub tau_max_range: RangeInclusive<usize>,
    pub detrend: bool,
}

impl Default for GheConfig {
    fn default() -> Self {
        Self {
            q_values: vec![1.0, 2.0, 3.0],
            tau_max_range: 5..=19,
            detrend: true,
        }
    }
}

impl GheConfig {
    pub fn max_tau(&self) -> usize {
        *self.tau_max_range.end()
    }

    /// Smallest series length the configuration accepts.
    pub fn min_series_len(&self) -> usize {
        4 * self.max_tau() + 1
    }

    /// Checks the configuration on its own and against a series length.
    pub fn validate(&self, series_len: usize) -> Result<()> {
        self.validate_params()?;
        if series_len < self.min_series_len() {
            return Err(Error::TooShort {
                needed: self.min_series_len(),
                got: series_len,
            });
        }
        Ok(())
    }

    pub fn validate_params(&self) -> Result<()> {
        if self.q_values.is_empty() {
            return Err(Error::InvalidParams("q_values is empty".into()));
        }
        for &q in &self.q_values {
            if !(q.is_finite() && q > 0.0) {
                return Err(Error::InvalidParams(format!("q must be positive, got {q}")));
            }
            if q > MAX_RECOMMENDED_Q {
                log::warn!("q = {q} exceeds {MAX_RECOMMENDED_Q}; moment scaling may not hold");
            }
        }
        let (lo, hi) = (*self.tau_max_range.start(), *self.tau_max_range.end());
        if lo < 2 || hi < lo {
            return Err(Error::InvalidParams(format!(
                "tau_max range {lo}..={hi} must satisfy 2 <= lower <= upper"
            )));
        }
        Ok(())
    }
}

/// Exponent estimate for one moment order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QEstimate {
    pub q: f64,
    /// Mean of the fitted H(q) over the tau_max grid.
    pub h_mean: f64,
    /// Sample standard deviation of the fitted H(q) over the tau_max grid.
    pub h_std: f64,
    /// R² of the log-log fit at the largest tau_max.
    pub scaling_r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GheResult {
    pub estimates: Vec<QEstimate>,
    /// `H(1) - H(3)` when both orders were estimated.
    pub delta_h: Option<f64>,
}

impl GheResult {
    pub fn get(&self, q: f64) -> Option<&QEstimate> {
        self.estimates.iter().find(|e| e.q == q)
    }

    pub fn h(&self, q: f64) -> Option<f64> {
        self.get(q).map(|e| e.h_mean)
    }

    pub fn scaling_warnings(&self) -> impl Iterator<Item = &QEstimate> {
        self.estimates
            .iter()
            .filter(|e| e.scaling_r2 < SCALING_R2_WARNING)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    pub eta: f64,
}

/// Mean one-step increment `(X(T) - X(1)) / (T - 1)`.
pub fn estimate_drift(path: &SeriesPath) -> Result<DriftEstimate> {
    let x = &path.values;
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let eta = (x[x.len() - 1] - x[0]) / (x.len() - 1) as f64;
    Ok(DriftEstimate { eta })
}

/// Removes `eta * t` from the path, `t = 0, 1, ...`.
pub fn detrend_linear(path: &SeriesPath, drift: DriftEstimate) -> SeriesPath {
    SeriesPath {
        values: path
            .values
            .iter()
            .enumerate()
            .map(|(t, v)| v - drift.eta * t as f64)
            .collect(),
        variable: path.variable,
    }
}

#[inline]
fn abs_pow(x: f64, q: f64) -> f64 {
    let a = x.abs();
    if q == 1.0 {
        a
    } else if q == 2.0 {
        a * a
    } else if q == 3.0 {
        a * a * a
    } else {
        a.powf(q)
    }
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("q must be positive, got {q}")))
    }
}

fn level_moment(x: &[f64], q: f64) -> Result<f64> {
    let mut sum = 0.0;
    for &v in x {
        sum += abs_pow(v, q);
    }
    let m = sum / x.len() as f64;
    if m > 0.0 && m.is_finite() {
        Ok(m)
    } else {
        Err(Error::DegenerateSeries(format!(
            "<|X(t)|^{q}> = {m}; the path has no non-zero level"
        )))
    }
}

fn increment_moment(x: &[f64], q: f64, tau: usize) -> f64 {
    let n = x.len() - tau;
    let mut sum = 0.0;
    for t in 0..n {
        sum += abs_pow(x[t + tau] - x[t], q);
    }
    sum / n as f64
}

fn check_tau(tau: usize, len: usize) -> Result<()> {
    if tau == 0 {
        return Err(Error::InvalidParams("tau must be at least 1".into()));
    }
    if tau >= len {
        return Err(Error::TauTooLarge { tau, len });
    }
    Ok(())
}

/// `K_q(tau)` of the path as given (no detrending).
pub fn structure_function(path: &SeriesPath, q: f64, tau: usize) -> Result<f64> {
    check_q(q)?;
    check_tau(tau, path.len())?;
    let denom = level_moment(&path.values, q)?;
    Ok(increment_moment(&path.values, q, tau) / denom)
}

/// `K_q(tau)` for `tau = 1..=max_tau`, sharing the denominator.
pub fn structure_functions(path: &SeriesPath, q: f64, max_tau: usize) -> Result<Vec<f64>> {
    check_q(q)?;
    check_tau(max_tau, path.len())?;
    let denom = level_moment(&path.values, q)?;
    Ok((1..=max_tau)
        .map(|tau| increment_moment(&path.values, q, tau) / denom)
        .collect())
}

/// OLS fit of `log K` against `log tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fits `log K_q(tau) = a + slope * log tau` for `tau = 1..=k.len()`.
pub fn fit_scaling(q: f64, k: &[f64]) -> Result<ScalingFit> {
    if k.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "need tau_max >= 2 for a scaling fit, got {}",
            k.len()
        )));
    }
    let mut xs = Vec::with_capacity(k.len());
    let mut ys = Vec::with_capacity(k.len());
    for (i, &kq) in k.iter().enumerate() {
        if !(kq > 0.0 && kq.is_finite()) {
            return Err(Error::NonPositiveStructureFunction { q, tau: i + 1 });
        }
        xs.push(((i + 1) as f64).ln());
        ys.push(kq.ln());
    }
    let (slope, intercept, r2) = stats::ols(&xs, &ys);
    Ok(ScalingFit {
        slope,
        intercept,
        r2,
    })
}

/// `H(q)` from a single log-log fit over `tau = 1..=tau_max`.
pub fn fit_hurst(path: &SeriesPath, q: f64, tau_max: usize) -> Result<f64> {
    if tau_max < 2 {
        return Err(Error::InvalidParams(format!(
            "tau_max must be at least 2, got {tau_max}"
        )));
    }
    let k = structure_functions(path, q, tau_max)?;
    Ok(fit_scaling(q, &k)?.slope / q)
}

/// R² of the log-log regression used by [`fit_hurst`].
pub fn scaling_diagnostic(path: &SeriesPath, q: f64, tau_max: usize) -> Result<f64> {
    if tau_max < 2 {
        return Err(Error::InvalidParams(format!(
            "tau_max must be at least 2, got {tau_max}"
        )));
    }
    let k = structure_functions(path, q, tau_max)?;
    Ok(fit_scaling(q, &k)?.r2)
}

/// Summarizes precomputed structure functions into a [`GheResult`].
///
/// `k_table[i]` holds `K_q(tau)` for `q = cfg.q_values[i]` and
/// `tau = 1..=cfg.max_tau()`.
pub fn ghe_from_structure(cfg: &GheConfig, k_table: &[Vec<f64>]) -> Result<GheResult> {
    cfg.validate_params()?;
    if k_table.len() != cfg.q_values.len() {
        return Err(Error::InvalidParams(format!(
            "{} structure-function rows for {} q values",
            k_table.len(),
            cfg.q_values.len()
        )));
    }
    let mut estimates = Vec::with_capacity(cfg.q_values.len());
    for (&q, k) in cfg.q_values.iter().zip(k_table) {
        if k.len() < cfg.max_tau() {
            return Err(Error::InvalidParams(format!(
                "structure function for q = {q} has {} lags, need {}",
                k.len(),
                cfg.max_tau()
            )));
        }
        let mut hs = Vec::with_capacity(cfg.tau_max_range.clone().count());
        let mut last_r2 = 0.0;
        for tau_max in cfg.tau_max_range.clone() {
            let fit = fit_scaling(q, &k[..tau_max])?;
            hs.push(fit.slope / q);
            last_r2 = fit.r2;
        }
        estimates.push(QEstimate {
            q,
            h_mean: stats::mean(&hs),
            h_std: stats::sample_std(&hs),
            scaling_r2: last_r2,
        });
    }
    let delta_h = delta_h(&estimates);
    Ok(GheResult { estimates, delta_h })
}

pub(crate) fn delta_h(estimates: &[QEstimate]) -> Option<f64> {
    let h1 = estimates.iter().find(|e| e.q == 1.0)?.h_mean;
    let h3 = estimates.iter().find(|e| e.q == 3.0)?.h_mean;
    Some(h1 - h3)
}

fn prepare(path: &SeriesPath, cfg: &GheConfig) -> Result<SeriesPath> {
    cfg.validate(path.len())?;
    if cfg.detrend {
        let drift = estimate_drift(path)?;
        Ok(detrend_linear(path, drift))
    } else {
        Ok(path.clone())
    }
}

/// Structure functions of the (optionally detrended) path for every
/// configured q, `tau = 1..=cfg.max_tau()`.
///
/// One pass over the increments per lag serves every q. Each q keeps its own
/// left-to-right accumulator, so the values are bit-identical to
/// [`structure_functions`] on the same path.
pub fn structure_table(path: &SeriesPath, cfg: &GheConfig) -> Result<Vec<Vec<f64>>> {
    let x = prepare(path, cfg)?;
    let qs = &cfg.q_values;
    let max_tau = cfg.max_tau();
    check_tau(max_tau, x.len())?;
    let denoms = qs
        .iter()
        .map(|&q| level_moment(&x.values, q))
        .collect::<Result<Vec<_>>>()?;

    let v = &x.values;
    let mut table = vec![Vec::with_capacity(max_tau); qs.len()];
    let mut sums = vec![0.0; qs.len()];
    for tau in 1..=max_tau {
        sums.iter_mut().for_each(|s| *s = 0.0);
        let n = v.len() - tau;
        for t in 0..n {
            let a = (v[t + tau] - v[t]).abs();
            for (s, &q) in sums.iter_mut().zip(qs) {
                *s += abs_pow(a, q);
            }
        }
        for ((row, s), d) in table.iter_mut().zip(&sums).zip(&denoms) {
            row.push(s / n as f64 / d);
        }
    }
    Ok(table)
}

pub fn generalized_hurst(path: &SeriesPath, cfg: &GheConfig) -> Result<GheResult> {
    let table = structure_table(path, cfg)?;
    ghe_from_structure(cfg, &table)
}

/// Points `(q, q H(q))` of the scaling function over `q_grid`.
pub fn scaling_function(
    path: &SeriesPath,
    q_grid: &[f64],
    cfg: &GheConfig,
) -> Result<Vec<(f64, f64)>> {
    let cfg = GheConfig {
        q_values: q_grid.to_vec(),
        ..cfg.clone()
    };
    let result = generalized_hurst(path, &cfg)?;
    Ok(result
        .estimates
        .iter()
        .map(|e| (e.q, e.q * e.h_mean))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::VariableKind;
    use proptest::prelude::*;

    fn path(values: &[f64]) -> SeriesPath {
        SeriesPath::new(values.to_vec(), VariableKind::Price)
    }

    #[test]
    fn drift_examples() {
        assert_eq!(estimate_drift(&path(&[0.0, 1.0, 2.0, 3.0])).unwrap().eta, 1.0);
        assert_eq!(estimate_drift(&path(&[5.0, 5.0, 5.0])).unwrap().eta, 0.0);
        let eta = estimate_drift(&path(&[0.0, 0.3, 0.1, 0.9])).unwrap().eta;
        assert!((eta - 0.3).abs() < 1e-15);
        assert!(matches!(
            estimate_drift(&path(&[1.0])),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn detrend_examples() {
        let x = path(&[0.0, 1.0, 2.0, 3.0]);
        let d = detrend_linear(&x, DriftEstimate { eta: 1.0 });
        assert_eq!(d.values, vec![0.0; 4]);

        let x = path(&[0.0, 0.3, 0.1, 0.9]);
        assert_eq!(detrend_linear(&x, DriftEstimate { eta: 0.0 }), x);

        let d = detrend_linear(&x, estimate_drift(&x).unwrap());
        for (a, b) in d.values.iter().zip([0.0, 0.0, -0.5, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(estimate_drift(&d).unwrap().eta.abs() < 1e-12);
    }

    #[test]
    fn structure_function_examples() {
        let x = path(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(structure_function(&x, 1.0, 1).unwrap(), 2.0);

        let c = path(&[3.0; 10]);
        for q in [0.5, 1.0, 2.0, 3.0] {
            for tau in 1..5 {
                assert_eq!(structure_function(&c, q, tau).unwrap(), 0.0);
            }
        }

        assert_eq!(structure_function(&path(&[0.0, 2.0]), 2.0, 1).unwrap(), 2.0);
    }

    #[test]
    fn structure_function_errors() {
        assert!(matches!(
            structure_function(&path(&[0.0; 8]), 1.0, 1),
            Err(Error::DegenerateSeries(_))
        ));
        assert!(matches!(
            structure_function(&path(&[1.0, 2.0, 3.0]), 1.0, 3),
            Err(Error::TauTooLarge { tau: 3, len: 3 })
        ));
        assert!(matches!(
            structure_function(&path(&[1.0, 2.0, 3.0]), 0.0, 1),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn fit_recovers_injected_power_law() {
        for &h in &[0.2, 0.5, 0.73] {
            for &q in &[0.5, 1.0, 2.0, 3.0, 4.5] {
                for tau_max in [2, 5, 19, 40] {
                    let k: Vec<f64> = (1..=tau_max)
                        .map(|t| 1.7 * (t as f64).powf(q * h))
                        .collect();
                    let fit = fit_scaling(q, &k).unwrap();
                    assert!((fit.slope / q - h).abs() < 1e-12);
                    assert!((fit.r2 - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exact_power_law_gives_zero_dispersion() {
        let cfg = GheConfig::default();
        let table: Vec<Vec<f64>> = cfg
            .q_values
            .iter()
            .map(|&q| (1..=19).map(|t| (t as f64).powf(0.4 * q)).collect())
            .collect();
        let res = ghe_from_structure(&cfg, &table).unwrap();
        for e in &res.estimates {
            assert!((e.h_mean - 0.4).abs() < 1e-12);
            assert!(e.h_std < 1e-12);
            assert!((e.scaling_r2 - 1.0).abs() < 1e-12);
        }
        assert!(res.delta_h.unwrap().abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_zero_structure_function() {
        let k = [1.0, 0.0, 2.0];
        assert!(matches!(
            fit_scaling(1.0, &k),
            Err(Error::NonPositiveStructureFunction { tau: 2, .. })
        ));
        // undetrended alternating path has K_q = 0 at even lags
        let x = path(&[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            fit_hurst(&x, 1.0, 4),
            Err(Error::NonPositiveStructureFunction { tau: 2, .. })
        ));
        assert!(matches!(fit_hurst(&x, 1.0, 1), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn alternating_path_is_flagged() {
        let raw: Vec<f64> = (0..400).map(|t| (t % 2) as f64).collect();
        let x = path(&raw);
        let d = detrend_linear(&x, estimate_drift(&x).unwrap());
        let r2 = scaling_diagnostic(&d, 1.0, 19).unwrap();
        assert!(r2 < SCALING_R2_WARNING, "r2 = {r2}");
        assert!((0.0..=1.0).contains(&r2));
    }

    #[test]
    fn fused_table_matches_per_q_functions() {
        let raw: Vec<f64> = (0..300)
            .map(|t| ((t * 7919) % 113) as f64 * 0.37 - (t as f64).sqrt())
            .collect();
        let x = path(&raw);
        let cfg = GheConfig {
            q_values: vec![0.5, 1.0, 2.0, 2.5, 3.0],
            ..GheConfig::default()
        };
        let table = structure_table(&x, &cfg).unwrap();
        let d = detrend_linear(&x, estimate_drift(&x).unwrap());
        for (row, &q) in table.iter().zip(&cfg.q_values) {
            assert_eq!(row, &structure_functions(&d, q, 19).unwrap());
            for (tau, &k) in row.iter().enumerate() {
                assert_eq!(k, structure_function(&d, q, tau + 1).unwrap());
            }
        }
    }

    #[test]
    fn config_validation() {
        let cfg = GheConfig::default();
        assert!(cfg.validate(77).is_ok());
        assert!(matches!(cfg.validate(76), Err(Error::TooShort { needed: 77, .. })));
        let bad = GheConfig {
            q_values: vec![1.0, -2.0],
            ..GheConfig::default()
        };
        assert!(bad.validate(1000).is_err());
        let bad = GheConfig {
            tau_max_range: 1..=19,
            ..GheConfig::default()
        };
        assert!(bad.validate(1000).is_err());
        let high_q = GheConfig {
            q_values: vec![4.0],
            ..GheConfig::default()
        };
        assert!(high_q.validate(1000).is_ok());
    }

    #[test]
    fn delta_h_requires_both_orders() {
        let cfg = GheConfig {
            q_values: vec![1.0, 2.0],
            ..GheConfig::default()
        };
        let table: Vec<Vec<f64>> = cfg
            .q_values
            .iter()
            .map(|&q| (1..=19).map(|t| (t as f64).powf(0.5 * q)).collect())
            .collect();
        assert_eq!(ghe_from_structure(&cfg, &table).unwrap().delta_h, None);
    }

    proptest! {
        #[test]
        fn structure_function_is_sign_and_scale_free(
            values in prop::collection::vec(-50f64..50.0, 8..64),
            c in prop_oneof![-20f64..-0.05, 0.05f64..20.0],
            q in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0]),
            tau in 1usize..7,
        ) {
            prop_assume!(values.iter().any(|v| v.abs() > 1e-3));
            let x = path(&values);
            let base = structure_function(&x, q, tau).unwrap();
            let flipped = path(&values.iter().map(|v| -v).collect::<Vec<_>>());
            let scaled = path(&values.iter().map(|v| c * v).collect::<Vec<_>>());
            prop_assert_eq!(structure_function(&flipped, q, tau).unwrap(), base);
            let s = structure_function(&scaled, q, tau).unwrap();
            prop_assert!((s - base).abs() <= 1e-10 * base.max(1.0));
        }

        #[test]
        fn delta_h_is_difference_of_means(
            h1 in 0.05f64..0.95, h2 in 0.05f64..0.95, h3 in 0.05f64..0.95,
        ) {
            let cfg = GheConfig::default();
            let hs = [h1, h2, h3];
            let table: Vec<Vec<f64>> = cfg.q_values.iter().zip(hs)
                .map(|(&q, h)| (1..=19).map(|t| (t as f64).powf(q * h)).collect())
                .collect();
            let res = ghe_from_structure(&cfg, &table).unwrap();
            prop_assert_eq!(res.delta_h.unwrap(), res.h(1.0).unwrap() - res.h(3.0).unwrap());
            for e in &res.estimates {
                prop_assert!(e.h_std >= 0.0);
                prop_assert!((0.0..=1.0).contains(&e.scaling_r2));
            }
        }
    }
}
