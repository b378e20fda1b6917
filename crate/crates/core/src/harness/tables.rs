//! Drives ensembles over the fixed parameter grids and flattens the
//! reports into result rows.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::ensemble::{
    run_ensemble_multi, EnsembleReport, EnsembleSpec, Generator, DEFAULT_N_PATHS,
    DEFAULT_N_SHUFFLES, DEFAULT_PATH_LENGTH, DESK_N_PATHS,
};
use super::inference::{delta_h_comparison, identity_test, IdentityTest};
use super::seeds::derive_seed;
use crate::error::{Error, Result};
use crate::generators::{ArfimaParams, StableParams};
use crate::msm::msm_fixtures;
use crate::series::{ReturnSeries, VariableKind};

/// Length of the simulated stable, fGn and ARFIMA series.
pub const ROBUSTNESS_PATH_LENGTH: usize = 8192;
pub const STABLE_ALPHAS: [f64; 5] = [1.2, 1.4, 1.6, 1.8, 2.0];
pub const FGN_HURSTS: [f64; 5] = [0.3, 0.4, 0.5, 0.6, 0.7];
pub const ARFIMA_DS: [f64; 5] = [-0.2, -0.1, 0.0, 0.1, 0.2];
pub const ARFIMA_AR1: f64 = 0.4;
pub const MSM_DEPTHS: [usize; 4] = [5, 10, 15, 20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
}

impl TableId {
    pub const ALL: [TableId; 8] = [
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T7,
        TableId::T8,
        TableId::T9,
    ];

    fn code(self) -> u64 {
        match self {
            TableId::T2 => 2,
            TableId::T3 => 3,
            TableId::T4 => 4,
            TableId::T5 => 5,
            TableId::T6 => 6,
            TableId::T7 => 7,
            TableId::T8 => 8,
            TableId::T9 => 9,
        }
    }

    pub fn uses_empirical(self) -> bool {
        matches!(self, TableId::T2 | TableId::T3 | TableId::T4 | TableId::T9)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.code())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown table `{s}` (expected T2..T9)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Full,
    Desk,
}

impl Scale {
    pub fn n_paths(self) -> usize {
        match self {
            Scale::Full => DEFAULT_N_PATHS,
            Scale::Desk => DESK_N_PATHS,
        }
    }
}

/// An observed return series keyed by the asset name used in the fixtures.
#[derive(Debug, Clone)]
pub struct EmpiricalSeries {
    pub asset: String,
    pub returns: Arc<ReturnSeries>,
}

#[derive(Debug, Clone)]
pub struct TableOptions {
    pub scale: Scale,
    pub master_seed: u64,
    /// Overrides the scale's path count.
    pub n_paths: Option<usize>,
    pub n_shuffles: usize,
    /// Overrides the per-table default series length.
    pub path_length: Option<usize>,
    pub empirical: Vec<EmpiricalSeries>,
}

impl TableOptions {
    pub fn new(scale: Scale, master_seed: u64) -> Self {
        Self {
            scale,
            master_seed,
            n_paths: None,
            n_shuffles: DEFAULT_N_SHUFFLES,
            path_length: None,
            empirical: Vec::new(),
        }
    }

    fn paths(&self) -> usize {
        self.n_paths.unwrap_or(self.scale.n_paths())
    }
}

/// One line of the result CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub table: String,
    pub generator: String,
    pub param_set: String,
    pub variable: String,
    pub q: Option<f64>,
    pub stat: String,
    pub original_mean: f64,
    pub original_std: f64,
    pub shuffled_mean: Option<f64>,
    pub shuffled_std: Option<f64>,
    pub delta_h: Option<f64>,
    pub delta_h_shuff: Option<f64>,
    pub test_z: Option<f64>,
    pub reject95: Option<bool>,
}

pub const STAT_H: &str = "H";
pub const STAT_H_SHUFFLED: &str = "H_shuffled";
pub const STAT_SHUFFLE_SPREAD: &str = "shuffle_spread";
pub const STAT_DELTA_H: &str = "delta_h";

#[derive(Debug, Clone)]
pub struct TableOutput {
    pub table: TableId,
    pub rows: Vec<ResultRow>,
    pub reports: Vec<EnsembleReport>,
    pub warnings: Vec<String>,
}

/// Asset names compared on their alphanumeric characters, ignoring case, so
/// a file stem like `DM-US` or `dmus` matches `DM/US`.
pub fn same_asset(a: &str, b: &str) -> bool {
    let norm = |s: &str| {
        s.chars()
            .filter(char::is_ascii_alphanumeric)
            .map(|c| c.to_ascii_lowercase())
            .collect::<String>()
    };
    norm(a) == norm(b)
}

fn test_cols(t: Option<IdentityTest>) -> (Option<f64>, Option<bool>) {
    (t.map(|t| t.statistic), t.map(|t| t.reject_at_95))
}

/// Rows for one report: an `H` row per q, a `shuffle_spread` row per q when
/// shuffled, and a closing `delta_h` row.
///
/// Without a reference, `test_z` on `H` rows compares original with
/// shuffled exponents. With an empirical reference it compares the report
/// with the reference (original block on `H`, shuffled block on
/// `H_shuffled`).
pub fn report_rows(
    table: &str,
    report: &EnsembleReport,
    reference: Option<&EnsembleReport>,
) -> Vec<ResultRow> {
    let base = ResultRow {
        table: table.to_string(),
        generator: report.generator.clone(),
        param_set: report.param_set.clone(),
        variable: report.variable.to_string(),
        q: None,
        stat: String::new(),
        original_mean: f64::NAN,
        original_std: f64::NAN,
        shuffled_mean: None,
        shuffled_std: None,
        delta_h: report.delta_h.map(|d| d.mean),
        delta_h_shuff: report.delta_h_shuff.map(|d| d.mean),
        test_z: None,
        reject95: None,
    };
    let mut rows = Vec::new();
    for s in &report.per_q {
        let reference_q = reference.and_then(|r| r.get(s.q));
        let test = match reference_q {
            Some(e) => identity_test(e.original.mean, e.original.std, s.original.mean, s.original.std).ok(),
            None => s.shuffle_test,
        };
        let (test_z, reject95) = test_cols(test);
        let h_row = ResultRow {
            q: Some(s.q),
            stat: STAT_H.into(),
            original_mean: s.original.mean,
            original_std: s.original.std,
            shuffled_mean: s.shuffled.map(|m| m.mean),
            shuffled_std: s.shuffled.map(|m| m.std),
            test_z,
            reject95,
            ..base.clone()
        };
        rows.push(h_row.clone());
        if let (Some(e), Some(sh)) = (reference_q, s.shuffled) {
            if let Some(esh) = e.shuffled {
                let (test_z, reject95) =
                    test_cols(identity_test(esh.mean, esh.std, sh.mean, sh.std).ok());
                rows.push(ResultRow {
                    stat: STAT_H_SHUFFLED.into(),
                    test_z,
                    reject95,
                    ..h_row.clone()
                });
            }
        }
        if let Some(spread) = s.shuffle_spread {
            rows.push(ResultRow {
                stat: STAT_SHUFFLE_SPREAD.into(),
                shuffled_std: Some(spread),
                test_z: None,
                reject95: None,
                ..h_row
            });
        }
    }
    if let Some(d) = report.delta_h {
        let cmp = delta_h_comparison(report).ok();
        let (test_z, reject95) = test_cols(cmp.and_then(|c| c.test));
        rows.push(ResultRow {
            stat: STAT_DELTA_H.into(),
            original_mean: d.mean,
            original_std: d.std,
            shuffled_mean: report.delta_h_shuff.map(|x| x.mean),
            shuffled_std: report.delta_h_shuff.map(|x| x.std),
            test_z,
            reject95,
            ..base
        });
    }
    rows
}

/// Parameter sets of a table, in output order.
pub fn table_generators(table: TableId) -> Result<Vec<(Generator, Option<String>)>> {
    let mut out = Vec::new();
    match table {
        TableId::T2 | TableId::T3 | TableId::T4 | TableId::T9 => {
            for f in msm_fixtures() {
                out.push((Generator::Msm(f.params()?), Some(f.asset.clone())));
            }
        }
        TableId::T5 => {
            for a in STABLE_ALPHAS {
                out.push((Generator::Stable(StableParams::standard(a)?), None));
            }
        }
        TableId::T6 => {
            for h in FGN_HURSTS {
                out.push((Generator::Fbm { hurst: h }, None));
            }
        }
        TableId::T7 | TableId::T8 => {
            let ar1 = (table == TableId::T8).then_some(ARFIMA_AR1);
            for a in STABLE_ALPHAS {
                for d in ARFIMA_DS {
                    match ArfimaParams::new(a, d, ar1) {
                        Ok(p) => out.push((Generator::Arfima(p), None)),
                        Err(e) => log::warn!("{table}: skipping alpha={a}, d={d}: {e}"),
                    }
                }
            }
        }
    }
    Ok(out)
}

fn variables_for(table: TableId) -> Vec<VariableKind> {
    match table {
        TableId::T3 => vec![VariableKind::CumAbsReturn],
        TableId::T4 => vec![VariableKind::CumSqReturn],
        TableId::T9 => VariableKind::ALL.to_vec(),
        _ => vec![VariableKind::Price],
    }
}

fn default_length(table: TableId) -> usize {
    match table {
        TableId::T5 | TableId::T6 | TableId::T7 | TableId::T8 => ROBUSTNESS_PATH_LENGTH,
        _ => DEFAULT_PATH_LENGTH,
    }
}

pub fn reproduce_table(table: TableId, opts: &TableOptions) -> Result<TableOutput> {
    let variables = variables_for(table);
    let label = table.to_string();
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut warnings = Vec::new();

    // Empirical references, one per asset, evaluated once.
    let mut references: Vec<(String, Vec<EnsembleReport>)> = Vec::new();
    if table.uses_empirical() {
        let mut seen = Vec::new();
        for (_, asset) in table_generators(table)? {
            let asset = asset.expect("MSM rows carry an asset");
            if seen.contains(&asset) {
                continue;
            }
            seen.push(asset.clone());
            match opts.empirical.iter().find(|e| same_asset(&e.asset, &asset)) {
                Some(e) => {
                    let spec = EnsembleSpec {
                        n_paths: 1,
                        n_shuffles: opts.n_shuffles,
                        master_seed: derive_seed(opts.master_seed, table.code(), 1_000_000 + seen.len() as u64),
                        ..EnsembleSpec::new(Generator::Empirical {
                            id: asset.clone(),
                            returns: Arc::clone(&e.returns),
                        })
                    };
                    let reps = run_ensemble_multi(&spec, &variables)?;
                    for r in &reps {
                        rows.extend(report_rows(&label, r, None));
                    }
                    references.push((asset, reps));
                }
                None => {
                    let msg = Error::MissingEmpiricalData(format!(
                        "{asset}: empirical column skipped"
                    ))
                    .to_string();
                    log::warn!("{label}: {msg}");
                    warnings.push(msg);
                }
            }
        }
    }

    for (index, (generator, asset)) in table_generators(table)?.into_iter().enumerate() {
        let spec = EnsembleSpec {
            n_paths: opts.paths(),
            path_length: opts.path_length.unwrap_or(default_length(table)),
            n_shuffles: opts.n_shuffles,
            master_seed: derive_seed(opts.master_seed, table.code(), index as u64),
            ..EnsembleSpec::new(generator)
        };
        let reps = run_ensemble_multi(&spec, &variables)?;
        let reference = asset.as_ref().and_then(|a| {
            references
                .iter()
                .find(|(name, _)| name == a)
                .map(|(_, r)| r)
        });
        for (vi, r) in reps.iter().enumerate() {
            let reference = reference.map(|refs| &refs[vi]);
            let mut new_rows = report_rows(&label, r, reference);
            if let Some(a) = &asset {
                for row in &mut new_rows {
                    row.param_set = format!("asset={a};{}", row.param_set);
                }
            }
            if table == TableId::T9 {
                new_rows.retain(|row| row.stat == STAT_DELTA_H);
            }
            rows.extend(new_rows);
        }
        reports.extend(reps);
    }
    if table == TableId::T9 {
        rows.retain(|row| row.stat == STAT_DELTA_H);
    }

    Ok(TableOutput {
        table,
        rows,
        reports,
        warnings,
    })
}
