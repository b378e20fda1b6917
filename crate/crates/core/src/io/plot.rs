//! Plot-ready data: log-log structure functions and scaling functions.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::Result;
use crate::ghe::{self, GheConfig};
use crate::harness::seeds::{rng_for, shuffle_stream};
use crate::series::{build_variable, shuffle_in_place, ReturnSeries, SeriesPath, VariableKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    StructureFunctions,
    ScalingFunction,
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "structure_functions" | "structure" => Ok(PlotKind::StructureFunctions),
            "scaling_function" | "scaling" => Ok(PlotKind::ScalingFunction),
            other => Err(format!("unknown plot kind `{other}`")),
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlotKind::StructureFunctions => "structure_functions",
            PlotKind::ScalingFunction => "scaling_function",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureRow {
    pub q: f64,
    pub tau: usize,
    pub log_tau: f64,
    pub log_kq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub q: f64,
    pub qhq: f64,
    pub qhq_shuffled: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlotData {
    Structure(Vec<StructureRow>),
    Scaling(Vec<ScalingRow>),
}

/// `ln K_q(tau)` against `ln tau` for every configured q and
/// `tau = 1..=cfg.max_tau()`.
pub fn structure_function_rows(path: &SeriesPath, cfg: &GheConfig) -> Result<Vec<StructureRow>> {
    let table = ghe::structure_table(path, cfg)?;
    Ok(cfg
        .q_values
        .iter()
        .zip(&table)
        .flat_map(|(&q, ks)| {
            ks.iter().enumerate().map(move |(i, &k)| StructureRow {
                q,
                tau: i + 1,
                log_tau: ((i + 1) as f64).ln(),
                log_kq: k.ln(),
            })
        })
        .collect())
}

/// `q H(q)` over `q_grid` for the series and, when `n_shuffles > 0`, the
/// mean over that many shuffles of its returns.
pub fn scaling_function_rows(
    returns: &ReturnSeries,
    variable: VariableKind,
    q_grid: &[f64],
    cfg: &GheConfig,
    n_shuffles: usize,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    let original = ghe::scaling_function(&build_variable(returns, variable)?, q_grid, cfg)?;
    let mut sums = vec![0.0; q_grid.len()];
    let mut buf = returns.clone();
    for s in 0..n_shuffles {
        buf.values.copy_from_slice(&returns.values);
        shuffle_in_place(&mut buf.values, &mut rng_for(seed, 0, shuffle_stream(s)));
        let sf = ghe::scaling_function(&build_variable(&buf, variable)?, q_grid, cfg)?;
        for (acc, (_, v)) in sums.iter_mut().zip(sf) {
            *acc += v;
        }
    }
    Ok(original
        .into_iter()
        .zip(sums)
        .map(|((q, qhq), sum)| ScalingRow {
            q,
            qhq,
            qhq_shuffled: (n_shuffles > 0).then(|| sum / n_shuffles as f64),
        })
        .collect())
}

pub fn emit_plot_data<W: Write>(mut out: W, data: &PlotData) -> Result<()> {
    match data {
        PlotData::Structure(rows) => {
            writeln!(out, "q,tau,log_tau,log_Kq")?;
            for r in rows {
                writeln!(out, "{},{},{},{}", r.q, r.tau, r.log_tau, r.log_kq)?;
            }
        }
        PlotData::Scaling(rows) => {
            writeln!(out, "q,qHq,qHq_shuffled")?;
            for r in rows {
                let sh = r.qhq_shuffled.map_or_else(String::new, |v| v.to_string());
                writeln!(out, "{},{},{sh}", r.q, r.qhq)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
