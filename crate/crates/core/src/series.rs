//! Return series construction and the cumulative variables the estimator
//! runs on: the (log-)price path, cumulated absolute returns and cumulated
//! squared returns.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReturnKind {
    /// `ln p[t+1] - ln p[t]`, used for equity indices and FX rates.
    LogReturn,
    /// `p[t+1] - p[t]`, used for interest-rate series.
    Difference,
}

impl fmt::Display for ReturnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReturnKind::LogReturn => "log_return",
            ReturnKind::Difference => "difference",
        })
    }
}

impl FromStr for ReturnKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "log_return" | "log" => Ok(ReturnKind::LogReturn),
            "difference" | "diff" => Ok(ReturnKind::Difference),
            other => Err(format!("unknown return kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableKind {
    Price,
    CumAbsReturn,
    CumSqReturn,
}

impl VariableKind {
    pub const ALL: [VariableKind; 3] = [
        VariableKind::Price,
        VariableKind::CumAbsReturn,
        VariableKind::CumSqReturn,
    ];
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariableKind::Price => "price",
            VariableKind::CumAbsReturn => "cum_abs_return",
            VariableKind::CumSqReturn => "cum_sq_return",
        })
    }
}

impl FromStr for VariableKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "price" => Ok(VariableKind::Price),
            "cum_abs_return" | "abs" => Ok(VariableKind::CumAbsReturn),
            "cum_sq_return" | "sq" => Ok(VariableKind::CumSqReturn),
            other => Err(format!("unknown variable kind `{other}`")),
        }
    }
}

/// Increments `r_t` of a series, tagged with how they were built.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub values: Vec<f64>,
    pub kind: ReturnKind,
    pub demeaned: bool,
}

impl ReturnSeries {
    pub fn new(values: Vec<f64>, kind: ReturnKind) -> Self {
        Self {
            values,
            kind,
            demeaned: false,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A level series `X(t)` indexed by integer time.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPath {
    pub values: Vec<f64>,
    pub variable: VariableKind,
}

impl SeriesPath {
    pub fn new(values: Vec<f64>, variable: VariableKind) -> Self {
        Self { values, variable }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn make_returns(prices: &[f64], kind: ReturnKind) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: prices.len(),
        });
    }
    let values = match kind {
        ReturnKind::LogReturn => {
            if let Some((index, &value)) = prices.iter().enumerate().find(|(_, p)| p.is_nan() || **p <= 0.0) {
                return Err(Error::NonPositivePrice { index, value });
            }
            prices.windows(2).map(|w| w[1].ln() - w[0].ln()).collect()
        }
        ReturnKind::Difference => prices.windows(2).map(|w| w[1] - w[0]).collect(),
    };
    Ok(ReturnSeries::new(values, kind))
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn demean(r: &ReturnSeries) -> ReturnSeries {
    let m = mean(&r.values);
    ReturnSeries {
        values: r.values.iter().map(|v| v - m).collect(),
        kind: r.kind,
        demeaned: true,
    }
}

/// Builds one of the three cumulative variables from returns.
///
/// The price path starts at level 0 and has one more point than `r`; the
/// two volatility variables start at the first cumulated term.
pub fn build_variable(r: &ReturnSeries, variable: VariableKind) -> Result<SeriesPath> {
    if r.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: r.len(),
        });
    }
    let values = match variable {
        VariableKind::Price => std::iter::once(0.0)
            .chain(r.values.iter().scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            }))
            .collect(),
        VariableKind::CumAbsReturn => cumulate(r.values.iter().map(|v| v.abs())),
        VariableKind::CumSqReturn => cumulate(r.values.iter().map(|v| v * v)),
    };
    Ok(SeriesPath::new(values, variable))
}

fn cumulate(terms: impl Iterator<Item = f64>) -> Vec<f64> {
    terms
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Fisher-Yates permutation of the returns. The multiset of values is kept,
/// every temporal correlation is destroyed.
pub fn shuffle<R: Rng + ?Sized>(r: &ReturnSeries, rng: &mut R) -> ReturnSeries {
    let mut values = r.values.clone();
    shuffle_in_place(&mut values, rng);
    ReturnSeries {
        values,
        kind: r.kind,
        demeaned: r.demeaned,
    }
}

pub(crate) fn shuffle_in_place<R: Rng + ?Sized>(values: &mut [f64], rng: &mut R) {
    for i in (1..values.len()).rev() {
        let j = rng.random_range(0..=i);
        values.swap(i, j);
    }
}
