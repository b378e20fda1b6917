//! Generalized Hurst exponent (GHE) analysis of time series, with the
//! simulators and Monte Carlo machinery needed to tell apart multifractality
//! coming from fat tails and multifractality coming from temporal
//! correlations.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: returns, demeaning, shuffling and the cumulative variables
//! - [`ghe`]: structure functions and the `H(q)` estimator
//! - [`msm`]: Markov-switching multifractal returns
//! - [`generators`]: alpha-stable, fBm and ARFIMA simulators
//! - [`harness`]: seeded ensembles, shuffle surrogates and table reproduction
//! - [`io`]: price CSV ingestion, run configs and result/plot files

pub mod error;
pub mod generators;
pub mod ghe;
pub mod harness;
pub mod io;
pub mod msm;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use ghe::{generalized_hurst, GheConfig, GheResult, QEstimate};
pub use series::{ReturnKind, ReturnSeries, SeriesPath, VariableKind};
