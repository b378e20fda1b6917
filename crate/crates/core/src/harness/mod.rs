//! Monte Carlo harness: seeded ensembles, shuffle surrogates, identity
//! tests and table reproduction.

pub mod ensemble;
pub mod inference;
pub mod seeds;
pub mod tables;

pub use ensemble::{
    run_ensemble, run_ensemble_multi, simulate_path, EnsembleReport, EnsembleSpec, Generator,
    MeanStd, PathSummary, QSummary,
};
pub use inference::{delta_h_comparison, identity_test, DeltaHComparison, IdentityTest};
pub use tables::{reproduce_table, ResultRow, Scale, TableId, TableOptions, TableOutput};
