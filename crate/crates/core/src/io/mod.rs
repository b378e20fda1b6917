//! File formats: price CSV ingestion, run configs, result tables and
//! plot-ready data.

pub mod config;
pub mod plot;
pub mod prices;
pub mod results;

pub use config::{default_return_kind, parse_config, parse_config_str, GeneratorKind, RunConfig};
pub use plot::{
    emit_plot_data, scaling_function_rows, structure_function_rows, PlotData, PlotKind,
    ScalingRow, StructureRow,
};
pub use prices::{load_price_csv, read_price_csv, PriceRecord};
pub use results::{read_results, write_results, RESULT_HEADER};
