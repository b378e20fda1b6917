use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use hurstlab::harness::tables::{report_rows, EmpiricalSeries};
use hurstlab::harness::{
    reproduce_table, run_ensemble, run_ensemble_multi, simulate_path, EnsembleSpec, Generator,
    Scale, TableId, TableOptions,
};
use hurstlab::io::{
    emit_plot_data, load_price_csv, parse_config, scaling_function_rows,
    structure_function_rows, write_results, PlotData, PlotKind, RunConfig,
};
use hurstlab::series::{build_variable, make_returns, ReturnKind, VariableKind};
use hurstlab::GheConfig;

#[derive(Parser)]
#[command(name = "hurstlab", version, about = "Generalized Hurst exponent analysis and multifractality Monte Carlo")]
struct Cli {
    /// Master seed; overrides the config's `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory. Without it results go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// GHE of a single price series, original and shuffled.
    Ghe {
        csv: PathBuf,
        #[arg(long, default_value = "price")]
        column: String,
        /// log_return or difference; defaults by file name (TB* use difference).
        #[arg(long)]
        return_kind: Option<ReturnKind>,
        #[arg(long, default_value_t = 33)]
        shuffles: usize,
    },
    /// Simulate one path of the configured generator.
    Simulate { config: PathBuf },
    /// Monte Carlo ensemble with shuffle surrogates.
    Ensemble { config: PathBuf },
    /// Reproduce one of the tables T2..T9.
    Table {
        table: TableId,
        /// 200 paths instead of 1000.
        #[arg(long)]
        desk: bool,
        /// Override the number of paths.
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long, default_value_t = 33)]
        shuffles: usize,
        /// Directory of `<asset>.csv` price files for the empirical columns.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value = "price")]
        column: String,
    },
    /// Structure-function or scaling-function data for plotting.
    Plotdata { config: PathBuf },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            if n == 0 {
                bail!("--threads must be at least 1");
            }
            b = b.num_threads(n);
        }
        b.build().context("building thread pool")?
    };
    pool.install(|| dispatch(&cli))
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ghe {
            csv,
            column,
            return_kind,
            shuffles,
        } => {
            let prices: Vec<f64> = load_price_csv(csv, column)?.into_iter().map(|r| r.price).collect();
            let id = csv
                .file_stem()
                .map_or_else(|| "series".into(), |s| s.to_string_lossy().into_owned());
            let kind = return_kind.unwrap_or_else(|| hurstlab::io::default_return_kind(&id));
            let returns = make_returns(&prices, kind)?;
            let spec = EnsembleSpec {
                n_paths: 1,
                n_shuffles: *shuffles,
                master_seed: cli.seed.unwrap_or(0),
                ..EnsembleSpec::new(Generator::Empirical {
                    id,
                    returns: Arc::new(returns),
                })
            };
            let reports = run_ensemble_multi(&spec, &VariableKind::ALL)?;
            let rows: Vec<_> = reports.iter().flat_map(|r| report_rows("ghe", r, None)).collect();
            with_output(cli, None, "ghe.csv", |w| Ok(write_results(w, &rows)?))
        }
        Command::Simulate { config } => {
            let cfg = load_config(cli, config)?;
            let spec = cfg.ensemble_spec()?;
            let returns = simulate_path(&spec, 0)?;
            let path = build_variable(&returns, cfg.variable)?;
            with_output(cli, cfg.output.as_deref(), "path.csv", |mut w| {
                writeln!(w, "t,return,{}", cfg.variable)?;
                // the price path starts one step before the first return
                let offset = usize::from(cfg.variable != VariableKind::Price);
                for (i, level) in path.values.iter().enumerate() {
                    let t = i + offset;
                    let r = t.checked_sub(1).map_or_else(String::new, |j| returns.values[j].to_string());
                    writeln!(w, "{t},{r},{level}")?;
                }
                w.flush()?;
                Ok(())
            })
        }
        Command::Ensemble { config } => {
            let cfg = load_config(cli, config)?;
            let report = run_ensemble(&cfg.ensemble_spec()?)?;
            if report.scaling_warnings > 0 {
                log::warn!("{} paths failed the scaling check", report.scaling_warnings);
            }
            let rows = report_rows("ensemble", &report, None);
            with_output(cli, cfg.output.as_deref(), "ensemble.csv", |w| Ok(write_results(w, &rows)?))
        }
        Command::Table {
            table,
            desk,
            paths,
            shuffles,
            data,
            column,
        } => {
            let scale = if *desk { Scale::Desk } else { Scale::Full };
            let mut opts = TableOptions::new(scale, cli.seed.unwrap_or(0));
            opts.n_paths = *paths;
            opts.n_shuffles = *shuffles;
            if let Some(dir) = data {
                opts.empirical = load_empirical_dir(dir, column)?;
            }
            let out = reproduce_table(*table, &opts)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let name = format!("{table}.csv");
            with_output(cli, None, &name, |w| Ok(write_results(w, &out.rows)?))
        }
        Command::Plotdata { config } => {
            let cfg = load_config(cli, config)?;
            let spec = cfg.ensemble_spec()?;
            let returns = simulate_path(&spec, 0)?;
            let ghe_cfg: GheConfig = cfg.ghe_config();
            let data = match cfg.plot {
                PlotKind::StructureFunctions => PlotData::Structure(structure_function_rows(
                    &build_variable(&returns, cfg.variable)?,
                    &ghe_cfg,
                )?),
                PlotKind::ScalingFunction => PlotData::Scaling(scaling_function_rows(
                    &returns,
                    cfg.variable,
                    &cfg.q_grid,
                    &ghe_cfg,
                    cfg.n_shuffles,
                    cfg.seed,
                )?),
            };
            let name = format!("{}.csv", cfg.plot);
            with_output(cli, cfg.output.as_deref(), &name, |w| Ok(emit_plot_data(w, &data)?))
        }
    }
}

fn load_config(cli: &Cli, path: &Path) -> Result<RunConfig> {
    let mut cfg = parse_config(path).with_context(|| format!("reading config {}", path.display()))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Every `*.csv` in `dir`, keyed by file stem.
fn load_empirical_dir(dir: &Path, column: &str) -> Result<Vec<EmpiricalSeries>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let asset = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let prices: Vec<f64> = load_price_csv(&p, column)?.into_iter().map(|r| r.price).collect();
            let returns = make_returns(&prices, hurstlab::io::default_return_kind(&asset))?;
            Ok(EmpiricalSeries {
                asset,
                returns: Arc::new(returns),
            })
        })
        .collect()
}

/// `--out` wins, then the config's `output` file, then stdout.
fn with_output(
    cli: &Cli,
    configured: Option<&Path>,
    default_name: &str,
    write: impl FnOnce(Box<dyn Write>) -> Result<()>,
) -> Result<()> {
    let target = match (&cli.out, configured) {
        (Some(dir), _) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            Some(dir.join(default_name))
        }
        (None, Some(file)) => Some(file.to_path_buf()),
        (None, None) => None,
    };
    match target {
        Some(path) => {
            let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write(Box::new(BufWriter::new(f)))?;
            eprintln!("wrote {}", path.display());
        }
        None => write(Box::new(io::stdout().lock()))?,
    }
    Ok(())
}
