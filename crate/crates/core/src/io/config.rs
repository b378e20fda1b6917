//! Line-oriented `key = value` run configuration.
//!
//! `#` starts a comment; several assignments may share a line when
//! separated by `;`. Every key is optional at parse time. Keys a particular
//! action needs are checked when that action asks for them.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::generators::{ArfimaParams, StableParams};
use crate::ghe::GheConfig;
use crate::harness::ensemble::{
    EnsembleSpec, Generator, DEFAULT_N_PATHS, DEFAULT_N_SHUFFLES, DEFAULT_PATH_LENGTH,
};
use crate::msm::{msm_fixture, MsmParams};
use crate::series::{make_returns, ReturnKind, ReturnSeries, VariableKind};

use super::plot::PlotKind;
use super::prices::load_price_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Msm,
    Stable,
    Fbm,
    Arfima,
    Empirical,
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "msm" => GeneratorKind::Msm,
            "stable" => GeneratorKind::Stable,
            "fbm" | "fgn" => GeneratorKind::Fbm,
            "arfima" => GeneratorKind::Arfima,
            "empirical" => GeneratorKind::Empirical,
            other => return Err(format!("unknown generator `{other}`")),
        })
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::Msm => "msm",
            GeneratorKind::Stable => "stable",
            GeneratorKind::Fbm => "fbm",
            GeneratorKind::Arfima => "arfima",
            GeneratorKind::Empirical => "empirical",
        })
    }
}

/// Default q grid for scaling-function plot data.
pub fn default_q_grid() -> Vec<f64> {
    (1..=30).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub generator: Option<GeneratorKind>,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub d: Option<f64>,
    pub ar1: Option<f64>,
    pub ma_truncation: Option<usize>,
    pub m0: Option<f64>,
    pub sigma: Option<f64>,
    pub k: Option<usize>,
    pub b: Option<f64>,
    pub gamma_k: Option<f64>,
    pub hurst: Option<f64>,
    /// Series name; selects MSM fixtures and the default return kind.
    pub asset: Option<String>,
    pub n_paths: usize,
    pub path_length: usize,
    pub variable: VariableKind,
    pub q_values: Vec<f64>,
    pub tau_max: RangeInclusive<usize>,
    pub detrend: bool,
    pub n_shuffles: usize,
    pub seed: u64,
    pub return_kind: Option<ReturnKind>,
    /// Price CSV for the empirical generator.
    pub input: Option<PathBuf>,
    pub column: String,
    pub output: Option<PathBuf>,
    pub plot: PlotKind,
    pub q_grid: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ghe = GheConfig::default();
        Self {
            generator: None,
            alpha: None,
            beta: 0.0,
            d: None,
            ar1: None,
            ma_truncation: None,
            m0: None,
            sigma: None,
            k: None,
            b: None,
            gamma_k: None,
            hurst: None,
            asset: None,
            n_paths: DEFAULT_N_PATHS,
            path_length: DEFAULT_PATH_LENGTH,
            variable: VariableKind::Price,
            q_values: ghe.q_values,
            tau_max: ghe.tau_max_range,
            detrend: ghe.detrend,
            n_shuffles: DEFAULT_N_SHUFFLES,
            seed: 0,
            return_kind: None,
            input: None,
            column: "price".into(),
            output: None,
            plot: PlotKind::ScalingFunction,
            q_grid: default_q_grid(),
        }
    }
}

/// Interest-rate series (`TB*`) use differences; everything else log returns.
pub fn default_return_kind(asset: &str) -> ReturnKind {
    if asset.to_ascii_uppercase().starts_with("TB") {
        ReturnKind::Difference
    } else {
        ReturnKind::LogReturn
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let mut cfg = parse_config_str(&text)?;
    // relative data paths are taken from the config's directory
    if let Some(dir) = path.parent() {
        if let Some(input) = &cfg.input {
            if input.is_relative() {
                cfg.input = Some(dir.join(input));
            }
        }
    }
    Ok(cfg)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for item in line.split(';') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item.split_once('=').ok_or_else(|| Error::Parse {
                row: lineno + 1,
                msg: format!("expected `key = value`, got `{item}`"),
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
    }
    Ok(cfg)
}

fn typed<T: FromStr>(key: &str, value: &str, expected: &'static str) -> Result<T> {
    value.parse().map_err(|_| Error::Type {
        key: key.into(),
        value: value.into(),
        expected,
    })
}

fn float_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let v = value
        .split(',')
        .map(|s| typed::<f64>(key, s.trim(), "comma-separated reals"))
        .collect::<Result<Vec<_>>>()?;
    if v.is_empty() {
        return Err(Error::Type {
            key: key.into(),
            value: value.into(),
            expected: "comma-separated reals",
        });
    }
    Ok(v)
}

fn tau_range(key: &str, value: &str) -> Result<RangeInclusive<usize>> {
    const EXPECTED: &str = "range like 5..19";
    let bad = || Error::Type {
        key: key.into(),
        value: value.into(),
        expected: EXPECTED,
    };
    let (lo, hi) = value
        .split_once("..=")
        .or_else(|| value.split_once(".."))
        .or_else(|| value.split_once('-'))
        .ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    Ok(lo..=hi)
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Type {
            key: key.into(),
            value: value.into(),
            expected: "boolean",
        }),
    }
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "generator" => self.generator = Some(typed(key, value, "msm|stable|fbm|arfima|empirical")?),
            "alpha" => self.alpha = Some(typed(key, value, "real")?),
            "beta" => self.beta = typed(key, value, "real")?,
            "d" => self.d = Some(typed(key, value, "real")?),
            "ar1" => self.ar1 = Some(typed(key, value, "real")?),
            "ma_truncation" => self.ma_truncation = Some(typed(key, value, "integer")?),
            "m0" => self.m0 = Some(typed(key, value, "real")?),
            "sigma" => self.sigma = Some(typed(key, value, "real")?),
            "k" => self.k = Some(typed(key, value, "integer")?),
            "b" => self.b = Some(typed(key, value, "real")?),
            "gamma_k" => self.gamma_k = Some(typed(key, value, "real")?),
            "H" | "hurst" => self.hurst = Some(typed(key, value, "real")?),
            "asset" => self.asset = Some(value.to_string()),
            "n_paths" => self.n_paths = typed(key, value, "integer")?,
            "path_length" => self.path_length = typed(key, value, "integer")?,
            "variable" => self.variable = typed(key, value, "price|cum_abs_return|cum_sq_return")?,
            "q_values" | "q" => self.q_values = float_list(key, value)?,
            "tau_max" => self.tau_max = tau_range(key, value)?,
            "detrend" => self.detrend = boolean(key, value)?,
            "n_shuffles" => self.n_shuffles = typed(key, value, "integer")?,
            "seed" | "master_seed" => self.seed = typed(key, value, "unsigned 64-bit integer")?,
            "return_kind" => self.return_kind = Some(typed(key, value, "log_return|difference")?),
            "input" => self.input = Some(PathBuf::from(value)),
            "column" => self.column = value.to_string(),
            "output" | "out" => self.output = Some(PathBuf::from(value)),
            "plot" => self.plot = typed(key, value, "structure_functions|scaling_function")?,
            "q_grid" => self.q_grid = float_list(key, value)?,
            _ => return Err(Error::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn ghe_config(&self) -> GheConfig {
        GheConfig {
            q_values: self.q_values.clone(),
            tau_max_range: self.tau_max.clone(),
            detrend: self.detrend,
        }
    }

    /// Explicit `return_kind`, else the asset-class default.
    pub fn return_kind(&self) -> ReturnKind {
        if let Some(k) = self.return_kind {
            return k;
        }
        let name = self.asset.clone().or_else(|| {
            self.input
                .as_ref()
                .and_then(|p| p.file_stem())
                .map(|s| s.to_string_lossy().into_owned())
        });
        name.map_or(ReturnKind::LogReturn, |n| default_return_kind(&n))
    }

    fn require<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
        v.ok_or_else(|| Error::MissingKey(key.into()))
    }

    /// Loads `input` and converts its prices to returns.
    pub fn load_returns(&self) -> Result<ReturnSeries> {
        let input = self.input.as_ref().ok_or_else(|| Error::MissingKey("input".into()))?;
        let prices: Vec<f64> = load_price_csv(input, &self.column)?
            .into_iter()
            .map(|r| r.price)
            .collect();
        make_returns(&prices, self.return_kind())
    }

    pub fn generator(&self) -> Result<Generator> {
        let kind = Self::require(self.generator, "generator")?;
        Ok(match kind {
            GeneratorKind::Msm => {
                let k = Self::require(self.k, "k")?;
                let (m0, sigma) = match (self.m0, self.sigma, &self.asset) {
                    (Some(m0), Some(s), _) => (m0, s),
                    (None, None, Some(asset)) => {
                        let f = msm_fixture(asset, k).ok_or_else(|| {
                            Error::InvalidParams(format!("no bundled MSM estimate for {asset}, k = {k}"))
                        })?;
                        (f.m0, f.sigma)
                    }
                    (None, _, _) => return Err(Error::MissingKey("m0".into())),
                    (_, None, _) => return Err(Error::MissingKey("sigma".into())),
                };
                let mut p = MsmParams::new(m0, sigma, k)?;
                if let Some(b) = self.b {
                    p.b = b;
                }
                if let Some(g) = self.gamma_k {
                    p.gamma_k = g;
                }
                p.validate()?;
                Generator::Msm(p)
            }
            GeneratorKind::Stable => {
                let mut p = StableParams::standard(Self::require(self.alpha, "alpha")?)?;
                p.beta = self.beta;
                p.validate()?;
                Generator::Stable(p)
            }
            GeneratorKind::Fbm => Generator::Fbm {
                hurst: Self::require(self.hurst, "H")?,
            },
            GeneratorKind::Arfima => {
                let mut p = ArfimaParams::new(
                    Self::require(self.alpha, "alpha")?,
                    Self::require(self.d, "d")?,
                    self.ar1,
                )?;
                if let Some(t) = self.ma_truncation {
                    p.ma_truncation = t;
                    p.validate()?;
                }
                Generator::Arfima(p)
            }
            GeneratorKind::Empirical => {
                let id = self.asset.clone().unwrap_or_else(|| {
                    self.input
                        .as_ref()
                        .and_then(|p| p.file_stem())
                        .map_or_else(|| "empirical".into(), |s| s.to_string_lossy().into_owned())
                });
                Generator::Empirical {
                    id,
                    returns: Arc::new(self.load_returns()?),
                }
            }
        })
    }

    pub fn ensemble_spec(&self) -> Result<EnsembleSpec> {
        let spec = EnsembleSpec {
            generator: self.generator()?,
            n_paths: self.n_paths,
            path_length: self.path_length,
            variable: self.variable,
            ghe: self.ghe_config(),
            n_shuffles: self.n_shuffles,
            master_seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse_config_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.q_values, [1.0, 2.0, 3.0]);
        assert_eq!(cfg.tau_max, 5..=19);
        assert_eq!(cfg.n_shuffles, 33);
        assert_eq!(cfg.n_paths, 1000);
    }

    #[test]
    fn desk_scale_override() {
        let cfg = parse_config_str("n_paths = 200  # desk run\n").unwrap();
        assert_eq!(cfg.n_paths, 200);
    }

    #[test]
    fn arfima_with_ar_term() {
        let cfg = parse_config_str("generator = arfima; alpha = 1.6; d = 0.1; ar1 = 0.4").unwrap();
        match cfg.generator().unwrap() {
            Generator::Arfima(p) => {
                assert_eq!(p.stable.alpha, 1.6);
                assert_eq!(p.d, 0.1);
                assert_eq!(p.ar_coeffs, [0.4]);
            }
            g => panic!("wrong generator {g}"),
        }
    }

    #[test]
    fn msm_from_fixture() {
        let cfg = parse_config_str("generator = msm\nasset = Nik\nk = 10\n").unwrap();
        match cfg.generator().unwrap() {
            Generator::Msm(p) => assert_eq!((p.m0, p.sigma, p.k), (1.437, 0.012, 10)),
            g => panic!("wrong generator {g}"),
        }
    }

    #[test]
    fn ranges_lists_and_bools() {
        let cfg = parse_config_str("tau_max = 3..10\nq_values = 0.5, 1\ndetrend = no\nvariable = abs").unwrap();
        assert_eq!(cfg.tau_max, 3..=10);
        assert_eq!(cfg.q_values, [0.5, 1.0]);
        assert!(!cfg.detrend);
        assert_eq!(cfg.variable, VariableKind::CumAbsReturn);
        assert_eq!(parse_config_str("tau_max = 5..=19").unwrap().tau_max, 5..=19);
    }

    #[test]
    fn error_contracts() {
        assert!(matches!(
            parse_config_str("colour = red"),
            Err(Error::UnknownKey(k)) if k == "colour"
        ));
        assert!(matches!(
            parse_config_str("n_paths = many"),
            Err(Error::Type { key, .. }) if key == "n_paths"
        ));
        assert!(matches!(
            parse_config_str("just words"),
            Err(Error::Parse { row: 1, .. })
        ));
        let cfg = parse_config_str("generator = stable").unwrap();
        assert!(matches!(cfg.generator(), Err(Error::MissingKey(k)) if k == "alpha"));
        let cfg = parse_config_str("alpha = 1.5").unwrap();
        assert!(matches!(cfg.generator(), Err(Error::MissingKey(k)) if k == "generator"));
        let cfg = parse_config_str("generator = empirical").unwrap();
        assert!(matches!(cfg.generator(), Err(Error::MissingKey(k)) if k == "input"));
    }

    #[test]
    fn return_kind_defaults_by_asset_class() {
        assert_eq!(default_return_kind("TB3"), ReturnKind::Difference);
        assert_eq!(default_return_kind("Dow"), ReturnKind::LogReturn);
        let cfg = parse_config_str("asset = TB10").unwrap();
        assert_eq!(cfg.return_kind(), ReturnKind::Difference);
        let cfg = parse_config_str("asset = TB10\nreturn_kind = log").unwrap();
        assert_eq!(cfg.return_kind(), ReturnKind::LogReturn);
    }

    #[test]
    fn empirical_input_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let mut csv = std::fs::File::create(dir.path().join("dow.csv")).unwrap();
        writeln!(csv, "day,price").unwrap();
        for i in 0..100 {
            writeln!(csv, "{i},{}", 100.0 + (i as f64).sin()).unwrap();
        }
        let cfg_path = dir.path().join("run.cfg");
        std::fs::write(&cfg_path, "generator = empirical\ninput = dow.csv\n").unwrap();
        let cfg = parse_config(&cfg_path).unwrap();
        let spec = cfg.ensemble_spec().unwrap();
        match &spec.generator {
            Generator::Empirical { id, returns } => {
                assert_eq!(id, "dow");
                assert_eq!(returns.len(), 99);
                assert_eq!(returns.kind, ReturnKind::LogReturn);
            }
            g => panic!("wrong generator {g}"),
        }
    }
}
