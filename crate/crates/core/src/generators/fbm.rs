//! Fractional Gaussian noise by exact circulant embedding (Davies-Harte).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::{ReturnKind, ReturnSeries, SeriesPath, VariableKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbmParams {
    pub hurst: f64,
    /// Number of fGn increments.
    pub length: usize,
}

impl FbmParams {
    pub fn new(hurst: f64, length: usize) -> Result<Self> {
        let p = Self { hurst, length };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::InvalidParams(format!(
                "Hurst exponent must lie in (0, 1), got {}",
                self.hurst
            )));
        }
        if self.length < 2 {
            return Err(Error::InvalidParams(format!(
                "fBm length must be >= 2, got {}",
                self.length
            )));
        }
        Ok(())
    }
}

/// Autocovariance of unit-variance fGn at lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let h2 = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Reusable embedding for one `(hurst, length)` pair.
///
/// The eigenvalues of the circulant matrix and the FFT plan are computed
/// once; every call to [`FgnGenerator::sample`] costs a single FFT.
pub struct FgnGenerator {
    params: FbmParams,
    /// `sqrt(lambda_j / m)` for the `m = 2n` circulant, `n` a power of two.
    sqrt_eigs: Vec<f64>,
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl std::fmt::Debug for FgnGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FgnGenerator")
            .field("params", &self.params)
            .field("embedding_size", &self.sqrt_eigs.len())
            .finish()
    }
}

impl FgnGenerator {
    pub fn new(params: FbmParams) -> Result<Self> {
        params.validate()?;
        let n = params.length.next_power_of_two();
        let m = 2 * n;
        let mut row: Vec<Complex64> = (0..m)
            .map(|j| {
                let lag = if j <= n { j } else { m - j };
                Complex64::new(fgn_autocovariance(params.hurst, lag), 0.0)
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);
        let max = row.iter().map(|c| c.re).fold(0.0, f64::max);
        let min = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
        if min < -1e-9 * max.max(1.0) {
            return Err(Error::EmbeddingFailure {
                min_eigenvalue: min,
            });
        }
        let sqrt_eigs = row
            .iter()
            .map(|c| (c.re.max(0.0) / m as f64).sqrt())
            .collect();
        Ok(Self {
            params,
            sqrt_eigs,
            fft,
        })
    }

    pub fn params(&self) -> FbmParams {
        self.params
    }

    /// One fGn sample of `params.length` unit-variance increments.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let m = self.sqrt_eigs.len();
        let n = m / 2;
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        let z0: f64 = rng.sample(StandardNormal);
        w[0] = Complex64::new(self.sqrt_eigs[0] * z0, 0.0);
        let zn: f64 = rng.sample(StandardNormal);
        w[n] = Complex64::new(self.sqrt_eigs[n] * zn, 0.0);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        for j in 1..n {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let c = Complex64::new(a, b) * (self.sqrt_eigs[j] * half);
            w[j] = c;
            w[m - j] = c.conj();
        }
        self.fft.process(&mut w);
        w.iter().take(self.params.length).map(|c| c.re).collect()
    }
}

/// An fBm path together with the fGn increments it cumulates.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmSample {
    pub path: SeriesPath,
    pub increments: ReturnSeries,
}

pub fn simulate_fbm<R: Rng + ?Sized>(params: &FbmParams, rng: &mut R) -> Result<FbmSample> {
    let generator = FgnGenerator::new(*params)?;
    let increments = ReturnSeries::new(generator.sample(rng), ReturnKind::Difference);
    let path = crate::series::build_variable(&increments, VariableKind::Price)?;
    Ok(FbmSample { path, increments })
}
