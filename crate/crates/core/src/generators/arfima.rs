//! ARFIMA(p, d, 0) with symmetric alpha-stable innovations.
//!
//! The fractionally integrated noise `(1 - B)^(-d) Z` is formed by a
//! truncated moving-average convolution with the binomial-series weights
//! of `(1 - z)^(-d)`. The AR polynomial is then applied recursively. The
//! neglected tail of the weights decays like `j^(d - 1)`, so its mass after
//! `M` terms is `O(M^(d - 1))`.

use rand::Rng;

use super::stable::{sample_stable, StableParams};
use crate::error::{Error, Result};
use crate::series::{ReturnKind, ReturnSeries};

pub const DEFAULT_MA_TRUNCATION: usize = 1000;
/// Samples discarded on top of the MA truncation before output begins.
pub const WARMUP_EXTRA: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ArfimaParams {
    /// `phi_1..phi_p` of `1 - phi_1 z - ... - phi_p z^p`.
    pub ar_coeffs: Vec<f64>,
    pub d: f64,
    pub stable: StableParams,
    pub ma_truncation: usize,
}

impl ArfimaParams {
    /// ARFIMA(0, d, 0) or ARFIMA(1, d, 0) with standard innovations of tail `alpha`.
    pub fn new(alpha: f64, d: f64, ar1: Option<f64>) -> Result<Self> {
        let p = Self {
            ar_coeffs: ar1.into_iter().collect(),
            d,
            stable: StableParams::standard(alpha)?,
            ma_truncation: DEFAULT_MA_TRUNCATION,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn warmup(&self) -> usize {
        self.ma_truncation + WARMUP_EXTRA
    }

    pub fn validate(&self) -> Result<()> {
        self.stable.validate()?;
        let alpha = self.stable.alpha;
        if alpha <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "ARFIMA innovations need 1 < alpha <= 2, got {alpha}"
            )));
        }
        let upper = 1.0 - 1.0 / alpha;
        if !(self.d > -0.5 && self.d < upper) {
            return Err(Error::InvalidParams(format!(
                "d = {} outside (-0.5, {upper}) for alpha = {alpha}",
                self.d
            )));
        }
        if self.ma_truncation < 100 {
            return Err(Error::InvalidParams(format!(
                "MA truncation must be >= 100, got {}",
                self.ma_truncation
            )));
        }
        check_ar_stationary(&self.ar_coeffs)
    }
}

fn check_ar_stationary(ar: &[f64]) -> Result<()> {
    if ar.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonStationaryAr("non-finite coefficient".into()));
    }
    match ar {
        [] => Ok(()),
        [phi] if phi.abs() < 1.0 => Ok(()),
        [phi] => Err(Error::NonStationaryAr(format!("|phi_1| = {} >= 1", phi.abs()))),
        // Sufficient condition for all roots outside the unit disk.
        _ if ar.iter().map(|c| c.abs()).sum::<f64>() < 1.0 => Ok(()),
        _ => Err(Error::NonStationaryAr(format!(
            "sum of |phi_i| = {} >= 1; only the sufficient condition is checked for p > 1",
            ar.iter().map(|c| c.abs()).sum::<f64>()
        ))),
    }
}

/// Weights `psi_0..=psi_n` of `(1 - z)^(-d)`.
pub fn fractional_ma_coeffs(d: f64, n: usize) -> Result<Vec<f64>> {
    if d.is_nan() || d.abs() >= 1.0 {
        return Err(Error::InvalidParams(format!("|d| must be < 1, got {d}")));
    }
    let mut psi = Vec::with_capacity(n + 1);
    psi.push(1.0);
    for j in 1..=n {
        let prev = psi[j - 1];
        psi.push(prev * (j as f64 - 1.0 + d) / j as f64);
    }
    Ok(psi)
}

pub fn simulate_arfima<R: Rng + ?Sized>(
    p: &ArfimaParams,
    length: usize,
    rng: &mut R,
) -> Result<ReturnSeries> {
    p.validate()?;
    if length < 1 {
        return Err(Error::InvalidParams("ARFIMA length must be >= 1".into()));
    }
    let psi = fractional_ma_coeffs(p.d, p.ma_truncation)?;
    let warmup = p.warmup();
    let total = length + warmup;
    let z: Vec<f64> = (0..total).map(|_| sample_stable(&p.stable, rng)).collect();

    let mut y = Vec::with_capacity(total);
    for t in 0..total {
        let lags = t.min(p.ma_truncation);
        let mut noise = 0.0;
        for j in 0..=lags {
            noise += psi[j] * z[t - j];
        }
        let mut ar = 0.0;
        for (i, phi) in p.ar_coeffs.iter().enumerate() {
            if t > i {
                ar += phi * y[t - 1 - i];
            }
        }
        y.push(ar + noise);
    }
    y.drain(..warmup);
    Ok(ReturnSeries::new(y, ReturnKind::Difference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ma_coeff_examples() {
        let c = fractional_ma_coeffs(0.0, 5).unwrap();
        assert_eq!(c, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let c = fractional_ma_coeffs(0.2, 2).unwrap();
        assert!((c[1] - 0.2).abs() < 1e-15);
        assert!((c[2] - 0.12).abs() < 1e-15);
        assert_eq!(fractional_ma_coeffs(-0.1, 1).unwrap(), vec![1.0, -0.1]);
        assert!(fractional_ma_coeffs(1.0, 3).is_err());
    }

    #[test]
    fn ma_coeffs_match_gamma_ratio() {
        // psi_j = Gamma(j + d) / (Gamma(d) Gamma(j + 1)) ~ j^(d-1) / Gamma(d)
        let d = 0.3;
        let c = fractional_ma_coeffs(d, 5000).unwrap();
        let gamma_d = 2.991_568_987_687_590_6; // Gamma(0.3)
        let j = 5000.0f64;
        let approx = j.powf(d - 1.0) / gamma_d;
        assert!((c[5000] / approx - 1.0).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn ma_recurrence_identity(d in -0.99f64..0.99, n in 1usize..300) {
            let c = fractional_ma_coeffs(d, n).unwrap();
            prop_assert_eq!(c[0], 1.0);
            for j in 1..=n {
                let lhs = c[j] * j as f64;
                let rhs = c[j - 1] * (j as f64 - 1.0 + d);
                prop_assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1e-300) * 4.0);
            }
        }
    }

    #[test]
    fn param_validation() {
        assert!(ArfimaParams::new(1.6, 0.1, None).is_ok());
        assert!(ArfimaParams::new(1.8, 0.1, Some(0.4)).is_ok());
        // d must stay below 1 - 1/alpha
        assert!(ArfimaParams::new(1.2, 0.2, None).is_err());
        assert!(ArfimaParams::new(1.6, -0.6, None).is_err());
        assert!(matches!(
            ArfimaParams::new(1.8, 0.1, Some(1.0)),
            Err(Error::NonStationaryAr(_))
        ));
        let mut p = ArfimaParams::new(1.8, 0.1, None).unwrap();
        p.ma_truncation = 50;
        assert!(p.validate().is_err());
    }

    #[test]
    fn white_gaussian_case() {
        let p = ArfimaParams::new(2.0, 0.0, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = simulate_arfima(&p, 200_000, &mut rng).unwrap();
        assert_eq!(r.len(), 200_000);
        let n = r.len() as f64;
        let m = r.values.iter().sum::<f64>() / n;
        let var = r.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
        let lag1 = r.values.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / n;
        assert!((var - 1.0).abs() < 0.02);
        assert!((lag1 / var).abs() < 0.01);
    }

    #[test]
    fn gaussian_arfima_lag_one_correlation() {
        // rho(1) = d / (1 - d) for ARFIMA(0, d, 0)
        let d = 0.3;
        let p = ArfimaParams::new(2.0, d, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = simulate_arfima(&p, 200_000, &mut rng).unwrap();
        let n = r.len() as f64;
        let m = r.values.iter().sum::<f64>() / n;
        let var = r.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
        let lag1 = r.values.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / n;
        assert!((lag1 / var - d / (1.0 - d)).abs() < 0.02, "rho1 = {}", lag1 / var);
    }

    #[test]
    fn ar_recursion_is_applied() {
        let p = ArfimaParams::new(2.0, 0.0, Some(0.4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = simulate_arfima(&p, 200_000, &mut rng).unwrap();
        let n = r.len() as f64;
        let m = r.values.iter().sum::<f64>() / n;
        let var = r.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
        let lag1 = r.values.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / n;
        assert!((lag1 / var - 0.4).abs() < 0.01);
        // AR(1) variance 1 / (1 - phi^2)
        assert!((var - 1.0 / 0.84).abs() < 0.03);
    }
}
