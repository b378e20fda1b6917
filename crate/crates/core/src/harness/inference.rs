use crate::error::{Error, Result};

use super::ensemble::{EnsembleReport, MeanStd};

/// Two-sided z critical value at the 95% level.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityTest {
    pub statistic: f64,
    pub reject_at_95: bool,
}

/// Two-sample z test of equal means with combined variance
/// `emp_std^2 + sim_std^2`.
pub fn identity_test(emp_mean: f64, emp_std: f64, sim_mean: f64, sim_std: f64) -> Result<IdentityTest> {
    if emp_std < 0.0 || sim_std < 0.0 || emp_std.is_nan() || sim_std.is_nan() {
        return Err(Error::InvalidParams(format!(
            "standard deviations must be non-negative, got {emp_std} and {sim_std}"
        )));
    }
    let spread = emp_std.hypot(sim_std);
    if spread == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let statistic = (emp_mean - sim_mean) / spread;
    Ok(IdentityTest {
        statistic,
        reject_at_95: statistic.abs() > Z_95,
    })
}

/// `Delta H` against `Delta H_shuff` for one ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaHComparison {
    pub delta_h: MeanStd,
    pub delta_h_shuff: MeanStd,
    /// `delta_h_shuff - delta_h`; positive when shuffling adds multifractality.
    pub difference: f64,
    pub difference_std: f64,
    pub test: Option<IdentityTest>,
}

pub fn delta_h_comparison(report: &EnsembleReport) -> Result<DeltaHComparison> {
    let delta_h_shuff = report.delta_h_shuff.ok_or(Error::MissingShuffledBlock)?;
    let delta_h = report.delta_h.ok_or_else(|| {
        Error::InvalidParams("Delta H needs both q = 1 and q = 3 in the estimator config".into())
    })?;
    let difference = delta_h_shuff.mean - delta_h.mean;
    let difference_std = delta_h.std.hypot(delta_h_shuff.std);
    let test = identity_test(delta_h.mean, delta_h.std, delta_h_shuff.mean, delta_h_shuff.std).ok();
    Ok(DeltaHComparison {
        delta_h,
        delta_h_shuff,
        difference,
        difference_std,
        test,
    })
}
