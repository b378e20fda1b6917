//! Small summary-statistics helpers shared by the estimator and the harness.

pub fn mean(values: &[f64]) -> f64 {
    crate::series::mean(values)
}

/// Sample standard deviation (n - 1 denominator); zero for fewer than two values.
pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// `sqrt(a^2 + b^2)`, the spread of a difference of independent estimates.
pub fn combined_std(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Ordinary least squares `y = intercept + slope * x`.
///
/// Returns `(slope, intercept, r2)` with `r2` clamped to `[0, 1]`. A
/// perfectly flat response is a perfect fit (`r2 = 1`).
pub fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if n < 2.0 || sxx == 0.0 {
        return (0.0, my, 0.0);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r2 = if syy <= f64::EPSILON * f64::EPSILON {
        1.0
    } else {
        1.0 - ss_res / syy
    };
    (slope, intercept, r2.clamp(0.0, 1.0))
}
