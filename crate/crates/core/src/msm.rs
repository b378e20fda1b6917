//! Markov-switching multifractal (MSM) return simulation.
//!
//! Returns are `r_t = sigma * sqrt(M_t^(1) * ... * M_t^(k)) * u_t` with
//! `u_t ~ N(0, 1)`. Each multiplier takes the values `m0` or `2 - m0` with
//! equal probability and is renewed at time `t` with probability
//! `gamma_i = 1 - (1 - gamma_k)^(b^(i - k))`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::series::{ReturnKind, ReturnSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsmParams {
    pub m0: f64,
    pub sigma: f64,
    pub k: usize,
    pub b: f64,
    pub gamma_k: f64,
}

impl MsmParams {
    /// Parameters with the parsimonious `b = 2`, `gamma_k = 0.5` cascade.
    pub fn new(m0: f64, sigma: f64, k: usize) -> Result<Self> {
        let p = Self {
            m0,
            sigma,
            k,
            b: 2.0,
            gamma_k: 0.5,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn m1(&self) -> f64 {
        2.0 - self.m0
    }

    pub fn validate(&self) -> Result<()> {
        if !(1.0..=2.0).contains(&self.m0) {
            return Err(Error::InvalidParams(format!(
                "m0 must lie in [1, 2], got {}",
                self.m0
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        check_cascade(self.k, self.b, self.gamma_k)
    }
}

fn check_cascade(k: usize, b: f64, gamma_k: f64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParams("cascade depth k must be >= 1".into()));
    }
    if !(b > 1.0 && b.is_finite()) {
        return Err(Error::InvalidParams(format!("b must exceed 1, got {b}")));
    }
    if !(0.0..=1.0).contains(&gamma_k) {
        return Err(Error::InvalidParams(format!(
            "gamma_k must lie in [0, 1], got {gamma_k}"
        )));
    }
    Ok(())
}

/// Renewal probabilities `gamma_1..gamma_k`, the last one equal to `gamma_k`.
pub fn transition_probs(k: usize, b: f64, gamma_k: f64) -> Result<Vec<f64>> {
    check_cascade(k, b, gamma_k)?;
    let keep = 1.0 - gamma_k;
    let mut probs: Vec<f64> = (1..=k)
        .map(|i| 1.0 - keep.powf(b.powi(i as i32 - k as i32)))
        .collect();
    probs[k - 1] = gamma_k;
    Ok(probs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MsmState {
    pub multipliers: Vec<f64>,
}

impl MsmState {
    /// Draws each component from its stationary marginal, uniform on `{m0, 2 - m0}`.
    pub fn stationary<R: Rng + ?Sized>(params: &MsmParams, rng: &mut R) -> Self {
        Self {
            multipliers: (0..params.k).map(|_| draw_multiplier(params, rng)).collect(),
        }
    }

    pub fn product(&self) -> f64 {
        self.multipliers.iter().product()
    }
}

#[inline]
fn draw_multiplier<R: Rng + ?Sized>(params: &MsmParams, rng: &mut R) -> f64 {
    if rng.random::<bool>() {
        params.m0
    } else {
        params.m1()
    }
}

/// Advances the cascade one step. Each component is independently redrawn
/// with its renewal probability; a redraw may land on the current value.
pub fn step_state<R: Rng + ?Sized>(
    state: &MsmState,
    probs: &[f64],
    params: &MsmParams,
    rng: &mut R,
) -> MsmState {
    let mut next = state.clone();
    advance(&mut next, probs, params, rng);
    next
}

fn advance<R: Rng + ?Sized>(state: &mut MsmState, probs: &[f64], params: &MsmParams, rng: &mut R) {
    debug_assert_eq!(state.multipliers.len(), probs.len());
    for (m, &g) in state.multipliers.iter_mut().zip(probs) {
        if rng.random::<f64>() < g {
            *m = draw_multiplier(params, rng);
        }
    }
}

pub fn simulate_msm<R: Rng + ?Sized>(
    params: &MsmParams,
    length: usize,
    rng: &mut R,
) -> Result<ReturnSeries> {
    params.validate()?;
    if length < 1 {
        return Err(Error::InvalidParams("MSM length must be >= 1".into()));
    }
    let probs = transition_probs(params.k, params.b, params.gamma_k)?;
    let mut state = MsmState::stationary(params, rng);
    let mut values = Vec::with_capacity(length);
    for _ in 0..length {
        advance(&mut state, &probs, params, rng);
        let u: f64 = rng.sample(StandardNormal);
        values.push(params.sigma * state.product().sqrt() * u);
    }
    Ok(ReturnSeries::new(values, ReturnKind::Difference))
}

/// One row of the bundled GMM parameter estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct MsmFixture {
    pub asset: String,
    pub k: usize,
    pub m0: f64,
    pub sigma: f64,
}

impl MsmFixture {
    pub fn params(&self) -> Result<MsmParams> {
        MsmParams::new(self.m0, self.sigma, self.k)
    }
}

const ESTIMATES_CSV: &str = include_str!("../data/msm_estimates.csv");

/// Bundled `(asset, k, m0, sigma)` estimates for the nine studied series.
pub fn msm_fixtures() -> Vec<MsmFixture> {
    ESTIMATES_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            MsmFixture {
                asset: f[0].to_string(),
                k: f[1].parse().expect("fixture k"),
                m0: f[2].parse().expect("fixture m0"),
                sigma: f[3].parse().expect("fixture sigma"),
            }
        })
        .collect()
}

pub fn msm_fixture(asset: &str, k: usize) -> Option<MsmFixture> {
    msm_fixtures()
        .into_iter()
        .find(|f| f.asset.eq_ignore_ascii_case(asset) && f.k == k)
}
