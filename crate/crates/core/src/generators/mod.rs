//! Reference processes for the robustness study: iid alpha-stable noise,
//! fractional Gaussian noise and ARFIMA with stable innovations.

pub mod arfima;
pub mod fbm;
pub mod stable;

pub use arfima::{fractional_ma_coeffs, simulate_arfima, ArfimaParams};
pub use fbm::{fgn_autocovariance, simulate_fbm, FbmParams, FbmSample, FgnGenerator};
pub use stable::{sample_stable, sample_stable_n, stable_cf, StableParams};
