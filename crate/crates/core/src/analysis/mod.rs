//! Bias-variance analysis of the GLR estimator.

pub mod decomposition;
pub mod monte_carlo;
pub mod optimize;
pub mod snr;

pub use decomposition::{
    bias_sq, mse_analytic, mse_ub, variance_exact, variance_sorted_pairing, DecompositionPoint,
    MseCurve,
};
pub use monte_carlo::{empirical_mse, Estimate, MonteCarloOptions, MonteCarloResult};
pub use optimize::{
    grid_search, grid_search_on, minimize_mse_ub, stationarity_polynomial, AlphaGrid, GridOptimum,
    UbMinimum, ALPHA_INFINITY,
};
pub use snr::{
    alpha_star_match, regime, snr_summary, snr_summary_band, snr_summary_multi, snr_summary_random,
    Regime, RegimeReport, SnrSummary, DEFAULT_BETA, REGIME_RHO,
};
