//! E-SNR summaries, the order-matching regularization parameter and the
//! asymptotic regime classification.

use std::fmt;

use crate::error::{check_len, Error, Result};
use crate::signal::{check_band, signal_power, NoiseModel};

use super::decomposition::check_bounds;

/// Default order-matching constant.
pub const DEFAULT_BETA: f64 = 1.0;
/// Regime band half-width: `beta * theta <= 1/RHO` is high E-SNR,
/// `beta * theta >= RHO` is low E-SNR.
pub const REGIME_RHO: f64 = 10.0;

/// Signal and noise powers that parameterize MSE-UB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSummary {
    /// Power of the signal outside the constant mode.
    pub p_signal: f64,
    /// All noise variances except the largest one.
    pub p_noise: f64,
    /// Largest noise variance.
    pub sigma1_sq: f64,
    /// `sqrt(p_noise / p_signal)`.
    pub theta: f64,
    /// `1 / theta^2`.
    pub e_snr: f64,
}

impl SnrSummary {
    pub fn from_powers(p_signal: f64, p_noise: f64, sigma1_sq: f64) -> Result<Self> {
        if !(p_signal > 0.0) || !p_signal.is_finite() {
            return Err(Error::ZeroSignalPower);
        }
        if !(p_noise >= 0.0 && sigma1_sq >= 0.0) {
            return Err(Error::InvalidParameter("noise powers must be non-negative".into()));
        }
        let theta = (p_noise / p_signal).sqrt();
        Ok(Self {
            p_signal,
            p_noise,
            sigma1_sq,
            theta,
            e_snr: p_signal / p_noise,
        })
    }
}

/// Summary for a fixed ground-truth signal.
pub fn snr_summary(x: &[f64], noise: &NoiseModel) -> Result<SnrSummary> {
    check_len(noise.dim(), x.len())?;
    let p = signal_power(x);
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p <= (f64::EPSILON * scale).powi(2) * x.len() as f64 {
        return Err(Error::ZeroSignalPower);
    }
    SnrSummary::from_powers(p, noise.residual_variance(), noise.max_variance())
}

/// Summary when `t` i.i.d. observations are averaged: the noise covariance
/// is divided by `t`, so `theta` shrinks by `sqrt(t)`.
pub fn snr_summary_multi(x: &[f64], noise: &NoiseModel, t: usize) -> Result<SnrSummary> {
    snr_summary(x, &noise.averaged(t)?)
}

/// Summary for a band-limited signal; only non-constant modes carry power.
pub fn snr_summary_band(coeffs: &[(usize, f64)], noise: &NoiseModel) -> Result<SnrSummary> {
    check_band(noise.dim(), coeffs)?;
    let p: f64 = coeffs.iter().filter(|(j, _)| *j != 0).map(|(_, w)| w * w).sum();
    SnrSummary::from_powers(p, noise.residual_variance(), noise.max_variance())
}

/// Summary for `x* ~ N(mu 1, diag(s^2))`, with the expected signal power
/// `(n - 1) * mean(s^2)`; `theta = sqrt(sigma_bar / s_bar)`.
pub fn snr_summary_random(std: &[f64], noise: &NoiseModel) -> Result<SnrSummary> {
    let n = noise.dim();
    check_len(n, std.len())?;
    let s_bar = std.iter().map(|s| s * s).sum::<f64>() / n as f64;
    SnrSummary::from_powers(
        (n - 1) as f64 * s_bar,
        noise.residual_variance(),
        noise.max_variance(),
    )
}

/// The alpha at which the bias and variance terms of MSE-UB have matching
/// order: the positive root of
/// `l_n l_2 a^2 + (1 - beta theta) l_n a - beta theta = 0`.
pub fn alpha_star_match(theta: f64, beta: f64, lambda_2: f64, lambda_n: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) || !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "theta and beta must be positive, got theta = {theta}, beta = {beta}"
        )));
    }
    check_bounds(lambda_2, lambda_n)?;
    let bt = beta * theta;
    let lin = (bt - 1.0) * lambda_n;
    let c = 4.0 * lambda_n * lambda_2 * bt;
    let root = (lin * lin + c).sqrt();
    let denom = 2.0 * lambda_n * lambda_2;
    // Rationalize when the two terms nearly cancel.
    Ok(if lin >= 0.0 {
        (lin + root) / denom
    } else {
        c / ((root - lin) * denom)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    HighEsnr,
    ModerateEsnr,
    LowEsnr,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::HighEsnr => "high",
            Regime::ModerateEsnr => "moderate",
            Regime::LowEsnr => "low",
        }
    }

    /// Asymptotic order of the order-matching alpha in this regime.
    pub fn order(self) -> &'static str {
        match self {
            Regime::HighEsnr => "theta/lambda_n",
            Regime::ModerateEsnr => "sqrt(theta/(lambda_n*lambda_2))",
            Regime::LowEsnr => "theta/lambda_2",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    pub predicted_order: &'static str,
    pub predicted_alpha: f64,
}

pub fn regime(theta: f64, beta: f64, lambda_2: f64, lambda_n: f64) -> RegimeReport {
    let bt = beta * theta;
    let regime = if bt <= 1.0 / REGIME_RHO {
        Regime::HighEsnr
    } else if bt >= REGIME_RHO {
        Regime::LowEsnr
    } else {
        Regime::ModerateEsnr
    };
    let predicted_alpha = match regime {
        Regime::HighEsnr => theta / lambda_n,
        Regime::ModerateEsnr => (theta / (lambda_n * lambda_2)).sqrt(),
        Regime::LowEsnr => theta / lambda_2,
    };
    RegimeReport {
        regime,
        predicted_order: regime.order(),
        predicted_alpha,
    }
}
