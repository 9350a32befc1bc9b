//! Monte-Carlo estimates of the GLR estimator's MSE.
//!
//! Realization `r` draws all of its randomness from
//! `derive_seed(seed, REALIZATION, r)`, and realizations are reduced in
//! index order, so the result does not depend on thread scheduling.

use rayon::prelude::*;

use crate::eigen::Spectrum;
use crate::error::{check_len, Error, Result};
use crate::glr::{check_alpha, denoise_spectral};
use crate::rng::{derive_seed, stream};
use crate::signal::{average_samples, observe, stable_sum, NoiseModel, SignalSpec};

#[derive(Debug, Clone, Copy)]
pub struct MonteCarloOptions {
    pub realizations: usize,
    pub seed: u64,
    /// Observations averaged before denoising.
    pub samples: usize,
    /// Redraw `x*` every realization for random signal specs. When false a
    /// single `x*` is drawn up front and reused.
    pub redraw_signal: bool,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self {
            realizations: 50,
            seed: 0,
            samples: 1,
            redraw_signal: true,
        }
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_samples(values: &[f64]) -> Self {
        let r = values.len() as f64;
        let mean = stable_sum(values.iter().copied()) / r;
        let std_error = if values.len() > 1 {
            let ss = stable_sum(values.iter().map(|v| (v - mean).powi(2)));
            (ss / (r - 1.0)).sqrt() / r.sqrt()
        } else {
            0.0
        };
        Self { mean, std_error }
    }

    /// `|mean - target| <= k * std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    /// `||x_hat - x*||^2`.
    pub mse: Estimate,
    /// `||x_hat - H x*||^2`, the variance component.
    pub variance: Estimate,
    pub realizations: usize,
}

pub fn empirical_mse(
    spectrum: &Spectrum,
    signal: &SignalSpec,
    noise: &NoiseModel,
    alpha: f64,
    opts: &MonteCarloOptions,
) -> Result<MonteCarloResult> {
    check_alpha(alpha)?;
    check_len(spectrum.dim(), noise.dim())?;
    if opts.realizations == 0 || opts.samples == 0 {
        return Err(Error::InvalidParameter(
            "realizations and samples must be at least 1".into(),
        ));
    }
    let redraw = signal.is_random() && opts.redraw_signal;
    let fixed = if redraw {
        None
    } else {
        let x = signal.realize(spectrum, derive_seed(opts.seed, stream::SIGNAL, 0))?;
        let hx = denoise_spectral(&x, spectrum, alpha)?;
        Some((x, hx))
    };

    let per_realization: Vec<(f64, f64)> = (0..opts.realizations)
        .into_par_iter()
        .map(|r| -> Result<(f64, f64)> {
            let rseed = derive_seed(opts.seed, stream::REALIZATION, r as u64);
            let owned;
            let (x, hx) = match &fixed {
                Some((x, hx)) => (x, hx),
                None => {
                    let x = signal.realize(spectrum, derive_seed(rseed, stream::SIGNAL, 0))?;
                    let hx = denoise_spectral(&x, spectrum, alpha)?;
                    owned = (x, hx);
                    (&owned.0, &owned.1)
                }
            };
            let y = if opts.samples == 1 {
                observe(x, noise, derive_seed(rseed, stream::NOISE, 0))?
            } else {
                let ys = (0..opts.samples)
                    .map(|t| observe(x, noise, derive_seed(rseed, stream::NOISE, t as u64)))
                    .collect::<Result<Vec<_>>>()?;
                average_samples(&ys)?
            };
            let xhat = denoise_spectral(&y, spectrum, alpha)?;
            let err = xhat.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum();
            let var = xhat.iter().zip(hx).map(|(a, b)| (a - b).powi(2)).sum();
            Ok((err, var))
        })
        .collect::<Result<_>>()?;

    let (errs, vars): (Vec<f64>, Vec<f64>) = per_realization.into_iter().unzip();
    Ok(MonteCarloResult {
        mse: Estimate::from_samples(&errs),
        variance: Estimate::from_samples(&vars),
        realizations: opts.realizations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::MseCurve;
    use crate::generators::erdos_renyi;

    #[test]
    fn noiseless_identity_has_zero_error() {
        let g = erdos_renyi(20, 0.3, 1).unwrap();
        let s = Spectrum::compute(&g.laplacian()).unwrap();
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let nm = NoiseModel::isotropic(20, 1e-12).unwrap();
        let opts = MonteCarloOptions {
            realizations: 20,
            ..Default::default()
        };
        let r = empirical_mse(&s, &SignalSpec::Deterministic(x), &nm, 0.0, &opts).unwrap();
        assert!(r.mse.mean < 1e-20);
    }

    #[test]
    fn deterministic_and_scheduling_independent() {
        let g = erdos_renyi(30, 0.2, 3).unwrap();
        let s = Spectrum::compute(&g.laplacian()).unwrap();
        let sig = SignalSpec::RandomGaussian {
            mean: 10.0,
            std: vec![1.0; 30],
        };
        let nm = NoiseModel::isotropic(30, 0.5).unwrap();
        let opts = MonteCarloOptions {
            realizations: 200,
            seed: 17,
            ..Default::default()
        };
        let a = empirical_mse(&s, &sig, &nm, 0.3, &opts).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| empirical_mse(&s, &sig, &nm, 0.3, &opts).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn agrees_with_analytic_mse() {
        let g = erdos_renyi(40, 0.2, 5).unwrap();
        let s = Spectrum::compute(&g.laplacian()).unwrap();
        let x: Vec<f64> = (0..40).map(|i| 10.0 + (i as f64 * 0.4).sin()).collect();
        let nm = NoiseModel::isotropic(40, 1.0).unwrap();
        let curve = MseCurve::new(&s, &x, &nm).unwrap();
        let opts = MonteCarloOptions {
            realizations: 4000,
            seed: 2,
            ..Default::default()
        };
        let r = empirical_mse(&s, &SignalSpec::Deterministic(x), &nm, 0.5, &opts).unwrap();
        assert!(r.mse.within(curve.mse(0.5), 4.0), "{:?} vs {}", r.mse, curve.mse(0.5));
    }
}
