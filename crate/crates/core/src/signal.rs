//! Ground-truth signal models, the diagonal Gaussian noise model, and small
//! vector utilities (averaging, centering, signal power).

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::eigen::Spectrum;
use crate::error::{check_len, Error, Result};
use crate::rng::rng_from_seed;

/// Zero-mean Gaussian noise with covariance `diag(sigma_i^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    sigma: Vec<f64>,
}

impl NoiseModel {
    /// Per-node standard deviations; all must be finite and non-negative,
    /// and at least one positive.
    pub fn new(sigma: Vec<f64>) -> Result<Self> {
        if let Some(bad) = sigma.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "noise standard deviation must be finite and non-negative, got {bad}"
            )));
        }
        if !sigma.iter().any(|&s| s > 0.0) {
            return Err(Error::InvalidParameter(
                "noise model needs at least one positive standard deviation".into(),
            ));
        }
        Ok(Self { sigma })
    }

    pub fn isotropic(n: usize, sigma: f64) -> Result<Self> {
        Self::new(vec![sigma; n])
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn variances(&self) -> Vec<f64> {
        self.sigma.iter().map(|s| s * s).collect()
    }

    pub fn is_isotropic(&self) -> bool {
        self.sigma.iter().all(|&s| s == self.sigma[0])
    }

    /// Largest per-node variance.
    pub fn max_variance(&self) -> f64 {
        self.sigma.iter().fold(0.0f64, |m, s| m.max(s * s))
    }

    /// Sum of all variances except one copy of the largest.
    pub fn residual_variance(&self) -> f64 {
        let v = self.variances();
        let total: f64 = v.iter().sum();
        total - self.max_variance()
    }

    /// Noise of the mean of `t` i.i.d. observations: `sigma / sqrt(t)`.
    pub fn averaged(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        let f = (t as f64).sqrt();
        Self::new(self.sigma.iter().map(|s| s / f).collect())
    }

    /// A draw of `e ~ N(0, diag(sigma^2))`.
    pub fn sample(&self, seed: u64) -> Vec<f64> {
        let mut rng = rng_from_seed(seed);
        self.sigma
            .iter()
            .map(|s| s * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }
}

/// How the ground-truth signal `x*` is produced.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Deterministic(Vec<f64>),
    /// `x* ~ N(mean * 1, diag(std^2))`.
    RandomGaussian { mean: f64, std: Vec<f64> },
    /// `x* = sum_j w_j v_j` over 0-based mode indices (mode 0 is constant).
    BandLimited(Vec<(usize, f64)>),
}

impl SignalSpec {
    pub fn is_random(&self) -> bool {
        matches!(self, SignalSpec::RandomGaussian { .. })
    }

    /// Produce `x*`. The seed is only consumed by random specs.
    pub fn realize(&self, spectrum: &Spectrum, seed: u64) -> Result<Vec<f64>> {
        let n = spectrum.dim();
        match self {
            SignalSpec::Deterministic(x) => {
                check_len(n, x.len())?;
                Ok(x.clone())
            }
            SignalSpec::RandomGaussian { mean, std } => gaussian_signal(n, *mean, std, seed),
            SignalSpec::BandLimited(coeffs) => band_limited_signal(spectrum, coeffs),
        }
    }
}

pub fn gaussian_signal(n: usize, mean: f64, std: &[f64], seed: u64) -> Result<Vec<f64>> {
    check_len(n, std.len())?;
    if std.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::InvalidParameter(
            "signal standard deviations must be non-negative".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    Ok(std
        .iter()
        .map(|s| {
            let z: f64 = rng.sample(StandardNormal);
            if *s == 0.0 {
                mean
            } else {
                mean + s * z
            }
        })
        .collect())
}

/// Validate a band-limited coefficient set against a graph of `n` nodes.
pub fn check_band(n: usize, coeffs: &[(usize, f64)]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter(
            "band-limited signal needs a nonempty active set".into(),
        ));
    }
    let mut seen = vec![false; n];
    for &(j, w) in coeffs {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, len: n });
        }
        if seen[j] {
            return Err(Error::InvalidParameter(format!("mode {j} listed twice")));
        }
        if w == 0.0 || !w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mode {j} has coefficient {w}; active coefficients must be nonzero"
            )));
        }
        seen[j] = true;
    }
    Ok(())
}

pub fn band_limited_signal(spectrum: &Spectrum, coeffs: &[(usize, f64)]) -> Result<Vec<f64>> {
    let n = spectrum.dim();
    check_band(n, coeffs)?;
    let mut c = vec![0.0; n];
    for &(j, w) in coeffs {
        c[j] = w;
    }
    Ok(spectrum.synthesize(&c))
}

/// `y = x* + e`.
pub fn observe(x: &[f64], noise: &NoiseModel, seed: u64) -> Result<Vec<f64>> {
    check_len(noise.dim(), x.len())?;
    Ok(x.iter().zip(noise.sample(seed)).map(|(a, e)| a + e).collect())
}

/// Entrywise mean of equally sized vectors.
pub fn average_samples(samples: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = samples.first().ok_or(Error::EmptyList)?;
    let n = first.len();
    let mut acc = vec![0.0; n];
    for s in samples {
        check_len(n, s.len())?;
        acc.iter_mut().zip(s).for_each(|(a, v)| *a += v);
    }
    let t = samples.len() as f64;
    acc.iter_mut().for_each(|a| *a /= t);
    Ok(acc)
}

/// Compensated (Neumaier) sum.
pub fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `x - mean(x) * 1`.
///
/// The mean is accumulated relative to `x[0]`, so constant vectors center
/// to exact zeros and large common offsets cancel before summation.
pub fn centered(x: &[f64]) -> Vec<f64> {
    let Some(&pivot) = x.first() else {
        return Vec::new();
    };
    let offset = stable_sum(x.iter().map(|v| v - pivot)) / x.len() as f64;
    x.iter().map(|v| (v - pivot) - offset).collect()
}

/// Power of the non-constant part of `x`: `||centered(x)||^2`.
pub fn signal_power(x: &[f64]) -> f64 {
    centered(x).iter().map(|v| v * v).sum()
}
