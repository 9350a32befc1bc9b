//! Closed-form bias, variance, MSE and the MSE upper envelope (MSE-UB).

use crate::eigen::Spectrum;
use crate::error::{check_len, Error, Result};
use crate::glr::{check_alpha, gains_at};
use crate::signal::{centered, NoiseModel};

use super::snr::SnrSummary;

/// One point on the regularization path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionPoint {
    pub alpha: f64,
    pub bias_sq: f64,
    pub variance: f64,
    pub mse: f64,
    pub mse_ub: f64,
}

/// Precomputed spectral weights for evaluating MSE(alpha) in O(n).
///
/// * `signal[k] = (v_k^T centered(x*))^2`, zero for the constant mode;
/// * `noise[k] = sum_i sigma_i^2 v_k(i)^2`, so `Var = sum_k h_k^2 noise[k]`
///   is exactly `trace(H^2 Sigma)` for any diagonal `Sigma`.
#[derive(Debug, Clone)]
pub struct MseCurve {
    lambdas: Vec<f64>,
    signal: Vec<f64>,
    noise: Vec<f64>,
    snr: SnrSummary,
}

impl MseCurve {
    pub fn new(spectrum: &Spectrum, x: &[f64], noise: &NoiseModel) -> Result<Self> {
        let n = spectrum.dim();
        check_len(n, x.len())?;
        check_len(n, noise.dim())?;
        let mut signal: Vec<f64> = spectrum
            .project(&centered(x))
            .into_iter()
            .map(|c| c * c)
            .collect();
        signal[0] = 0.0;
        let variances = noise.variances();
        let noise_w = (0..n)
            .map(|k| {
                spectrum
                    .eigenvector(k)
                    .iter()
                    .zip(&variances)
                    .map(|(v, s2)| s2 * v * v)
                    .sum()
            })
            .collect();
        let p_signal = signal.iter().sum();
        let snr = SnrSummary::from_powers(p_signal, noise.residual_variance(), noise.max_variance())?;
        Ok(Self {
            lambdas: spectrum.eigenvalues().to_vec(),
            signal,
            noise: noise_w,
            snr,
        })
    }

    /// Same curve with the noise covariance divided by `t` (mean of `t`
    /// i.i.d. observations). Bias is unchanged.
    pub fn averaged(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        self.scale_noise(1.0 / t as f64)
    }

    /// Same curve with every noise variance multiplied by `factor`.
    pub fn scale_noise(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise scale must be positive, got {factor}"
            )));
        }
        Ok(Self {
            lambdas: self.lambdas.clone(),
            signal: self.signal.clone(),
            noise: self.noise.iter().map(|w| w * factor).collect(),
            snr: SnrSummary::from_powers(
                self.snr.p_signal,
                self.snr.p_noise * factor,
                self.snr.sigma1_sq * factor,
            )?,
        })
    }

    pub fn snr(&self) -> &SnrSummary {
        &self.snr
    }

    pub fn lambda_2(&self) -> f64 {
        self.lambdas[1]
    }

    pub fn lambda_n(&self) -> f64 {
        self.lambdas[self.lambdas.len() - 1]
    }

    pub fn bias_sq(&self, alpha: f64) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.signal)
            .skip(1)
            .map(|(&lam, c)| {
                let (_, q) = gains_at(alpha, lam);
                q * q * c
            })
            .sum()
    }

    pub fn variance(&self, alpha: f64) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.noise)
            .map(|(&lam, w)| {
                let (h, _) = gains_at(alpha, lam);
                h * h * w
            })
            .sum()
    }

    pub fn mse(&self, alpha: f64) -> f64 {
        self.bias_sq(alpha) + self.variance(alpha)
    }

    pub fn mse_ub(&self, alpha: f64) -> f64 {
        mse_ub_value(alpha, self.lambda_2(), self.lambda_n(), &self.snr)
    }

    pub fn point(&self, alpha: f64) -> DecompositionPoint {
        let bias_sq = self.bias_sq(alpha);
        let variance = self.variance(alpha);
        DecompositionPoint {
            alpha,
            bias_sq,
            variance,
            mse: bias_sq + variance,
            mse_ub: self.mse_ub(alpha),
        }
    }
}

/// Squared bias `sum_{i>=2} q_i^2 (v_i^T centered(x*))^2`.
pub fn bias_sq(alpha: f64, spectrum: &Spectrum, x: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    check_len(spectrum.dim(), x.len())?;
    let coeffs = spectrum.project(&centered(x));
    Ok(spectrum
        .eigenvalues()
        .iter()
        .zip(&coeffs)
        .skip(1)
        .map(|(&lam, c)| {
            let (_, q) = gains_at(alpha, lam);
            q * q * c * c
        })
        .sum())
}

/// `trace(H^2 Sigma) = sum_i sigma_i^2 sum_k h_k^2 v_k(i)^2`, exact for any
/// diagonal covariance.
pub fn variance_exact(alpha: f64, spectrum: &Spectrum, noise: &NoiseModel) -> Result<f64> {
    check_alpha(alpha)?;
    check_len(spectrum.dim(), noise.dim())?;
    let variances = noise.variances();
    let mut total = 0.0;
    for (k, &lam) in spectrum.eigenvalues().iter().enumerate() {
        let (h, _) = gains_at(alpha, lam);
        let w: f64 = spectrum
            .eigenvector(k)
            .iter()
            .zip(&variances)
            .map(|(v, s2)| s2 * v * v)
            .sum();
        total += h * h * w;
    }
    Ok(total)
}

/// `sum_i h_i^2 sigma_(i)^2` with the variances sorted in descending order,
/// pairing the largest variance with the largest gain.
///
/// Equal to [`variance_exact`] for isotropic noise and an upper bound on it
/// otherwise (von Neumann's trace inequality).
pub fn variance_sorted_pairing(alpha: f64, spectrum: &Spectrum, noise: &NoiseModel) -> Result<f64> {
    check_alpha(alpha)?;
    check_len(spectrum.dim(), noise.dim())?;
    let mut variances = noise.variances();
    variances.sort_by(|a, b| b.total_cmp(a));
    Ok(spectrum
        .eigenvalues()
        .iter()
        .zip(&variances)
        .map(|(&lam, s2)| {
            let (h, _) = gains_at(alpha, lam);
            h * h * s2
        })
        .sum())
}

/// Bias, exact variance, MSE and MSE-UB at one `alpha`.
pub fn mse_analytic(
    alpha: f64,
    spectrum: &Spectrum,
    x: &[f64],
    noise: &NoiseModel,
) -> Result<DecompositionPoint> {
    check_alpha(alpha)?;
    Ok(MseCurve::new(spectrum, x, noise)?.point(alpha))
}

/// The MSE upper envelope
/// `(a l_n / (1 + a l_n))^2 P + (1 / (1 + a l_2))^2 N + sigma_1^2`.
///
/// `alpha = 0` is accepted and gives the right-hand limit `N + sigma_1^2`.
pub fn mse_ub(alpha: f64, lambda_2: f64, lambda_n: f64, snr: &SnrSummary) -> Result<f64> {
    check_alpha(alpha)?;
    check_bounds(lambda_2, lambda_n)?;
    Ok(mse_ub_value(alpha, lambda_2, lambda_n, snr))
}

pub(crate) fn check_bounds(lambda_2: f64, lambda_n: f64) -> Result<()> {
    if lambda_2 > 0.0 && lambda_n >= lambda_2 && lambda_n.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpectrumBounds { lambda_2, lambda_n })
    }
}

#[inline]
pub(crate) fn mse_ub_value(alpha: f64, lambda_2: f64, lambda_n: f64, snr: &SnrSummary) -> f64 {
    let (_, q) = gains_at(alpha, lambda_n);
    let (h, _) = gains_at(alpha, lambda_2);
    q * q * snr.p_signal + h * h * snr.p_noise + snr.sigma1_sq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, erdos_renyi};
    use crate::graph::Graph;

    fn spectrum(g: &Graph) -> Spectrum {
        Spectrum::compute(&g.laplacian()).unwrap()
    }

    fn wave(n: usize) -> Vec<f64> {
        (0..n).map(|i| 3.0 + (0.7 * i as f64).sin() * 2.0).collect()
    }

    #[test]
    fn bias_limits() {
        let g = erdos_renyi(30, 0.2, 1).unwrap();
        let s = spectrum(&g);
        let x = wave(30);
        assert_eq!(bias_sq(0.0, &s, &x).unwrap(), 0.0);
        assert!(bias_sq(5.0, &s, &vec![2.0; 30]).unwrap() < 1e-25);
        let p = crate::signal::signal_power(&x);
        let far = bias_sq(1e8, &s, &x).unwrap();
        assert!(((far - p) / p).abs() < 1e-6);
    }

    #[test]
    fn variance_limits() {
        let g = erdos_renyi(30, 0.2, 2).unwrap();
        let s = spectrum(&g);
        let nm = NoiseModel::new((0..30).map(|i| 0.5 + 0.05 * i as f64).collect()).unwrap();
        let total: f64 = nm.variances().iter().sum();
        assert!((variance_exact(0.0, &s, &nm).unwrap() - total).abs() < 1e-12 * total);
        assert!((variance_sorted_pairing(0.0, &s, &nm).unwrap() - total).abs() < 1e-12 * total);

        let iso = NoiseModel::isotropic(30, 0.8).unwrap();
        let gains = crate::glr::filter_gains(&s, 0.4).unwrap();
        let expected: f64 = 0.64 * gains.h.iter().map(|h| h * h).sum::<f64>();
        let v = variance_exact(0.4, &s, &iso).unwrap();
        assert!((v - expected).abs() < 1e-12 * expected);
        let vp = variance_sorted_pairing(0.4, &s, &iso).unwrap();
        assert!((v - vp).abs() < 1e-12 * v);
        let far = variance_exact(1e8, &s, &iso).unwrap();
        assert!((far - 0.64).abs() < 1e-6 * 0.64);
    }

    #[test]
    fn sorted_pairing_bounds_exact_variance_on_p2() {
        // Brute force on P2: H = [[1+a, a], [a, 1+a]] / (1 + 2a).
        let g = Graph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let s = spectrum(&g);
        let nm = NoiseModel::new(vec![0.5, 2.0]).unwrap();
        for alpha in [0.1, 1.0, 10.0] {
            let d = 1.0 + 2.0 * alpha;
            let h = [[(1.0 + alpha) / d, alpha / d], [alpha / d, (1.0 + alpha) / d]];
            let sig = [0.25, 4.0];
            let mut trace = 0.0;
            for i in 0..2 {
                for k in 0..2 {
                    trace += h[i][k] * h[k][i] * sig[i];
                }
            }
            let exact = variance_exact(alpha, &s, &nm).unwrap();
            assert!((exact - trace).abs() < 1e-14);
            assert!(variance_sorted_pairing(alpha, &s, &nm).unwrap() >= exact);
        }
    }

    #[test]
    fn complete_graph_envelope_is_tight() {
        let g = complete(15, 1.0).unwrap();
        let s = spectrum(&g);
        let nm = NoiseModel::isotropic(15, 0.7).unwrap();
        let curve = MseCurve::new(&s, &wave(15), &nm).unwrap();
        for alpha in [1e-3, 0.1, 1.0, 30.0] {
            let p = curve.point(alpha);
            assert!(((p.mse - p.mse_ub) / p.mse_ub).abs() < 1e-12);
            assert_eq!(p.mse, p.bias_sq + p.variance);
        }
    }

    #[test]
    fn mse_at_zero_and_infinity() {
        let g = erdos_renyi(25, 0.3, 4).unwrap();
        let s = spectrum(&g);
        let nm = NoiseModel::isotropic(25, 1.3).unwrap();
        let x = wave(25);
        let p0 = mse_analytic(0.0, &s, &x, &nm).unwrap();
        assert!((p0.mse - 25.0 * 1.69).abs() < 1e-10);
        assert!((p0.mse_ub - p0.mse).abs() < 1e-10);
        let pinf = mse_analytic(1e8, &s, &x, &nm).unwrap();
        let target = crate::signal::signal_power(&x) + 1.69;
        assert!(((pinf.mse - target) / target).abs() < 1e-6);
    }

    #[test]
    fn mse_ub_limits_and_errors() {
        let snr = SnrSummary::from_powers(4.0, 9.0, 0.5).unwrap();
        let v = mse_ub(1e-14, 1.0, 5.0, &snr).unwrap();
        assert!((v - 9.5).abs() < 1e-9);
        assert!(matches!(
            mse_ub(1.0, 0.0, 5.0, &snr),
            Err(Error::InvalidSpectrumBounds { .. })
        ));
        assert!(matches!(
            mse_ub(1.0, 3.0, 2.0, &snr),
            Err(Error::InvalidSpectrumBounds { .. })
        ));
    }

    #[test]
    fn averaged_curve_divides_variance() {
        let g = erdos_renyi(20, 0.3, 8).unwrap();
        let s = spectrum(&g);
        let nm = NoiseModel::new((0..20).map(|i| 1.0 + 0.1 * i as f64).collect()).unwrap();
        let c = MseCurve::new(&s, &wave(20), &nm).unwrap();
        let c4 = c.averaged(4).unwrap();
        for alpha in [0.01, 1.0, 100.0] {
            assert!((c4.variance(alpha) - c.variance(alpha) / 4.0).abs() < 1e-12 * c.variance(alpha));
            assert_eq!(c4.bias_sq(alpha), c.bias_sq(alpha));
        }
    }
}
