//! Choosing alpha: log-grid search and the exact minimizer of MSE-UB.

use nalgebra::Matrix4;

use crate::error::{Error, Result};

use super::decomposition::{check_bounds, mse_ub_value};
use super::snr::SnrSummary;

/// Lowest grid point relative to the upper bound `b`.
pub const GRID_DECADES: f64 = 8.0;
/// Stand-in for `alpha -> infinity` when comparing against the boundary.
pub const ALPHA_INFINITY: f64 = 1e12;

/// `{0}` followed by `t` log-uniform points on `[b * 1e-8, b]`.
#[derive(Debug, Clone)]
pub struct AlphaGrid {
    b: f64,
    points: Vec<f64>,
}

impl AlphaGrid {
    pub fn new(b: f64, t: usize) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) || t < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs b > 0 and t >= 2, got b = {b}, t = {t}"
            )));
        }
        let lo = b.log10() - GRID_DECADES;
        let step = GRID_DECADES / (t - 1) as f64;
        let mut points = Vec::with_capacity(t + 1);
        points.push(0.0);
        points.extend((0..t).map(|k| 10f64.powf(lo + step * k as f64)));
        points[t] = b;
        Ok(Self { b, points })
    }

    pub fn upper(&self) -> f64 {
        self.b
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Multiplicative spacing between neighbouring positive points.
    pub fn step_ratio(&self) -> f64 {
        self.points[2] / self.points[1]
    }

    /// Whether two alphas are at most one grid step apart. Everything below
    /// the first positive point (zero included) lies in one cell just below it.
    pub fn within_one_step(&self, a: f64, b: f64) -> bool {
        let ratio = self.step_ratio() * (1.0 + 1e-9);
        let first = self.points[1];
        let (lo, hi) = (a.min(b), a.max(b));
        if lo < first {
            hi <= first * ratio
        } else {
            (hi.ln() - lo.ln()) <= ratio.ln()
        }
    }

    pub fn is_upper(&self, alpha: f64) -> bool {
        alpha >= self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub alpha: f64,
    pub value: f64,
    pub index: usize,
}

/// Minimize `objective` over the grid; ties go to the smallest alpha.
pub fn grid_search_on<F: FnMut(f64) -> f64>(grid: &AlphaGrid, mut objective: F) -> GridOptimum {
    let mut best = GridOptimum {
        alpha: 0.0,
        value: f64::INFINITY,
        index: 0,
    };
    for (index, &alpha) in grid.points().iter().enumerate() {
        let value = objective(alpha);
        if value < best.value {
            best = GridOptimum { alpha, value, index };
        }
    }
    best
}

/// Convenience wrapper building an [`AlphaGrid`] and returning `(alpha, value)`.
pub fn grid_search<F: FnMut(f64) -> f64>(objective: F, b: f64, t: usize) -> Result<(f64, f64)> {
    let grid = AlphaGrid::new(b, t)?;
    let opt = grid_search_on(&grid, objective);
    Ok((opt.alpha, opt.value))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UbMinimum {
    pub alpha: f64,
    pub value: f64,
    /// False when no positive stationary point beats the boundary limits
    /// (`alpha -> 0+` reported as 0, `alpha -> inf` as [`ALPHA_INFINITY`]).
    pub stationary: bool,
}

/// Coefficients (ascending powers of alpha) of the numerator of
/// d MSE-UB / d alpha, up to a positive factor:
/// `P l_n^2 a (1 + l_2 a)^3 - N l_2 (1 + l_n a)^3`.
pub fn stationarity_polynomial(lambda_2: f64, lambda_n: f64, snr: &SnrSummary) -> [f64; 5] {
    let (p, q) = (snr.p_signal, snr.p_noise);
    let (l2, ln) = (lambda_2, lambda_n);
    let sig = p * ln * ln;
    let noi = q * l2;
    [
        -noi,
        sig - 3.0 * noi * ln,
        3.0 * sig * l2 - 3.0 * noi * ln * ln,
        3.0 * sig * l2 * l2 - noi * ln * ln * ln,
        sig * l2 * l2 * l2,
    ]
}

fn horner(c: &[f64; 5], x: f64) -> (f64, f64) {
    let mut p = c[4];
    let mut dp = 0.0;
    for &ck in c[..4].iter().rev() {
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp)
}

/// Global minimizer of MSE-UB over `alpha >= 0`.
///
/// The positive real roots of the stationarity quartic come from the
/// eigenvalues of its companion matrix (in the rescaled variable
/// `u = alpha sqrt(l_2 l_n)`), are polished by Newton steps, and compete
/// with the two boundary limits.
pub fn minimize_mse_ub(lambda_2: f64, lambda_n: f64, snr: &SnrSummary) -> Result<UbMinimum> {
    check_bounds(lambda_2, lambda_n)?;
    let coeffs = stationarity_polynomial(lambda_2, lambda_n, snr);
    let f = |a: f64| mse_ub_value(a, lambda_2, lambda_n, snr);

    let scale = 1.0 / (lambda_2 * lambda_n).sqrt();
    let mut scaled = [0.0; 5];
    let mut s = 1.0;
    for k in 0..5 {
        scaled[k] = coeffs[k] * s;
        s *= scale;
    }
    let lead = scaled[4];
    let companion = Matrix4::new(
        -scaled[3] / lead, -scaled[2] / lead, -scaled[1] / lead, -scaled[0] / lead,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
    );

    let mut best = UbMinimum {
        alpha: 0.0,
        value: f(0.0),
        stationary: false,
    };
    let far = f(ALPHA_INFINITY);
    if far < best.value {
        best = UbMinimum {
            alpha: ALPHA_INFINITY,
            value: far,
            stationary: false,
        };
    }

    for root in companion.complex_eigenvalues().iter() {
        if root.im.abs() > 1e-9 * root.norm() || root.re <= 0.0 {
            continue;
        }
        let mut a = root.re * scale;
        for _ in 0..8 {
            let (p, dp) = horner(&coeffs, a);
            if dp == 0.0 {
                break;
            }
            let next = a - p / dp;
            if !(next > 0.0) || (next - a).abs() <= 1e-15 * a {
                if next > 0.0 {
                    a = next;
                }
                break;
            }
            a = next;
        }
        let v = f(a);
        if v < best.value || (v == best.value && a < best.alpha) {
            best = UbMinimum {
                alpha: a,
                value: v,
                stationary: true,
            };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let g = AlphaGrid::new(2000.0, 5).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 2e-5).abs() < 1e-18);
        assert_eq!(p[5], 2000.0);
        assert!((g.step_ratio() - 100.0).abs() < 1e-9);
        assert!(AlphaGrid::new(0.0, 5).is_err());
        assert!(AlphaGrid::new(1.0, 1).is_err());
        assert!(g.within_one_step(0.0, 1e-5));
        assert!(g.within_one_step(1e-9, 2e-3));
        assert!(!g.within_one_step(0.0, 2.1e-3));
        assert!(g.within_one_step(20.0, 2000.0));
        assert!(!g.within_one_step(19.0, 2000.0));
    }

    #[test]
    fn grid_tie_breaks_and_monotone() {
        assert_eq!(grid_search(|_| 3.0, 10.0, 50).unwrap(), (0.0, 3.0));
        assert_eq!(grid_search(|a| a, 10.0, 50).unwrap().0, 0.0);
        let (a, _) = grid_search(|a| -a, 10.0, 50).unwrap();
        assert_eq!(a, 10.0);
    }

    #[test]
    fn polynomial_is_derivative_numerator() {
        let snr = SnrSummary::from_powers(7.0, 3.0, 0.2).unwrap();
        let (l2, ln) = (0.8, 12.0);
        let c = stationarity_polynomial(l2, ln, &snr);
        for a in [0.01, 0.3, 2.0, 40.0] {
            let h = 1e-6 * a;
            let d = (mse_ub_value(a + h, l2, ln, &snr) - mse_ub_value(a - h, l2, ln, &snr)) / (2.0 * h);
            // d/da = 2 * numerator / ((1 + ln a)^3 (1 + l2 a)^3)
            let num = horner(&c, a).0;
            let expected = 2.0 * num / ((1.0 + ln * a).powi(3) * (1.0 + l2 * a).powi(3));
            assert!((d - expected).abs() <= 1e-6 * expected.abs().max(1e-12), "{a}: {d} vs {expected}");
        }
    }

    #[test]
    fn complete_graph_minimizer_is_wiener_like() {
        // l2 = ln = l: the quartic reduces to alpha = N / (P l).
        let snr = SnrSummary::from_powers(19.0, 19.0 * 0.25, 0.25).unwrap();
        let m = minimize_mse_ub(20.0, 20.0, &snr).unwrap();
        assert!(m.stationary);
        assert!((m.alpha - 0.25 / 20.0).abs() < 1e-14);
    }

    #[test]
    fn no_noise_beyond_largest_goes_to_zero() {
        let snr = SnrSummary::from_powers(5.0, 0.0, 1.0).unwrap();
        let m = minimize_mse_ub(1.0, 3.0, &snr).unwrap();
        assert_eq!(m.alpha, 0.0);
        assert!(!m.stationary);
    }

    #[test]
    fn beats_dense_grid() {
        for (theta, l2, ln) in [(0.05, 2.5, 22.0), (0.7, 2.5, 22.0), (3.0, 0.4, 40.0), (30.0, 3.0, 20.0)] {
            let p = 99.0;
            let snr = SnrSummary::from_powers(p, p * theta * theta, theta * theta).unwrap();
            let m = minimize_mse_ub(l2, ln, &snr).unwrap();
            let grid = AlphaGrid::new(1e6, 20_000).unwrap();
            let g = grid_search_on(&grid, |a| mse_ub_value(a, l2, ln, &snr));
            assert!(m.value <= g.value * (1.0 + 1e-12), "theta {theta}");
            assert!(grid.within_one_step(m.alpha, g.alpha), "theta {theta}: {} vs {}", m.alpha, g.alpha);
        }
    }
}
