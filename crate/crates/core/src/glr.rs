//! The GLR estimator `x_hat = argmin ||y - x||^2 + alpha x^T L x
//! = (I + alpha L)^{-1} y`, by two independent routes.
//!
//! * [`denoise_spectral`] filters the graph Fourier coefficients of `y` with
//!   gains `h_i = 1 / (1 + alpha lambda_i)`.
//! * [`denoise_direct`] solves the linear system: dense Cholesky with
//!   iterative refinement up to [`DENSE_SOLVE_MAX_N`] nodes, Jacobi
//!   preconditioned conjugate gradients above it.

use crate::eigen::{dot, Spectrum};
use crate::error::{check_len, Error, Result};
use crate::graph::LaplacianMatrix;
use crate::signal::stable_sum;

pub const DENSE_SOLVE_MAX_N: usize = 2000;
const RESIDUAL_TOL: f64 = 1e-10;

/// Per-mode gains of the GLR filter and of its complement `I - H`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterGains {
    pub alpha: f64,
    /// `h_i = 1 / (1 + alpha lambda_i)`; `h_1 = 1`.
    pub h: Vec<f64>,
    /// `q_i = alpha lambda_i / (1 + alpha lambda_i)`; `q_1 = 0`.
    pub q: Vec<f64>,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && !alpha.is_nan() {
        Ok(())
    } else {
        Err(Error::NegativeAlpha(alpha))
    }
}

#[inline]
pub(crate) fn gains_at(alpha: f64, lambda: f64) -> (f64, f64) {
    let t = alpha * lambda;
    if t.is_infinite() {
        return (0.0, 1.0);
    }
    let d = 1.0 + t;
    (1.0 / d, t / d)
}

pub fn filter_gains(spectrum: &Spectrum, alpha: f64) -> Result<FilterGains> {
    check_alpha(alpha)?;
    let (h, q) = spectrum
        .eigenvalues()
        .iter()
        .map(|&lam| gains_at(alpha, lam))
        .unzip();
    Ok(FilterGains { alpha, h, q })
}

pub fn denoise_spectral(y: &[f64], spectrum: &Spectrum, alpha: f64) -> Result<Vec<f64>> {
    check_len(spectrum.dim(), y.len())?;
    let gains = filter_gains(spectrum, alpha)?;
    let coeffs: Vec<f64> = spectrum
        .project(y)
        .iter()
        .zip(&gains.h)
        .map(|(c, h)| c * h)
        .collect();
    Ok(spectrum.synthesize(&coeffs))
}

/// Which linear solver [`denoise_direct_with`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectMethod {
    /// Cholesky up to [`DENSE_SOLVE_MAX_N`] nodes, conjugate gradients above.
    Auto,
    Cholesky,
    ConjugateGradient,
}

pub fn denoise_direct(y: &[f64], l: &LaplacianMatrix, alpha: f64) -> Result<Vec<f64>> {
    denoise_direct_with(y, l, alpha, DirectMethod::Auto)
}

/// Solve `(I + alpha L) x = y` to relative residual `1e-10`.
pub fn denoise_direct_with(
    y: &[f64],
    l: &LaplacianMatrix,
    alpha: f64,
    method: DirectMethod,
) -> Result<Vec<f64>> {
    check_len(l.dim(), y.len())?;
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(y.to_vec());
    }
    let method = match method {
        DirectMethod::Auto if l.dim() <= DENSE_SOLVE_MAX_N => DirectMethod::Cholesky,
        DirectMethod::Auto => DirectMethod::ConjugateGradient,
        m => m,
    };
    let mut x = match method {
        DirectMethod::Cholesky => cholesky_refined(y, l, alpha)?,
        _ => pcg(y, l, alpha)?,
    };
    // The constant mode passes through unchanged; pin it exactly.
    let shift = (stable_sum(y.iter().copied()) - stable_sum(x.iter().copied())) / y.len() as f64;
    x.iter_mut().for_each(|v| *v += shift);
    Ok(x)
}

fn residual(y: &[f64], x: &[f64], l: &LaplacianMatrix, alpha: f64, r: &mut [f64]) {
    l.apply(x, r);
    for ((ri, yi), xi) in r.iter_mut().zip(y).zip(x) {
        *ri = yi - xi - alpha * *ri;
    }
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn cholesky_refined(y: &[f64], l: &LaplacianMatrix, alpha: f64) -> Result<Vec<f64>> {
    let n = l.dim();
    let mut a = l.to_dense();
    a.iter_mut().for_each(|v| *v *= alpha);
    for i in 0..n {
        a[i * n + i] += 1.0;
    }
    cholesky_in_place(&mut a, n)?;

    let ynorm = norm(y);
    let mut x = y.to_vec();
    cholesky_solve(&a, n, &mut x);
    let mut r = vec![0.0; n];
    let mut rel = f64::INFINITY;
    for _ in 0..8 {
        residual(y, &x, l, alpha, &mut r);
        rel = norm(&r) / ynorm.max(f64::MIN_POSITIVE);
        if rel <= 0.1 * RESIDUAL_TOL || ynorm == 0.0 {
            return Ok(x);
        }
        cholesky_solve(&a, n, &mut r);
        x.iter_mut().zip(&r).for_each(|(xi, d)| *xi += d);
    }
    if rel <= RESIDUAL_TOL {
        Ok(x)
    } else {
        Err(Error::SolveFailure { residual: rel })
    }
}

/// Lower Cholesky factor, written over the lower triangle of `a`.
fn cholesky_in_place(a: &mut [f64], n: usize) -> Result<()> {
    for j in 0..n {
        let (done, rest) = a.split_at_mut(j * n);
        let row_j = &mut rest[..n];
        for k in 0..j {
            let row_k = &done[k * n..k * n + k];
            let s = dot(&row_j[..k], row_k);
            row_j[k] = (row_j[k] - s) / done[k * n + k];
        }
        let d = row_j[j] - dot(&row_j[..j], &row_j[..j]);
        if !(d > 0.0) {
            return Err(Error::SolveFailure { residual: f64::NAN });
        }
        row_j[j] = d.sqrt();
    }
    Ok(())
}

fn cholesky_solve(f: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let s = dot(&f[i * n..i * n + i], &b[..i]);
        b[i] = (b[i] - s) / f[i * n + i];
    }
    for i in (0..n).rev() {
        let xi = b[i] / f[i * n + i];
        b[i] = xi;
        for k in 0..i {
            b[k] -= f[i * n + k] * xi;
        }
    }
}

fn pcg(y: &[f64], l: &LaplacianMatrix, alpha: f64) -> Result<Vec<f64>> {
    let n = l.dim();
    let inv_diag: Vec<f64> = l.degrees().iter().map(|d| 1.0 / (1.0 + alpha * d)).collect();
    let ynorm = norm(y);
    if ynorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];
    let max_iter = 10 * n + 100;
    let mut rel = f64::INFINITY;
    for _restart in 0..4 {
        residual(y, &x, l, alpha, &mut r);
        rel = norm(&r) / ynorm;
        if rel <= RESIDUAL_TOL {
            return Ok(x);
        }
        z.iter_mut().zip(&r).zip(&inv_diag).for_each(|((z, r), m)| *z = r * m);
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        for _ in 0..max_iter {
            l.apply(&p, &mut ap);
            ap.iter_mut().zip(&p).for_each(|(a, pi)| *a = pi + alpha * *a);
            let step = rz / dot(&p, &ap);
            x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += step * pi);
            r.iter_mut().zip(&ap).for_each(|(ri, a)| *ri -= step * a);
            if norm(&r) <= 0.25 * RESIDUAL_TOL * ynorm {
                break;
            }
            z.iter_mut().zip(&r).zip(&inv_diag).for_each(|((z, r), m)| *z = r * m);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
        }
    }
    Err(Error::SolveFailure { residual: rel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn p2() -> (Graph, Spectrum) {
        let g = Graph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let s = Spectrum::compute(&g.laplacian()).unwrap();
        (g, s)
    }

    #[test]
    fn gains_examples() {
        let (_, s) = p2();
        let g = filter_gains(&s, 0.0).unwrap();
        assert_eq!(g.h, vec![1.0, 1.0]);
        assert_eq!(g.q, vec![0.0, 0.0]);
        let g = filter_gains(&s, 0.5).unwrap();
        assert_eq!(g.h[0], 1.0);
        assert!((g.h[1] - 0.5).abs() < 1e-15);
        assert!(matches!(filter_gains(&s, -1.0), Err(Error::NegativeAlpha(_))));
    }

    #[test]
    fn complete_graph_gains() {
        let g = crate::generators::complete(6, 1.0).unwrap();
        let s = Spectrum::compute(&g.laplacian()).unwrap();
        let gains = filter_gains(&s, 0.3).unwrap();
        for &h in &gains.h[1..] {
            assert!((h - 1.0 / (1.0 + 0.3 * 6.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn p2_denoise_both_routes() {
        let (g, s) = p2();
        let xs = denoise_spectral(&[1.0, 0.0], &s, 0.5).unwrap();
        let xd = denoise_direct(&[1.0, 0.0], &g.laplacian(), 0.5).unwrap();
        for x in [xs, xd] {
            assert!((x[0] - 0.75).abs() < 1e-14 && (x[1] - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_and_constant_cases() {
        let g = crate::generators::watts_strogatz(12, 4, 0.3, 2).unwrap();
        let l = g.laplacian();
        let s = Spectrum::compute(&l).unwrap();
        let y: Vec<f64> = (0..12).map(|i| (i as f64).sin()).collect();
        assert_eq!(denoise_direct(&y, &l, 0.0).unwrap(), y);
        let ys = denoise_spectral(&y, &s, 0.0).unwrap();
        for (a, b) in ys.iter().zip(&y) {
            assert!((a - b).abs() < 1e-13);
        }
        let c = vec![2.5; 12];
        for method in [DirectMethod::Cholesky, DirectMethod::ConjugateGradient] {
            let x = denoise_direct_with(&c, &l, 3.0, method).unwrap();
            assert!(x.iter().all(|v| (v - 2.5).abs() < 1e-12));
        }
        let x = denoise_spectral(&c, &s, 3.0).unwrap();
        assert!(x.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn cg_matches_cholesky() {
        let g = crate::generators::erdos_renyi(80, 0.08, 11).unwrap();
        let l = g.laplacian();
        let y: Vec<f64> = (0..80).map(|i| ((i * 7 % 13) as f64) - 6.0).collect();
        for alpha in [1e-3, 0.7, 50.0, 1e6] {
            let a = denoise_direct_with(&y, &l, alpha, DirectMethod::Cholesky).unwrap();
            let b = denoise_direct_with(&y, &l, alpha, DirectMethod::ConjugateGradient).unwrap();
            let diff = norm(&a.iter().zip(&b).map(|(u, v)| u - v).collect::<Vec<_>>());
            assert!(diff <= 1e-8 * norm(&a), "alpha {alpha}: {diff}");
        }
    }

    #[test]
    fn dimension_checks() {
        let (g, s) = p2();
        assert!(denoise_spectral(&[1.0], &s, 1.0).is_err());
        assert!(denoise_direct(&[1.0, 2.0, 3.0], &g.laplacian(), 1.0).is_err());
        assert!(matches!(
            denoise_direct(&[1.0, 2.0], &g.laplacian(), -0.1),
            Err(Error::NegativeAlpha(_))
        ));
    }
}
