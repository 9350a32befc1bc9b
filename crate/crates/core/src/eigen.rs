//! Symmetric eigensolvers for graph Laplacians.
//!
//! The dense path is Householder tridiagonalization followed by the implicit
//! QL iteration (the EISPACK `tred2`/`tql2` pair). It works on the transpose
//! of the usual column layout, so every rotation and every inner product
//! touches contiguous memory and eigenvectors come out as rows.
//!
//! [`extremal_eigs`] estimates `(lambda_2, lambda_n)` without a dense
//! factorization: Lanczos with full reorthogonalization on the subspace
//! orthogonal to the constant vector.

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;
use crate::rng::rng_from_seed;
use rand::Rng as _;

const QL_MAX_SWEEPS: usize = 60;

/// Full eigendecomposition of a connected graph's Laplacian.
///
/// Eigenvalues ascend; eigenvector `i` is row `i` of a row-major `n x n`
/// buffer. The null pair is exact: `lambda_1 = 0`, `v_1 = 1/sqrt(n)`. Every
/// other eigenvector has its first largest-magnitude component positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: usize,
    values: Vec<f64>,
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn compute(l: &LaplacianMatrix) -> Result<Self> {
        let n = l.dim();
        let mut a = l.to_dense();
        let mut d = vec![0.0; n];
        let mut e = vec![0.0; n];
        tridiagonalize(&mut a, n, &mut d, &mut e);
        tql2(&mut d, &mut e, |i, c, s| {
            let (lo, hi) = a.split_at_mut((i + 1) * n);
            let ri = &mut lo[i * n..];
            let rj = &mut hi[..n];
            for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
                let h = *y;
                *y = s * *x + c * h;
                *x = c * *x - s * h;
            }
        })?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&p, &q| d[p].total_cmp(&d[q]));
        let mut values = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n * n);
        for &k in &order {
            values.push(d[k]);
            vectors.extend_from_slice(&a[k * n..(k + 1) * n]);
        }

        values[0] = 0.0;
        let c = 1.0 / (n as f64).sqrt();
        vectors[..n].iter_mut().for_each(|x| *x = c);
        for row in vectors.chunks_exact_mut(n).skip(1) {
            fix_sign(row);
        }

        let spec = Self { n, values, vectors };
        spec.check(l)?;
        Ok(spec)
    }

    /// Residual and connectivity checks; see [`Spectrum::compute`].
    fn check(&self, l: &LaplacianMatrix) -> Result<()> {
        let n = self.n;
        let scale = self.lambda_max().max(1.0);
        if !(self.values[1] > 0.0) {
            return Err(Error::EigenFailure(format!(
                "lambda_2 = {:e} is not positive",
                self.values[1]
            )));
        }
        let mut lv = vec![0.0; n];
        for i in 0..n {
            let v = self.eigenvector(i);
            l.apply(v, &mut lv);
            let lam = self.values[i];
            let res = lv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - lam * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if !(res <= 1e-8 * scale) {
                return Err(Error::EigenFailure(format!(
                    "residual {res:e} for eigenpair {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    pub fn lambda_2(&self) -> f64 {
        self.values[1]
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[self.n - 1]
    }

    /// Graph Fourier coefficients `v_i^T x`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.vectors
            .chunks_exact(self.n)
            .map(|v| dot(v, x))
            .collect()
    }

    /// `sum_i c_i v_i`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (v, &c) in self.vectors.chunks_exact(self.n).zip(coeffs) {
            if c != 0.0 {
                out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
            }
        }
        out
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = k;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder reduction of the symmetric matrix in `a` to tridiagonal form.
///
/// On return `d` holds the diagonal, `e[1..]` the subdiagonal, and row `j`
/// of `a` holds column `j` of the accumulated orthogonal transform.
fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    // v(r, c) is entry (r, c) of the column-layout transform; stored transposed.
    macro_rules! v {
        ($r:expr, $c:expr) => {
            a[($c) * n + ($r)]
        };
    }
    for j in 0..n {
        d[j] = v!(n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v!(i - 1, j);
                v!(i, j) = 0.0;
                v!(j, i) = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);
            for j in 0..i {
                f = d[j];
                v!(j, i) = f;
                g = e[j] + v!(j, j) * f;
                let col = &a[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut a[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = v!(i - 1, j);
                v!(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v!(n - 1, i) = v!(i, i);
        v!(i, i) = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v!(k, i + 1) / h;
            }
            for j in 0..=i {
                let (lo, hi) = a.split_at_mut((i + 1) * n);
                let next = &hi[..=i];
                let col = &mut lo[j * n..j * n + i + 1];
                let g = dot(next, col);
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v!(k, i + 1) = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v!(n - 1, j);
        v!(n - 1, j) = 0.0;
    }
    v!(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

/// Implicit QL iteration on the symmetric tridiagonal matrix with diagonal
/// `d` and subdiagonal `e[1..]` (`e[0]` ignored).
///
/// Eigenvalues are left unsorted in `d`. Each plane rotation acting on
/// coordinates `(i, i + 1)` is reported through `rotate(i, c, s)` so callers
/// can accumulate whichever part of the eigenvector matrix they need.
pub(crate) fn tql2<F>(d: &mut [f64], e: &mut [f64], mut rotate: F) -> Result<()>
where
    F: FnMut(usize, f64, f64),
{
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > QL_MAX_SWEEPS {
                    return Err(Error::EigenFailure(format!(
                        "QL iteration did not converge for eigenvalue {l}"
                    )));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d.iter_mut().skip(l + 2) {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate(i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Options for [`extremal_eigs`].
#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative accuracy demanded of each extremal Ritz value.
    pub tol: f64,
    /// Krylov dimension cap; `None` means `n - 1`, which is exact in exact
    /// arithmetic.
    pub max_iter: Option<usize>,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: None,
            seed: 0x1a2b_3c4d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalEigs {
    pub lambda_2: f64,
    pub lambda_n: f64,
    pub iterations: usize,
}

/// `(lambda_2, lambda_n)` of a connected graph's Laplacian.
///
/// Runs Lanczos on `L` restricted to the complement of `1/sqrt(n)` with full
/// reorthogonalization. A Ritz value `t` with residual `r` and spectral gap
/// `g` to its neighbour is accepted once `min(r, r^2/g) <= tol * t`.
pub fn extremal_eigs(l: &LaplacianMatrix, opts: LanczosOptions) -> Result<ExtremalEigs> {
    let n = l.dim();
    let dim = n - 1;
    let max_iter = opts.max_iter.unwrap_or(dim).min(dim).max(1);
    let ones = 1.0 / (n as f64).sqrt();

    let mut rng = rng_from_seed(opts.seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    deflate_constant(&mut q, ones);
    normalize(&mut q);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];

    for j in 0..max_iter {
        l.apply(&q, &mut w);
        let a = dot(&q, &w);
        w.iter_mut().zip(&q).for_each(|(x, y)| *x -= a * y);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            w.iter_mut().zip(prev).for_each(|(x, y)| *x -= b * y);
        }
        basis.push(std::mem::take(&mut q));
        alpha.push(a);
        for _ in 0..2 {
            deflate_constant(&mut w, ones);
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        let k = j + 1;
        let exhausted = b <= 1e-12 * alpha.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if exhausted || k == max_iter || k % 5 == 0 || k < 5 {
            let ritz = ritz_extremes(&alpha, &beta)?;
            let res_min = b * ritz.last_min.abs();
            let res_max = b * ritz.last_max.abs();
            let ok = |t: f64, res: f64, gap: f64| {
                let bound = if gap > 0.0 { res.min(res * res / gap) } else { res };
                bound <= opts.tol * t.abs()
            };
            let converged = ok(ritz.min, res_min, ritz.gap_min) && ok(ritz.max, res_max, ritz.gap_max);
            if exhausted || converged {
                return Ok(ExtremalEigs {
                    lambda_2: ritz.min,
                    lambda_n: ritz.max,
                    iterations: k,
                });
            }
            if k == max_iter {
                break;
            }
        }
        beta.push(b);
        q = w.iter().map(|x| x / b).collect();
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iter,
    })
}

struct RitzExtremes {
    min: f64,
    max: f64,
    last_min: f64,
    last_max: f64,
    gap_min: f64,
    gap_max: f64,
}

/// Extreme eigenvalues of the Lanczos tridiagonal with the last components
/// of their eigenvectors (needed for residual estimates).
fn ritz_extremes(alpha: &[f64], beta: &[f64]) -> Result<RitzExtremes> {
    let k = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = vec![0.0; k];
    e[1..].copy_from_slice(&beta[..k - 1]);
    // Row k-1 of the eigenvector matrix, starting from the identity.
    let mut last = vec![0.0; k];
    last[k - 1] = 1.0;
    tql2(&mut d, &mut e, |i, c, s| {
        let h = last[i + 1];
        last[i + 1] = s * last[i] + c * h;
        last[i] = c * last[i] - s * h;
    })?;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&p, &q| d[p].total_cmp(&d[q]));
    let lo = order[0];
    let hi = order[k - 1];
    let (gap_min, gap_max) = if k > 1 {
        (d[order[1]] - d[lo], d[hi] - d[order[k - 2]])
    } else {
        (0.0, 0.0)
    };
    Ok(RitzExtremes {
        min: d[lo],
        max: d[hi],
        last_min: last[lo],
        last_max: last[hi],
        gap_min,
        gap_max,
    })
}

fn deflate_constant(x: &mut [f64], ones: f64) {
    let c: f64 = x.iter().sum::<f64>() * ones;
    x.iter_mut().for_each(|v| *v -= c * ones);
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn normalize(x: &mut [f64]) {
    let s = norm(x);
    x.iter_mut().for_each(|v| *v /= s);
}
