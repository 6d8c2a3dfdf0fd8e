use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;

use super::matrix::{orthonormalize, ComplexMatrix};
use crate::error::{Error, Result};

/// Tolerances shared by every rank, signature and finite-difference decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy {
    pub rel_rank_tol: f64,
    pub abs_residual_tol: f64,
    pub fd_step: f64,
    pub stability_check_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self { rel_rank_tol: 1e-10, abs_residual_tol: 1e-8, fd_step: 1e-4, stability_check_tol: 1e-12 }
    }
}

impl TolerancePolicy {
    pub fn new(rel_rank_tol: f64, abs_residual_tol: f64, fd_step: f64, stability_check_tol: f64) -> Result<Self> {
        let p = Self { rel_rank_tol, abs_residual_tol, fd_step, stability_check_tol };
        let all_pos =
            [rel_rank_tol, abs_residual_tol, fd_step, stability_check_tol].iter().all(|x| x.is_finite() && *x > 0.0);
        if !all_pos || rel_rank_tol <= stability_check_tol {
            return Err(Error::InvalidPolicy);
        }
        Ok(p)
    }
}

/// Thin singular value decomposition `A = U diag(σ) V*` with `k = min(rows, cols)` columns.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

const JACOBI_TOL: f64 = 1e-15;
const MAX_SWEEPS: usize = 80;

/// Unitary 2x2 rotation that diagonalizes the Hermitian block `[[a, g], [conj g, b]]`.
/// Returns `(c, s, e)` where the rotation is `[[c, s], [-s e, c e]]` with `e = exp(-i arg g)`.
fn jacobi_rotation(a: f64, b: f64, g: C64) -> (f64, f64, C64) {
    let ag = g.norm();
    let e = (g / ag).conj();
    let e = e / e.norm();
    let tau = (b - a) / (2.0 * ag);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, e)
}

/// One-sided Jacobi on the columns of `a`. Returns the rotated columns (as a matrix
/// with orthogonal columns) and the full unitary `V` (cols x cols).
fn one_sided_jacobi(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    // Columns below this squared norm are numerically zero; rotating them only
    // amplifies rounding in the phase factor.
    let negligible = (1e-18 * a.frobenius_norm()).powi(2);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..m {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if alpha <= negligible || beta <= negligible || gamma.norm() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                for i in 0..m {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    w[(i, p)] = x * c - y * (e * s);
                    w[(i, q)] = x * s + y * (e * c);
                }
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = x * c - y * (e * s);
                    v[(i, q)] = x * s + y * (e * c);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

/// Column norms of the Jacobi-rotated matrix sorted descending, with the matching
/// permutation; ties keep index order.
fn sorted_norms(w: &ComplexMatrix) -> (Vec<f64>, Vec<usize>) {
    let norms: Vec<f64> = (0..w.cols()).map(|j| super::matrix::norm(&w.column(j))).collect();
    let mut idx: Vec<usize> = (0..w.cols()).collect();
    idx.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));
    (idx.iter().map(|&i| norms[i]).collect(), idx)
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (m, n) = a.shape();
    let k = m.min(n);
    if m < n {
        // Work on the adjoint so the column count is the smaller dimension.
        let t = svd(&a.adjoint())?;
        return Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u });
    }
    let (w, v) = one_sided_jacobi(a);
    let (sigma, idx) = sorted_norms(&w);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut need_completion = false;
    for (j, &i) in idx.iter().take(k).enumerate() {
        let s = sigma[j];
        if s > 0.0 && s > smax * 1e-300 {
            ucols.push(w.column(i).iter().map(|z| z / s).collect());
        } else {
            need_completion = true;
            ucols.push(alloc::vec![C64::new(0.0, 0.0); m]);
        }
    }
    if need_completion {
        let good: Vec<Vec<C64>> = ucols.iter().zip(&sigma).filter(|(_, &s)| s > 0.0).map(|(c, _)| c.clone()).collect();
        let mut cand = good.clone();
        for i in 0..m {
            let mut e = alloc::vec![C64::new(0.0, 0.0); m];
            e[i] = C64::new(1.0, 0.0);
            cand.push(e);
        }
        let basis = orthonormalize(&cand, 1e-8);
        let mut extra = basis.into_iter().skip(good.len());
        for (c, &s) in ucols.iter_mut().zip(&sigma) {
            if s <= 0.0 {
                if let Some(b) = extra.next() {
                    *c = b;
                }
            }
        }
    }
    let u = ComplexMatrix::from_columns(m, &ucols);
    let vcols: Vec<Vec<C64>> = idx.iter().take(k).map(|&i| v.column(i)).collect();
    Ok(Svd { u, singular_values: sigma[..k].to_vec(), v: ComplexMatrix::from_columns(n, &vcols) })
}

/// Singular values only, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.singular_values)
}

fn count_above(sigma: &[f64], tol: f64) -> usize {
    let smax = sigma.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > tol * smax).count()
}

/// Numerical rank `#{σᵢ > rel_rank_tol·σ₁}` and whether the stability tolerance agrees.
pub fn rank_with_tol(a: &ComplexMatrix, policy: &TolerancePolicy) -> Result<(usize, bool)> {
    let sigma = singular_values(a)?;
    Ok(rank_from_singular_values(&sigma, policy))
}

pub fn rank_from_singular_values(sigma: &[f64], policy: &TolerancePolicy) -> (usize, bool) {
    let r = count_above(sigma, policy.rel_rank_tol);
    let r2 = count_above(sigma, policy.stability_check_tol);
    (r, r == r2)
}

/// Orthonormal basis of the numerical null space, as columns.
pub fn kernel_basis(a: &ComplexMatrix, policy: &TolerancePolicy) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.cols();
    let (w, v) = one_sided_jacobi(a);
    let (sigma, idx) = sorted_norms(&w);
    let r = count_above(&sigma, policy.rel_rank_tol);
    let cols: Vec<Vec<C64>> = idx[r..].iter().map(|&i| v.column(i)).collect();
    Ok(ComplexMatrix::from_columns(n, &cols))
}

/// Eigen-decomposition of a Hermitian matrix: eigenvalues descending and the
/// unitary matrix of eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_residual(h: &ComplexMatrix) -> f64 {
    h.sub(&h.adjoint()).frobenius_norm()
}

/// Cyclic Jacobi eigensolver. The input is symmetrized first.
pub fn hermitian_eigen(h: &ComplexMatrix, policy: &TolerancePolicy) -> Result<HermitianEigen> {
    if h.rows() != h.cols() {
        return Err(Error::ShapeMismatch);
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = h.frobenius_norm();
    if hermitian_residual(h) > policy.abs_residual_tol * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian);
    }
    let n = h.rows();
    let mut a = h.add(&h.adjoint()).scale(C64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);
    let frob = a.frobenius_norm();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-17 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                if g.norm() <= 1e-18 * frob || g.norm() == 0.0 {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, g);
                let ec = e.conj();
                for k in 0..n {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    a[(k, p)] = x * c - y * (e * s);
                    a[(k, q)] = x * s + y * (e * c);
                }
                for k in 0..n {
                    let x = a[(p, k)];
                    let y = a[(q, k)];
                    a[(p, k)] = x * c - y * (ec * s);
                    a[(q, k)] = x * s + y * (ec * c);
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * c - y * (e * s);
                    v[(k, q)] = x * s + y * (e * c);
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(core::cmp::Ordering::Equal));
    let values = idx.iter().map(|&i| a[(i, i)].re).collect();
    let cols: Vec<Vec<C64>> = idx.iter().map(|&i| v.column(i)).collect();
    Ok(HermitianEigen { values, vectors: ComplexMatrix::from_columns(n, &cols) })
}

/// Inertia `(n_pos, n_zero, n_neg)` of a Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub pos: usize,
    pub zero: usize,
    pub neg: usize,
}

fn count_signature(values: &[f64], tol: f64, scale: f64) -> Signature {
    let band = tol * values.iter().fold(scale, |m, x| m.max(x.abs()));
    let pos = values.iter().filter(|&&x| x > band).count();
    let neg = values.iter().filter(|&&x| x < -band).count();
    Signature { pos, zero: values.len() - pos - neg, neg }
}

/// Signature with zero band `rel_rank_tol·max|λ|`, plus whether the band
/// `stability_check_tol·max|λ|` gives the same counts.
pub fn signature_from_eigenvalues(values: &[f64], policy: &TolerancePolicy) -> (Signature, bool) {
    signature_with_scale(values, 0.0, policy)
}

/// As [`signature_from_eigenvalues`] with the band measured against
/// `max(scale, max|λ|)`, so that a numerically zero matrix has zero signature.
pub fn signature_with_scale(values: &[f64], scale: f64, policy: &TolerancePolicy) -> (Signature, bool) {
    let s = count_signature(values, policy.rel_rank_tol, scale);
    let s2 = count_signature(values, policy.stability_check_tol, scale);
    (s, s == s2)
}

pub fn hermitian_signature(h: &ComplexMatrix, policy: &TolerancePolicy) -> Result<Signature> {
    Ok(hermitian_signature_checked(h, policy)?.0)
}

pub fn hermitian_signature_checked(h: &ComplexMatrix, policy: &TolerancePolicy) -> Result<(Signature, bool)> {
    let eig = hermitian_eigen(h, policy)?;
    Ok(signature_from_eigenvalues(&eig.values, policy))
}

/// Largest principal angle (radians) between the column spans of two matrices
/// with orthonormal columns. Spans of different dimension give `π/2`.
pub fn max_principal_angle(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.cols() != b.cols() {
        return Ok(core::f64::consts::FRAC_PI_2);
    }
    if a.cols() == 0 {
        return Ok(0.0);
    }
    let c = a.adjoint().mul(b);
    let s = singular_values(&c)?;
    let smin = s.iter().fold(f64::INFINITY, |m, &x| m.min(x)).min(1.0);
    // sin of the largest angle from the projector residual is better conditioned
    // than acos for tiny angles.
    let proj = a.mul(&c);
    let resid = b.sub(&proj);
    let sres = singular_values(&resid)?;
    let sin_max = sres.first().copied().unwrap_or(0.0).min(1.0);
    Ok(if smin > 0.7 { sin_max.asin() } else { smin.acos() })
}
