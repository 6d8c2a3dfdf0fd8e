//! The tensor `R`, its kernels, the invariant `ν`, 2-nondegeneracy and the
//! nondegeneracy ranks `r_k`.
//!
//! `R(X, V)` is the antiholomorphic derivative of the canonical section with
//! value `V` along a holomorphic curve with velocity `X`, projected onto the
//! orthogonal complement of the leaf. Kernels are measured on the slice
//! directions; the full kernel adds the `K` leaf directions.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::crframe::{frame_at, hessian_on_frame};
use crate::domains::{BoundaryPoint, Provenance};
use crate::error::{Error, Result};
use crate::foliation::{canonical_section, decompose_slice_tangent, leaf_frame, slice_curve, LeafFrame, SliceParams};
use crate::numerics::{
    conj_vec, dbar_derivative_with_step, dot_h, dot_u, hermitian_eigen, norm, project_out, rank_from_singular_values,
    rank_with_tol, svd, ComplexMatrix, TolerancePolicy,
};
use crate::rng::SeededRng;

/// Step for the antiholomorphic derivatives defining `R`. The section is a
/// low-degree polynomial along the curves, so a large step loses nothing to
/// truncation and keeps roundoff well below `stability_check_tol`.
pub const R_STEP: f64 = 1e-3;

/// Step for the second derivatives in `r_2`.
pub const R2_STEP: f64 = 1e-3;

/// A value of `R` in flattened coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorRValue {
    pub value: Vec<C64>,
    /// Whether `value` has been projected off the leaf.
    pub projected: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuMethod {
    ClosedForm,
    Search,
}

impl NuMethod {
    pub fn name(self) -> &'static str {
        match self {
            NuMethod::ClosedForm => "closed_form",
            NuMethod::Search => "search",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NuReport {
    pub base: BoundaryPoint,
    pub nu: usize,
    /// Unit leaf vector attaining `nu` (flattened coordinates).
    pub maximizer: Vec<C64>,
    /// Slice-kernel dimension at the maximizer (equals `nu`).
    pub kernel_dim_at_max: usize,
    pub method: NuMethod,
    pub samples_used: usize,
    pub stable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NuConfig {
    pub samples: usize,
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for NuConfig {
    fn default() -> Self {
        Self { samples: 200, refine_iters: 100, seed: 0 }
    }
}

/// The leaf frame, refusing models without leaves (where `ν` is undefined).
fn leaves(point: &BoundaryPoint) -> Result<LeafFrame> {
    if point.model().leaf_dim() == 0 {
        return Err(Error::BadDimensions);
    }
    leaf_frame(point)
}

fn check_tangent(point: &BoundaryPoint, x: &[C64], policy: &TolerancePolicy) -> Result<()> {
    if x.len() != point.model().ambient_dim() {
        return Err(Error::ShapeMismatch);
    }
    let g = point.gradient()?;
    if dot_u(&g, x).norm() > policy.abs_residual_tol * norm(&g) * norm(x).max(1.0) {
        return Err(Error::NotTangent);
    }
    Ok(())
}

fn in_slice(frame: &LeafFrame, x: &[C64]) -> bool {
    norm(&project_out(x, &frame.slice_basis)) <= 1e-8 * norm(x).max(1.0)
}

/// `R(X, V0)` by numerical differentiation. Slice tangents use the slice
/// curve; other complex tangents use the straight line `p + tX`.
pub fn tensor_r_numeric(point: &BoundaryPoint, x: &[C64], v0: &[C64]) -> Result<TensorRValue> {
    let policy = TolerancePolicy::default();
    check_tangent(point, x, &policy)?;
    let frame = leaves(point)?;
    numeric_with_frame(point, &frame, x, v0)
}

fn numeric_with_frame(point: &BoundaryPoint, frame: &LeafFrame, x: &[C64], v0: &[C64]) -> Result<TensorRValue> {
    let psi = canonical_section(point, v0)?;
    let value = if in_slice(frame, x) {
        let gamma = slice_curve(point, x)?;
        let f = move |t: C64| Ok(ComplexMatrix::column_vector(&psi(&gamma(t)?)?));
        dbar_derivative_with_step(f, C64::new(0.0, 0.0), R_STEP)?
    } else {
        let p = point.coords();
        let x = x.to_vec();
        let f = move |t: C64| {
            let q: Vec<C64> = p.iter().zip(&x).map(|(a, b)| a + b * t).collect();
            Ok(ComplexMatrix::column_vector(&psi(&q)?))
        };
        dbar_derivative_with_step(f, C64::new(0.0, 0.0), R_STEP)?
    };
    Ok(TensorRValue { value: project_out(value.as_slice(), &frame.leaf_basis), projected: true })
}

/// `R(X, V0)` from the closed forms at a leaf base point:
/// `−aα*B₀ − B₀βb*` (I), `−aα*B₀ − bβ*B₀ − B₀ᾱaᵀ − B₀β̄bᵀ` (II),
/// `−aα*B₀ − B₀ᾱaᵀ` (III), `c·v̄` (IV, `V0 = c·w̄`), `c·v̄/2` (tube, `V0 = c·Re q`).
pub fn tensor_r_closed(point: &BoundaryPoint, x: &[C64], v0: &[C64]) -> Result<TensorRValue> {
    if !point.is_canonical() {
        return Err(Error::NotCanonicalPoint);
    }
    let model = point.model();
    let frame = leaves(point)?;
    if norm(&project_out(v0, &frame.leaf_basis)) > 1e-8 * norm(v0).max(1.0) {
        return Err(Error::NotLeafVector);
    }
    let params = decompose_slice_tangent(point, x)?;
    let base = model.base();
    let b0 = base.matrix_of(v0)?;
    let neg = C64::new(-1.0, 0.0);
    let conj = |v: &[C64]| conj_vec(v);
    let m = match (point.provenance(), params) {
        (Provenance::RankOne { u, v, .. }, SliceParams::Pair { alpha, beta }) => {
            let t1 = ComplexMatrix::outer_h(u, &alpha).mul(&b0);
            let t2 = b0.mul(&ComplexMatrix::outer_h(&beta, v));
            t1.add(&t2).scale(neg)
        }
        (Provenance::Skew { u, v, .. }, SliceParams::Pair { alpha, beta }) => {
            let t1 = ComplexMatrix::outer_h(u, &alpha).mul(&b0);
            let t2 = ComplexMatrix::outer_h(v, &beta).mul(&b0);
            let t3 = b0.mul(&ComplexMatrix::outer_t(&conj(&alpha), u));
            let t4 = b0.mul(&ComplexMatrix::outer_t(&conj(&beta), v));
            t1.add(&t2).add(&t3).add(&t4).scale(neg)
        }
        (Provenance::Symmetric { w, .. }, SliceParams::Single { alpha }) => {
            let t1 = ComplexMatrix::outer_h(w, &alpha).mul(&b0);
            let t2 = b0.mul(&ComplexMatrix::outer_t(&conj(&alpha), w));
            t1.add(&t2).scale(neg)
        }
        (Provenance::Quadric { w, .. }, SliceParams::Vector { v }) => {
            let d = conj(w);
            let c = dot_h(&d, b0.as_slice()) / dot_h(&d, &d);
            ComplexMatrix::column_vector(&conj(&v)).scale(c)
        }
        (Provenance::Cone { .. }, SliceParams::Vector { v }) => {
            let re: Vec<C64> = point.ambient().as_slice().iter().map(|z| C64::new(z.re, 0.0)).collect();
            let c = dot_h(&re, b0.as_slice()) / dot_h(&re, &re);
            ComplexMatrix::column_vector(&conj(&v)).scale(c * 0.5)
        }
        _ => return Err(Error::NotSliceVector),
    };
    let mut value = base.coords_of(&m)?;
    if model.has_flat_line() {
        value.push(C64::new(0.0, 0.0));
    }
    Ok(TensorRValue { value: project_out(&value, &frame.leaf_basis), projected: true })
}

/// `R` on all pairs (slice basis vector, leaf basis vector):
/// `entries[k]` is the `N′ × n₊` matrix of `R(·, L_k)`.
#[derive(Clone, Debug)]
pub struct RTensor {
    pub frame: LeafFrame,
    pub entries: Vec<ComplexMatrix>,
}

impl RTensor {
    /// The matrix of `R(·, V)` over the slice basis for leaf coefficients `c`.
    pub fn matrix(&self, c: &[C64]) -> ComplexMatrix {
        let (rows, cols) = self.entries[0].shape();
        let mut a = ComplexMatrix::zeros(rows, cols);
        for (k, e) in self.entries.iter().enumerate() {
            a.axpy(c[k], e);
        }
        a
    }

    pub fn leaf_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn slice_dim(&self) -> usize {
        self.frame.slice_basis.cols()
    }
}

/// Numeric `R` tensor over the leaf frame.
pub fn r_tensor_numeric(point: &BoundaryPoint) -> Result<RTensor> {
    let frame = leaves(point)?;
    let n = point.model().ambient_dim();
    let mut entries = Vec::with_capacity(frame.leaf_basis.cols());
    for k in 0..frame.leaf_basis.cols() {
        let v = frame.leaf_basis.column(k);
        let cols: Vec<Vec<C64>> = (0..frame.slice_basis.cols())
            .map(|i| numeric_with_frame(point, &frame, &frame.slice_basis.column(i), &v).map(|r| r.value))
            .collect::<Result<_>>()?;
        entries.push(ComplexMatrix::from_columns(n, &cols));
    }
    Ok(RTensor { frame, entries })
}

/// Closed-form `R` tensor at a leaf base point.
pub fn r_tensor_closed(point: &BoundaryPoint) -> Result<RTensor> {
    let frame = leaves(point)?;
    let n = point.model().ambient_dim();
    let mut entries = Vec::with_capacity(frame.leaf_basis.cols());
    for k in 0..frame.leaf_basis.cols() {
        let v = frame.leaf_basis.column(k);
        let cols: Vec<Vec<C64>> = (0..frame.slice_basis.cols())
            .map(|i| tensor_r_closed(point, &frame.slice_basis.column(i), &v).map(|r| r.value))
            .collect::<Result<_>>()?;
        entries.push(ComplexMatrix::from_columns(n, &cols));
    }
    Ok(RTensor { frame, entries })
}

fn leaf_coefficients(frame: &LeafFrame, v: &[C64]) -> Result<Vec<C64>> {
    if v.len() != frame.leaf_basis.rows() {
        return Err(Error::ShapeMismatch);
    }
    if norm(&project_out(v, &frame.leaf_basis)) > 1e-8 * norm(v).max(1.0) {
        return Err(Error::NotLeafVector);
    }
    Ok((0..frame.leaf_basis.cols()).map(|k| dot_h(&frame.leaf_basis.column(k), v)).collect())
}

/// Slice-kernel dimension of `R(·, V)` from a precomputed tensor.
pub fn kernel_dim_in(tensor: &RTensor, v: &[C64], policy: &TolerancePolicy) -> Result<(usize, bool)> {
    let c = leaf_coefficients(&tensor.frame, v)?;
    if tensor.slice_dim() == 0 {
        return Ok((0, true));
    }
    let (rank, stable) = rank_with_tol(&tensor.matrix(&c), policy)?;
    Ok((tensor.slice_dim() - rank, stable))
}

/// Slice-kernel dimension of `R(·, V)` for a unit leaf vector `V` (numeric `R`).
pub fn kernel_dim_r(point: &BoundaryPoint, v: &[C64]) -> Result<(usize, bool)> {
    let policy = TolerancePolicy::default();
    let tensor = r_tensor_numeric(point)?;
    let (k, stable) = kernel_dim_in(&tensor, v, &policy)?;
    if !stable {
        return Err(Error::UnstableRank);
    }
    Ok((k, stable))
}

/// The leaf vector attaining the closed-form `ν` at a leaf base point.
pub fn closed_form_maximizer(point: &BoundaryPoint) -> Result<Vec<C64>> {
    if !point.is_canonical() {
        return Err(Error::NotCanonicalPoint);
    }
    let model = point.model();
    let frame = leaves(point)?;
    let n = model.ambient_dim();
    if model.has_flat_line() {
        let mut e = alloc::vec![C64::new(0.0, 0.0); n];
        e[n - 1] = C64::new(1.0, 0.0);
        return Ok(e);
    }
    // The first leaf basis vector is u₂v₂* (I), a rank-two skew matrix (II),
    // w₂w₂ᵀ (III), or the whole leaf line (IV, tube).
    Ok(frame.leaf_basis.column(0))
}

fn search_kernel(
    tensor: &RTensor,
    config: &NuConfig,
    policy: &TolerancePolicy,
) -> Result<(usize, Vec<C64>, bool, usize)> {
    let kdim = tensor.leaf_dim();
    let sdim = tensor.slice_dim();
    let mut rng = SeededRng::new(config.seed);
    let mut starts: Vec<(f64, Vec<C64>)> = Vec::with_capacity(config.samples);
    let mut best: Option<(usize, Vec<C64>)> = None;
    let mut all_stable = true;
    for _ in 0..config.samples.max(1) {
        let c = rng.unit_vector(kdim);
        let s = svd(&tensor.matrix(&c))?;
        let (rank, stable) = rank_from_singular_values(&s.singular_values, policy);
        let kd = sdim - rank.min(sdim);
        if !stable && best.as_ref().is_none_or(|b| kd > b.0) {
            all_stable = false;
        }
        if stable && best.as_ref().is_none_or(|b| kd > b.0) {
            best = Some((kd, c.clone()));
        }
        starts.push((s.singular_values.last().copied().unwrap_or(0.0), c));
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut nu, mut arg) = best.unwrap_or((0, alloc::vec![C64::new(0.0, 0.0); kdim]));
    if arg.iter().all(|x| x.norm() == 0.0) {
        arg[0] = C64::new(1.0, 0.0);
    }
    let n_starts = starts.len().min(8);
    let mut target = nu + 1;
    while target <= sdim {
        let mut found: Option<Vec<C64>> = None;
        for (_, c0) in starts.iter().take(n_starts) {
            let c = descend(tensor, c0, target, config.refine_iters)?;
            let s = svd(&tensor.matrix(&c))?;
            let (rank, stable) = rank_from_singular_values(&s.singular_values, policy);
            let kd = sdim - rank.min(sdim);
            if kd >= target {
                if stable {
                    found = Some(c);
                    break;
                }
                all_stable = false;
            }
        }
        match found {
            Some(c) => {
                let s = svd(&tensor.matrix(&c))?;
                let (rank, _) = rank_from_singular_values(&s.singular_values, policy);
                nu = sdim - rank.min(sdim);
                arg = c;
                target = nu + 1;
            }
            None => break,
        }
    }
    Ok((nu, arg, all_stable, config.samples.max(1)))
}

/// Alternating minimization of `‖A(c)X‖_F` over unit `c` and orthonormal
/// `X` with `target` columns, where `A(c)` is the `R` matrix.
fn descend(tensor: &RTensor, c0: &[C64], target: usize, iters: usize) -> Result<Vec<C64>> {
    let kdim = tensor.leaf_dim();
    let sdim = tensor.slice_dim();
    let policy = TolerancePolicy::default();
    let mut c = c0.to_vec();
    let mut prev = f64::INFINITY;
    for _ in 0..iters {
        let s = svd(&tensor.matrix(&c))?;
        let xs: Vec<Vec<C64>> = (sdim - target..sdim).map(|j| s.v.column(j)).collect();
        let obj: f64 = s.singular_values[sdim - target..].iter().map(|x| x * x).sum();
        if obj > prev * (1.0 - 1e-12) || obj < 1e-30 {
            break;
        }
        prev = obj;
        let cols: Vec<Vec<Vec<C64>>> =
            xs.iter().map(|x| tensor.entries.iter().map(|e| e.mul_vec(x)).collect()).collect();
        let g = ComplexMatrix::from_fn(kdim, kdim, |a, b| cols.iter().map(|cj| dot_h(&cj[a], &cj[b])).sum());
        let eig = hermitian_eigen(&g, &policy)?;
        c = eig.vectors.column(kdim - 1);
    }
    Ok(c)
}

/// `ν` at `point`: the closed form at leaf base points, otherwise a search
/// that returns a certified lower bound.
pub fn nu_estimate(point: &BoundaryPoint, config: &NuConfig) -> Result<NuReport> {
    if point.is_canonical() {
        if let Ok(r) = nu_closed_form(point) {
            return Ok(r);
        }
    }
    nu_search(point, config)
}

/// The closed-form value, certified by computing the kernel at the canonical
/// maximizer with the closed-form tensor.
pub fn nu_closed_form(point: &BoundaryPoint) -> Result<NuReport> {
    let policy = TolerancePolicy::default();
    let v = closed_form_maximizer(point)?;
    let tensor = r_tensor_closed(point)?;
    let (k, stable) = kernel_dim_in(&tensor, &v, &policy)?;
    if !stable {
        return Err(Error::UnstableRank);
    }
    if k != point.model().expected_nu() {
        return Err(Error::UnstableRank);
    }
    Ok(NuReport {
        base: point.clone(),
        nu: k,
        maximizer: v,
        kernel_dim_at_max: k,
        method: NuMethod::ClosedForm,
        samples_used: 0,
        stable,
    })
}

/// Search over leaf vectors with the numeric tensor.
pub fn nu_search(point: &BoundaryPoint, config: &NuConfig) -> Result<NuReport> {
    let policy = TolerancePolicy::default();
    let tensor = r_tensor_numeric(point)?;
    nu_search_in(point, &tensor, config, &policy)
}

pub fn nu_search_in(
    point: &BoundaryPoint,
    tensor: &RTensor,
    config: &NuConfig,
    policy: &TolerancePolicy,
) -> Result<NuReport> {
    if tensor.slice_dim() == 0 {
        let v = tensor.frame.leaf_basis.column(0);
        return Ok(NuReport {
            base: point.clone(),
            nu: 0,
            maximizer: v,
            kernel_dim_at_max: 0,
            method: NuMethod::Search,
            samples_used: 0,
            stable: true,
        });
    }
    let (nu, c, stable, used) = search_kernel(tensor, config, policy)?;
    if !stable {
        return Err(Error::UnstableRank);
    }
    let mut v = tensor.frame.leaf_basis.mul_vec(&c);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    Ok(NuReport {
        base: point.clone(),
        nu,
        maximizer: v,
        kernel_dim_at_max: nu,
        method: NuMethod::Search,
        samples_used: used,
        stable,
    })
}

/// `ν < N′ − K − 1`.
pub fn is_two_nondegenerate(point: &BoundaryPoint) -> Result<bool> {
    let r = nu_estimate(point, &NuConfig::default())?;
    Ok(r.nu < point.model().expected_positive())
}

/// `r_k` for `k ∈ {0, 1, 2}`: the dimension of the span of `ρ_w` and its
/// derivatives along up to `k` antiholomorphic frame fields.
pub fn nondegeneracy_rank(point: &BoundaryPoint, k: usize) -> Result<(usize, bool)> {
    let policy = TolerancePolicy::default();
    let model = *point.model();
    let n = model.ambient_dim();
    let p = point.coords();
    let g = point.gradient()?;
    let mut cols: Vec<Vec<C64>> = alloc::vec![g];
    if k >= 1 {
        let (frame, drop) = frame_at(&model, &p, &ComplexMatrix::identity(n), None, &policy)?;
        let hv = hessian_on_frame(&model, &p, drop, &policy)?;
        cols.extend(hv.columns());
        if k >= 2 {
            for j in 0..frame.cols() {
                let vj = frame.column(j);
                let p = p.clone();
                let f = move |t: C64| {
                    let q: Vec<C64> = p.iter().zip(&vj).map(|(a, b)| a + b * t).collect();
                    hessian_on_frame(&model, &q, drop, &policy)
                };
                let d = dbar_derivative_with_step(f, C64::new(0.0, 0.0), R2_STEP)?;
                cols.extend(d.columns());
            }
        }
    }
    if k > 2 {
        return Err(Error::BadDimensions);
    }
    let a = ComplexMatrix::from_columns(n, &cols);
    rank_with_tol(&a, &policy)
}
