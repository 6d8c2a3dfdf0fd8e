//! Levi leaves of the models: leaf and slice frames, points along a leaf,
//! the canonical section `B(Z)` extending a leaf vector, and holomorphic
//! curves in the strongly pseudoconvex slice.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::crframe::frame_at;
use crate::domains::{BoundaryPoint, DomainModel, Provenance};
use crate::error::{Error, Result};
use crate::numerics::{dot_h, norm, orthonormalize, project_out, solve, unit_vec, ComplexMatrix, TolerancePolicy};

/// A leaf-direction vector must lie in the leaf span to this relative tolerance.
const SPAN_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct LeafFrame {
    pub base: BoundaryPoint,
    /// `N′ × K`, orthonormal, spans `T_pη`.
    pub leaf_basis: ComplexMatrix,
    /// `N′ × n₊`, orthonormal, spans the slice directions.
    pub slice_basis: ComplexMatrix,
}

/// An evaluable map `ℂ^{N′} → ℂ^{N′}` or `ℂ → ℂ^{N′}`.
pub type CoordMap = Box<dyn Fn(&[C64]) -> Result<Vec<C64>>>;
pub type Curve = Box<dyn Fn(C64) -> Result<Vec<C64>>>;

fn complement(vs: &[Vec<C64>], n: usize) -> Vec<Vec<C64>> {
    let mut all: Vec<Vec<C64>> = vs.to_vec();
    all.extend((0..n).map(|i| unit_vec(n, i)));
    orthonormalize(&all, 1e-8)[vs.len()..].to_vec()
}

fn pad(model: &DomainModel, v: Vec<C64>) -> Vec<C64> {
    let mut v = v;
    if model.has_flat_line() {
        v.push(C64::new(0.0, 0.0));
    }
    v
}

fn coords(model: &DomainModel, z: &ComplexMatrix) -> Vec<C64> {
    pad(model, model.base().coords_of(z).expect("shape fixed by construction"))
}

/// Orthonormal leaf basis from the provenance (the leaf is affine, so this is
/// the same at every point of the leaf).
fn leaf_vectors(point: &BoundaryPoint) -> Vec<Vec<C64>> {
    let model = point.model();
    let n = model.ambient_dim();
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<Vec<C64>> = match point.provenance() {
        Provenance::RankOne { u, v, .. } => {
            let up = complement(core::slice::from_ref(u), u.len());
            let vp = complement(core::slice::from_ref(v), v.len());
            let mut out = Vec::new();
            for a in &up {
                for b in &vp {
                    out.push(coords(model, &ComplexMatrix::outer_h(a, b)));
                }
            }
            out
        }
        Provenance::Skew { u, v, .. } => {
            let wp = complement(&[u.clone(), v.clone()], u.len());
            let mut out = Vec::new();
            for i in 0..wp.len() {
                for j in i + 1..wp.len() {
                    let x = ComplexMatrix::outer_t(&wp[i], &wp[j]).sub(&ComplexMatrix::outer_t(&wp[j], &wp[i]));
                    out.push(coords(model, &x.scale(C64::new(s, 0.0))));
                }
            }
            out
        }
        Provenance::Symmetric { w, .. } => {
            let wp = complement(core::slice::from_ref(w), w.len());
            let mut out = Vec::new();
            for i in 0..wp.len() {
                for j in i..wp.len() {
                    let x = if i == j {
                        ComplexMatrix::outer_t(&wp[i], &wp[i])
                    } else {
                        ComplexMatrix::outer_t(&wp[i], &wp[j])
                            .add(&ComplexMatrix::outer_t(&wp[j], &wp[i]))
                            .scale(C64::new(s, 0.0))
                    };
                    out.push(coords(model, &x));
                }
            }
            out
        }
        Provenance::Quadric { w, .. } => {
            let d: Vec<C64> = w.iter().map(|x| x.conj()).collect();
            let nd = norm(&d);
            vec![pad(model, d.iter().map(|x| x / nd).collect())]
        }
        Provenance::Cone { .. } => {
            let re: Vec<C64> = point.ambient().as_slice().iter().map(|x| C64::new(x.re, 0.0)).collect();
            let nr = norm(&re);
            vec![pad(model, re.iter().map(|x| x / nr).collect())]
        }
    };
    if model.has_flat_line() {
        out.push(unit_vec(n, n - 1));
    }
    out
}

/// The slice directions at a leaf base point, in the order
/// `αb*` then `aβ*` (I), `αbᵀ − bαᵀ` then `aβᵀ − βaᵀ` (II), `αaᵀ + aαᵀ` (III),
/// with `α`, `β` running over the fixed complement bases.
fn canonical_slice_vectors(point: &BoundaryPoint) -> Option<Vec<Vec<C64>>> {
    let model = point.model();
    let s = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    match point.provenance() {
        Provenance::RankOne { u, v, .. } => {
            let mut out = Vec::new();
            for a in complement(core::slice::from_ref(u), u.len()) {
                out.push(coords(model, &ComplexMatrix::outer_h(&a, v)));
            }
            for b in complement(core::slice::from_ref(v), v.len()) {
                out.push(coords(model, &ComplexMatrix::outer_h(u, &b)));
            }
            Some(out)
        }
        Provenance::Skew { u, v, .. } => {
            let wp = complement(&[u.clone(), v.clone()], u.len());
            let mut out = Vec::new();
            for a in &wp {
                let x = ComplexMatrix::outer_t(a, v).sub(&ComplexMatrix::outer_t(v, a));
                out.push(coords(model, &x.scale(s)));
            }
            for b in &wp {
                let x = ComplexMatrix::outer_t(u, b).sub(&ComplexMatrix::outer_t(b, u));
                out.push(coords(model, &x.scale(s)));
            }
            Some(out)
        }
        Provenance::Symmetric { w, .. } => {
            let mut out = Vec::new();
            for a in complement(core::slice::from_ref(w), w.len()) {
                let x = ComplexMatrix::outer_t(&a, w).add(&ComplexMatrix::outer_t(w, &a));
                out.push(coords(model, &x.scale(s)));
            }
            Some(out)
        }
        _ => None,
    }
}

pub fn leaf_frame(point: &BoundaryPoint) -> Result<LeafFrame> {
    leaf_frame_with(point, &TolerancePolicy::default())
}

pub fn leaf_frame_with(point: &BoundaryPoint, policy: &TolerancePolicy) -> Result<LeafFrame> {
    let model = point.model();
    let n = model.ambient_dim();
    let leaf = leaf_vectors(point);
    if leaf.len() != model.leaf_dim() {
        return Err(Error::DegenerateSvd);
    }
    let leaf_basis = ComplexMatrix::from_columns(n, &leaf);
    let slice = match canonical_slice_vectors(point) {
        Some(s) if point.is_canonical() => s,
        _ => {
            let (frame, _) = frame_at(model, &point.coords(), &ComplexMatrix::identity(n), None, policy)?;
            let mut all = leaf.clone();
            all.extend(frame.columns());
            orthonormalize(&all, 1e-6).split_off(leaf.len())
        }
    };
    if slice.len() != model.expected_positive() {
        return Err(Error::DegenerateSvd);
    }
    Ok(LeafFrame { base: point.clone(), leaf_basis, slice_basis: ComplexMatrix::from_columns(n, &slice) })
}

/// Coefficients of `x` in the orthonormal columns of `basis`, or `err` when
/// `x` is not in their span.
fn in_span(x: &[C64], basis: &ComplexMatrix, err: Error) -> Result<Vec<C64>> {
    if x.len() != basis.rows() {
        return Err(Error::ShapeMismatch);
    }
    let r = norm(&project_out(x, basis));
    if r > SPAN_TOL * norm(x).max(1.0) {
        return Err(err);
    }
    Ok((0..basis.cols()).map(|j| dot_h(&basis.column(j), x)).collect())
}

/// The point `p + offset` along the leaf through `p`.
pub fn leaf_point(point: &BoundaryPoint, offset: &[C64]) -> Result<BoundaryPoint> {
    let policy = TolerancePolicy::default();
    let model = point.model();
    let frame = leaf_frame_with(point, &policy)?;
    in_span(offset, &frame.leaf_basis, Error::NotLeafVector)?;
    let base_off = model.base().matrix_of(offset)?;
    let extra = point.extra().map(|e| e + offset[offset.len() - 1]);
    let prov = match point.provenance() {
        Provenance::RankOne { u, v, offset: b } => {
            Provenance::RankOne { u: u.clone(), v: v.clone(), offset: b.add(&base_off) }
        }
        Provenance::Skew { u, v, offset: b } => {
            Provenance::Skew { u: u.clone(), v: v.clone(), offset: b.add(&base_off) }
        }
        Provenance::Symmetric { w, offset: b } => Provenance::Symmetric { w: w.clone(), offset: b.add(&base_off) },
        Provenance::Quadric { w, t } => {
            let d: Vec<C64> = w.iter().map(|x| x.conj()).collect();
            let s = dot_h(&d, base_off.as_slice()) / dot_h(&d, &d);
            Provenance::Quadric { w: w.clone(), t: t + s }
        }
        Provenance::Cone { base, t } => {
            let re: Vec<C64> = base.iter().map(|x| C64::new(x.re, 0.0)).collect();
            let s = dot_h(&re, base_off.as_slice()) / dot_h(&re, &re);
            Provenance::Cone { base: base.clone(), t: t + s }
        }
    };
    let size = prov.offset_size();
    let inside = match prov {
        Provenance::Cone { .. } => true,
        _ => size < 1.0 - crate::domains::SMOOTH_MARGIN,
    };
    if !inside {
        return Err(Error::LeftSmoothPart);
    }
    BoundaryPoint::from_provenance(model, prov, extra, &policy).map_err(|e| match e {
        Error::NotOnBoundary => Error::LeftSmoothPart,
        other => other,
    })
}

/// A section of `Tη` along nearby points with value `v0` at `point`.
///
/// Kinds I/II/III use `Z ↦ (𝕀 − ZZ*) B̃₀ (𝕀 − Z*Z)` with `B̃₀` chosen so the
/// value at `point` is `v0`; IV uses `q ↦ c·conj(w(q))` with `w(q)` the leaf
/// base of `q`; the tube uses `q ↦ c·Re q`.
pub fn canonical_section(point: &BoundaryPoint, v0: &[C64]) -> Result<CoordMap> {
    let model = *point.model();
    let frame = leaf_frame(point)?;
    in_span(v0, &frame.leaf_basis, Error::NotLeafVector)?;
    let flat = if model.has_flat_line() { v0[v0.len() - 1] } else { C64::new(0.0, 0.0) };
    let base = model.base();
    let v0m = base.matrix_of(v0)?;
    let f: CoordMap = match point.provenance() {
        Provenance::RankOne { offset, .. } | Provenance::Skew { offset, .. } | Provenance::Symmetric { offset, .. } => {
            let (m, n) = offset.shape();
            let left = ComplexMatrix::identity(m).sub(&offset.mul(&offset.adjoint()));
            let right = ComplexMatrix::identity(n).sub(&offset.adjoint().mul(offset));
            let x = solve(&left, &v0m)?;
            let b0 = solve(&right.transpose(), &x.transpose())?.transpose();
            Box::new(move |w: &[C64]| {
                let z = base.matrix_of(w)?;
                let (m, n) = z.shape();
                let l = ComplexMatrix::identity(m).sub(&z.mul(&z.adjoint()));
                let r = ComplexMatrix::identity(n).sub(&z.adjoint().mul(&z));
                base.coords_of(&l.mul(&b0).mul(&r))
            })
        }
        Provenance::Quadric { w, .. } => {
            let d: Vec<C64> = w.iter().map(|x| x.conj()).collect();
            let c = dot_h(&d, v0m.as_slice()) / dot_h(&d, &d);
            let m = model.m();
            Box::new(move |q: &[C64]| {
                let q = &q[..m];
                let t: C64 = q.iter().map(|x| x * x).sum();
                let den = 1.0 - t.norm_sqr();
                Ok(q.iter().map(|x| ((x - t * x.conj()) / den).conj() * c).collect())
            })
        }
        Provenance::Cone { .. } => {
            let re: Vec<C64> = point.ambient().as_slice().iter().map(|x| C64::new(x.re, 0.0)).collect();
            let c = dot_h(&re, v0m.as_slice()) / dot_h(&re, &re);
            let m = model.m();
            Box::new(move |q: &[C64]| Ok(q[..m].iter().map(|x| c * x.re).collect()))
        }
    };
    Ok(Box::new(move |w: &[C64]| {
        if w.len() != model.ambient_dim() {
            return Err(Error::ShapeMismatch);
        }
        let mut out = f(w)?;
        if model.has_flat_line() {
            out.push(flat);
        }
        Ok(out)
    }))
}

/// The slice parameters of a tangent at a leaf base point: `(α, β)` for I and
/// II, `(α, ·)` for III, and the vector itself for IV and the tube.
#[derive(Clone, Debug, PartialEq)]
pub enum SliceParams {
    Pair { alpha: Vec<C64>, beta: Vec<C64> },
    Single { alpha: Vec<C64> },
    Vector { v: Vec<C64> },
}

/// Decomposes a slice tangent through the slice parametrization at a
/// canonical point.
pub fn decompose_slice_tangent(point: &BoundaryPoint, x: &[C64]) -> Result<SliceParams> {
    let model = point.model();
    let frame = leaf_frame(point)?;
    in_span(x, &frame.slice_basis, Error::NotSliceVector)?;
    let xm = model.base().matrix_of(x)?;
    let conj = |v: &[C64]| v.iter().map(|a| a.conj()).collect::<Vec<_>>();
    match point.provenance() {
        Provenance::RankOne { u, v, .. } => Ok(SliceParams::Pair { alpha: xm.mul_vec(v), beta: xm.adjoint_mul_vec(u) }),
        Provenance::Skew { u, v, .. } => Ok(SliceParams::Pair {
            alpha: xm.mul_vec(&conj(v)),
            beta: xm.mul_vec(&conj(u)).iter().map(|a| -a).collect(),
        }),
        Provenance::Symmetric { w, .. } => Ok(SliceParams::Single { alpha: xm.mul_vec(&conj(w)) }),
        _ => Ok(SliceParams::Vector { v: x[..model.base_dim()].to_vec() }),
    }
}

/// A holomorphic curve through `point` with initial velocity `x`.
///
/// At leaf base points of I/II/III this is the curve in the rank-one /
/// rank-two / symmetric rank-one quadric; otherwise the straight line.
pub fn slice_curve(point: &BoundaryPoint, x: &[C64]) -> Result<Curve> {
    let model = *point.model();
    let p = point.coords();
    let params = decompose_slice_tangent(point, x)?;
    let flat = if model.has_flat_line() { Some(x[x.len() - 1]) } else { None };
    let line = |p: Vec<C64>, x: Vec<C64>| -> Curve {
        Box::new(move |t: C64| Ok(p.iter().zip(&x).map(|(a, b)| a + b * t).collect()))
    };
    if !point.is_canonical() || model.is_vector_model() {
        return Ok(line(p, x.to_vec()));
    }
    let base = model.base();
    let e = point.extra();
    let finish = move |z: ComplexMatrix, t: C64| -> Result<Vec<C64>> {
        let mut w = base.coords_of(&z)?;
        if let (Some(e), Some(f)) = (e, flat) {
            w.push(e + f * t);
        }
        Ok(w)
    };
    let add = |a: &[C64], b: &[C64], t: C64| a.iter().zip(b).map(|(x, y)| x + y * t).collect::<Vec<_>>();
    match (point.provenance().clone(), params) {
        (Provenance::RankOne { u, v, .. }, SliceParams::Pair { alpha, beta }) => Ok(Box::new(move |t: C64| {
            let a = add(&u, &alpha, t);
            let b = add(&v, &beta, t.conj());
            finish(ComplexMatrix::outer_h(&a, &b), t)
        })),
        (Provenance::Skew { u, v, .. }, SliceParams::Pair { alpha, beta }) => Ok(Box::new(move |t: C64| {
            let a = add(&u, &alpha, t);
            let b = add(&v, &beta, t);
            finish(ComplexMatrix::outer_t(&a, &b).sub(&ComplexMatrix::outer_t(&b, &a)), t)
        })),
        (Provenance::Symmetric { w, .. }, SliceParams::Single { alpha }) => Ok(Box::new(move |t: C64| {
            let a = add(&w, &alpha, t);
            finish(ComplexMatrix::outer_t(&a, &a), t)
        })),
        _ => Err(Error::NotSliceVector),
    }
}
