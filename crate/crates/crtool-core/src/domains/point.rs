use alloc::vec::Vec;

use num_complex::Complex64 as C64;
#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;

use super::defining::{complex_gradient, complex_hessian, defining_value};
use super::{DomainModel, ModelKind};
use crate::error::{Error, Result};
use crate::numerics::{dot_u, norm, singular_values, svd, ComplexMatrix, TolerancePolicy};
use crate::rng::SeededRng;

/// Distance kept from the singular strata by the smooth-part test.
pub const SMOOTH_MARGIN: f64 = 1e-6;

/// How a boundary point sits on its Levi leaf.
///
/// The ambient point is `uv* + offset` (I), `uvᵀ − vuᵀ + offset` (II),
/// `wwᵀ + offset` (III), `w + t·w̄` (IV) or `base + t·Re(base)` (tube).
/// The leaf base point is the one with zero offset or `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    RankOne { u: Vec<C64>, v: Vec<C64>, offset: ComplexMatrix },
    Skew { u: Vec<C64>, v: Vec<C64>, offset: ComplexMatrix },
    Symmetric { w: Vec<C64>, offset: ComplexMatrix },
    Quadric { w: Vec<C64>, t: C64 },
    Cone { base: Vec<C64>, t: C64 },
}

impl Provenance {
    /// Size of the leaf offset (`‖offset‖₂` or `|t|`).
    pub fn offset_size(&self) -> f64 {
        match self {
            Provenance::RankOne { offset, .. }
            | Provenance::Skew { offset, .. }
            | Provenance::Symmetric { offset, .. } => singular_values(offset).map(|s| s[0]).unwrap_or(f64::NAN),
            Provenance::Quadric { t, .. } | Provenance::Cone { t, .. } => t.norm(),
        }
    }

    /// The ambient point this record describes.
    pub fn ambient(&self) -> ComplexMatrix {
        match self {
            Provenance::RankOne { u, v, offset } => ComplexMatrix::outer_h(u, v).add(offset),
            Provenance::Skew { u, v, offset } => {
                let a = ComplexMatrix::outer_t(u, v).sub(&ComplexMatrix::outer_t(v, u)).add(offset);
                a.sub(&a.transpose()).scale(C64::new(0.5, 0.0))
            }
            Provenance::Symmetric { w, offset } => {
                let a = ComplexMatrix::outer_t(w, w).add(offset);
                a.add(&a.transpose()).scale(C64::new(0.5, 0.0))
            }
            Provenance::Quadric { w, t } => {
                ComplexMatrix::column_vector(&w.iter().map(|x| x + t * x.conj()).collect::<Vec<_>>())
            }
            Provenance::Cone { base, t } => {
                ComplexMatrix::column_vector(&base.iter().map(|x| x + t * x.re).collect::<Vec<_>>())
            }
        }
    }

    /// The record with the offset removed (the leaf base point).
    pub fn canonical(&self) -> Self {
        match self {
            Provenance::RankOne { u, v, offset } => Provenance::RankOne {
                u: u.clone(),
                v: v.clone(),
                offset: ComplexMatrix::zeros(offset.rows(), offset.cols()),
            },
            Provenance::Skew { u, v, offset } => Provenance::Skew {
                u: u.clone(),
                v: v.clone(),
                offset: ComplexMatrix::zeros(offset.rows(), offset.cols()),
            },
            Provenance::Symmetric { w, offset } => {
                Provenance::Symmetric { w: w.clone(), offset: ComplexMatrix::zeros(offset.rows(), offset.cols()) }
            }
            Provenance::Quadric { w, .. } => Provenance::Quadric { w: w.clone(), t: C64::new(0.0, 0.0) },
            Provenance::Cone { base, t } => {
                Provenance::Cone { base: base.iter().map(|x| x + t * x.re).collect(), t: C64::new(0.0, 0.0) }
            }
        }
    }

    fn matches(&self, kind: ModelKind) -> bool {
        matches!(
            (self, kind),
            (Provenance::RankOne { .. }, ModelKind::I)
                | (Provenance::Skew { .. }, ModelKind::II)
                | (Provenance::Symmetric { .. }, ModelKind::III)
                | (Provenance::Quadric { .. }, ModelKind::IV)
                | (Provenance::Cone { .. }, ModelKind::Tube)
        )
    }
}

/// A validated point of the smooth boundary part.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    model: DomainModel,
    ambient: ComplexMatrix,
    extra: Option<C64>,
    provenance: Provenance,
}

impl BoundaryPoint {
    /// Validates `ambient` and recovers its provenance from the singular
    /// value decomposition (or the closed forms for IV and the tube).
    pub fn from_ambient(
        model: &DomainModel,
        ambient: ComplexMatrix,
        extra: Option<C64>,
        policy: &TolerancePolicy,
    ) -> Result<Self> {
        model.check_symmetry(&ambient)?;
        if !ambient.is_finite() {
            return Err(Error::NonFinite);
        }
        let extra = normalize_extra(model, extra)?;
        if !is_smooth_boundary_point(model, &ambient, policy) {
            return Err(Error::NotOnBoundary);
        }
        let provenance = recover_provenance(model, &ambient)?;
        Ok(Self { model: *model, ambient, extra, provenance })
    }

    /// Builds the ambient point from a provenance record and validates it.
    pub fn from_provenance(
        model: &DomainModel,
        provenance: Provenance,
        extra: Option<C64>,
        policy: &TolerancePolicy,
    ) -> Result<Self> {
        if !provenance.matches(model.kind()) {
            return Err(Error::ShapeMismatch);
        }
        let ambient = provenance.ambient();
        if ambient.shape() != model.shape() {
            return Err(Error::ShapeMismatch);
        }
        if !ambient.is_finite() {
            return Err(Error::NonFinite);
        }
        let extra = normalize_extra(model, extra)?;
        if !is_smooth_boundary_point(model, &ambient, policy) {
            return Err(Error::NotOnBoundary);
        }
        Ok(Self { model: *model, ambient, extra, provenance })
    }

    /// Builds a point from flattened coordinates (including the flat one, if any).
    pub fn from_coords(model: &DomainModel, w: &[C64], policy: &TolerancePolicy) -> Result<Self> {
        if w.len() != model.ambient_dim() {
            return Err(Error::ShapeMismatch);
        }
        let ambient = model.base().matrix_of(w)?;
        let extra = model.has_flat_line().then(|| w[w.len() - 1]);
        Self::from_ambient(model, ambient, extra, policy)
    }

    pub fn model(&self) -> &DomainModel {
        &self.model
    }

    pub fn ambient(&self) -> &ComplexMatrix {
        &self.ambient
    }

    /// The coordinate of the flat factor, if the model has one.
    pub fn extra(&self) -> Option<C64> {
        self.extra
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Flattened coordinates in `ℂ^{N′}`.
    pub fn coords(&self) -> Vec<C64> {
        self.model.full_coords(&self.ambient, self.extra).expect("validated shape")
    }

    /// Whether the point is its own leaf base point (offset below `1e-12`).
    /// Every tube point is the base of its own leaf parametrization.
    pub fn is_canonical(&self) -> bool {
        matches!(self.provenance, Provenance::Cone { .. }) || self.provenance.offset_size() <= 1e-12
    }

    /// The leaf base point of this point's leaf.
    pub fn canonical(&self, policy: &TolerancePolicy) -> Result<Self> {
        Self::from_provenance(&self.model, self.provenance.canonical(), self.extra, policy)
    }

    pub fn defining_value(&self) -> f64 {
        defining_value(&self.model, &self.ambient).expect("validated shape")
    }

    pub fn gradient(&self) -> Result<Vec<C64>> {
        complex_gradient(&self.model, &self.coords())
    }

    pub fn hessian(&self) -> Result<ComplexMatrix> {
        complex_hessian(&self.model, &self.coords())
    }
}

fn normalize_extra(model: &DomainModel, extra: Option<C64>) -> Result<Option<C64>> {
    match (model.has_flat_line(), extra) {
        (true, Some(x)) if x.re.is_finite() && x.im.is_finite() => Ok(Some(x)),
        (true, Some(_)) => Err(Error::NonFinite),
        (true, None) => Ok(Some(C64::new(0.0, 0.0))),
        (false, None) => Ok(None),
        (false, Some(_)) => Err(Error::ShapeMismatch),
    }
}

/// Smooth-part membership of a base-model ambient matrix.
pub fn is_smooth_boundary_point(model: &DomainModel, z: &ComplexMatrix, policy: &TolerancePolicy) -> bool {
    let tol = policy.abs_residual_tol;
    if model.check_symmetry(z).is_err() || !z.is_finite() {
        return false;
    }
    let Ok(rho) = defining_value(model, z) else {
        return false;
    };
    if rho.abs() > tol {
        return false;
    }
    let near_one = |s: f64| (s - 1.0).abs() <= tol;
    match model.kind() {
        ModelKind::I | ModelKind::III => match singular_values(z) {
            Ok(s) => near_one(s[0]) && s.get(1).is_none_or(|&x| x <= 1.0 - SMOOTH_MARGIN),
            Err(_) => false,
        },
        ModelKind::II => match singular_values(z) {
            Ok(s) => near_one(s[0]) && near_one(s[1]) && s[2] <= 1.0 - SMOOTH_MARGIN,
            Err(_) => false,
        },
        ModelKind::IV => {
            let nn: f64 = z.as_slice().iter().map(|x| x.norm_sqr()).sum();
            nn <= 1.0 - SMOOTH_MARGIN
        }
        ModelKind::Tube => z.as_slice()[model.m() - 1].re >= SMOOTH_MARGIN,
    }
}

fn largest_index(x: &[C64]) -> usize {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if v.norm() > x[best].norm() {
            best = i;
        }
    }
    best
}

/// The phase that makes the largest-modulus entry of `x` real and positive.
/// Ties go to the first index.
fn phase_of_largest(x: &[C64]) -> C64 {
    let p = x[largest_index(x)];
    if p.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        p.conj() / p.norm()
    }
}

fn recover_provenance(model: &DomainModel, z: &ComplexMatrix) -> Result<Provenance> {
    match model.kind() {
        ModelKind::I => {
            let s = svd(z)?;
            let u = s.u.column(0);
            let v = s.v.column(0);
            let ph = phase_of_largest(&u);
            let u: Vec<C64> = u.iter().map(|x| x * ph).collect();
            let v: Vec<C64> = v.iter().map(|x| x * ph).collect();
            let offset = z.sub(&ComplexMatrix::outer_h(&u, &v));
            Ok(Provenance::RankOne { u, v, offset })
        }
        ModelKind::II => {
            let s = svd(z)?;
            let u = s.u.column(0);
            let ph = phase_of_largest(&u);
            let u: Vec<C64> = u.iter().map(|x| x * ph).collect();
            let ubar: Vec<C64> = u.iter().map(|x| x.conj()).collect();
            let v: Vec<C64> = z.mul_vec(&ubar).iter().map(|x| -x).collect();
            let nv = norm(&v);
            if (nv - 1.0).abs() > 1e-6 {
                return Err(Error::DegenerateSvd);
            }
            let v: Vec<C64> = v.iter().map(|x| x / nv).collect();
            let p = ComplexMatrix::outer_t(&u, &v).sub(&ComplexMatrix::outer_t(&v, &u));
            Ok(Provenance::Skew { u, v, offset: z.sub(&p) })
        }
        ModelKind::III => {
            let s = svd(z)?;
            let u = s.u.column(0);
            let ubar: Vec<C64> = u.iter().map(|x| x.conj()).collect();
            let lam = crate::numerics::dot_h(&u, &z.mul_vec(&ubar));
            let mut w: Vec<C64> = u.iter().map(|x| x * lam.sqrt()).collect();
            let j = largest_index(&w);
            if w[j].re < 0.0 {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            let nw = norm(&w);
            let w: Vec<C64> = w.iter().map(|x| x / nw).collect();
            let offset = z.sub(&ComplexMatrix::outer_t(&w, &w));
            Ok(Provenance::Symmetric { w, offset })
        }
        ModelKind::IV => {
            let zv = z.as_slice();
            let t = dot_u(zv, zv);
            let d = 1.0 - t.norm_sqr();
            let w = zv.iter().map(|x| (x - t * x.conj()) / d).collect();
            Ok(Provenance::Quadric { w, t })
        }
        ModelKind::Tube => Ok(Provenance::Cone { base: z.as_slice().to_vec(), t: C64::new(0.0, 0.0) }),
    }
}

fn scaled_offset(c: ComplexMatrix, r: f64) -> ComplexMatrix {
    if r == 0.0 {
        return ComplexMatrix::zeros(c.rows(), c.cols());
    }
    let s = singular_values(&c).ok().and_then(|s| s.first().copied()).unwrap_or(0.0);
    if s == 0.0 {
        return ComplexMatrix::zeros(c.rows(), c.cols());
    }
    c.scale(C64::new(r / s, 0.0))
}

/// Deterministic sampler of smooth boundary points with leaf offset of size `r`.
pub fn sample_boundary_point(model: &DomainModel, seed: u64, r: f64) -> Result<BoundaryPoint> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::BadDimensions);
    }
    let mut rng = SeededRng::new(seed);
    let (m, n) = model.shape();
    let provenance = match model.kind() {
        ModelKind::I => {
            let uu = rng.unitary(m);
            let vv = rng.unitary(n);
            let c = rng.complex_matrix(m - 1, n - 1);
            let c = scaled_offset(c, r);
            let up = uu.select_columns(&(1..m).collect::<Vec<_>>());
            let vp = vv.select_columns(&(1..n).collect::<Vec<_>>());
            Provenance::RankOne { u: uu.column(0), v: vv.column(0), offset: up.mul(&c).mul(&vp.adjoint()) }
        }
        ModelKind::II => {
            let ww = rng.unitary(m);
            let g = rng.complex_matrix(m - 2, m - 2);
            let c = scaled_offset(g.sub(&g.transpose()), r);
            let wp = ww.select_columns(&(2..m).collect::<Vec<_>>());
            Provenance::Skew { u: ww.column(0), v: ww.column(1), offset: wp.mul(&c).mul(&wp.transpose()) }
        }
        ModelKind::III => {
            let ww = rng.unitary(m);
            let g = rng.complex_matrix(m - 1, m - 1);
            let c = scaled_offset(g.add(&g.transpose()), r);
            let wp = ww.select_columns(&(1..m).collect::<Vec<_>>());
            Provenance::Symmetric { w: ww.column(0), offset: wp.mul(&c).mul(&wp.transpose()) }
        }
        ModelKind::IV => {
            let x = rng.real_unit_vector(m);
            let y0 = rng.real_unit_vector(m);
            let d: f64 = x.iter().zip(&y0).map(|(a, b)| a * b).sum();
            let mut y: Vec<f64> = y0.iter().zip(&x).map(|(b, a)| b - d * a).collect();
            let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            y.iter_mut().for_each(|a| *a /= ny);
            let w = x.iter().zip(&y).map(|(a, b)| C64::new(0.5 * a, 0.5 * b)).collect();
            let th = 2.0 * core::f64::consts::PI * rng.uniform();
            Provenance::Quadric { w, t: C64::from_polar(r, th) }
        }
        ModelKind::Tube => {
            let x = rng.real_unit_vector(m - 1);
            let s = 0.5 + rng.uniform();
            let base = (0..m)
                .map(|j| {
                    let re = if j + 1 < m { s * x[j] } else { s };
                    C64::new(re, rng.normal())
                })
                .collect();
            let th = 2.0 * core::f64::consts::PI * rng.uniform();
            Provenance::Cone { base, t: C64::from_polar(r, th) }
        }
    };
    let extra = model.has_flat_line().then(|| rng.complex_normal());
    BoundaryPoint::from_provenance(model, provenance, extra, &TolerancePolicy::default())
}
