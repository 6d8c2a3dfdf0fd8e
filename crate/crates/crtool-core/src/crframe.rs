//! Frames of `T^{1,0}M`, the Levi matrix in a frame, its signature and the
//! Levi null space.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::domains::{complex_gradient, complex_hessian, BoundaryPoint, DomainModel};
use crate::error::{Error, Result};
use crate::numerics::{
    conj_vec, dot_u, hermitian_eigen, norm, orthonormalize, signature_with_scale, ComplexMatrix, Signature,
    TolerancePolicy,
};

/// Orthonormal basis of `T^{1,0}_pM` in flattened coordinates.
#[derive(Clone, Debug)]
pub struct TangentFrame {
    pub base: BoundaryPoint,
    /// `N′ × (N′−1)`, orthonormal columns annihilated by `∂ρ`.
    pub vectors: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct LeviReport {
    pub frame: TangentFrame,
    /// `L_jk = Σ ρ_{w_a w̄_b} (v_j)_a conj(v_k)_b`.
    pub matrix: ComplexMatrix,
    pub signature: Signature,
    pub stable: bool,
}

/// Tangent frame at arbitrary coordinates `w` (not necessarily on `M`).
///
/// The reference vectors are projected onto `ker ∂ρ`; the one with the
/// smallest projection is dropped (or the index `drop`, when given) and the
/// rest are orthonormalized in order. Returns the frame and the dropped index.
pub fn frame_at(
    model: &DomainModel,
    w: &[C64],
    reference: &ComplexMatrix,
    drop: Option<usize>,
    policy: &TolerancePolicy,
) -> Result<(ComplexMatrix, usize)> {
    let n = model.ambient_dim();
    if reference.shape() != (n, n) {
        return Err(Error::ShapeMismatch);
    }
    let g = complex_gradient(model, w)?;
    let gn = norm(&g);
    if gn < policy.abs_residual_tol {
        return Err(Error::VanishingGradient);
    }
    // Unit normal in the Hermitian sense: v is tangent iff ⟨nrm, v⟩ = Σ g_a v_a = 0.
    let nrm: Vec<C64> = g.iter().map(|x| x.conj() / gn).collect();
    let projected: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let e = reference.column(j);
            let c: C64 = nrm.iter().zip(&e).map(|(a, b)| a.conj() * b).sum();
            e.iter().zip(&nrm).map(|(x, y)| x - c * y).collect()
        })
        .collect();
    let drop = match drop {
        Some(d) if d < n => d,
        Some(_) => return Err(Error::ShapeMismatch),
        None => {
            let mut best = 0;
            for j in 1..n {
                if norm(&projected[j]) < norm(&projected[best]) {
                    best = j;
                }
            }
            best
        }
    };
    let keep: Vec<Vec<C64>> = projected.into_iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, v)| v).collect();
    let q = orthonormalize(&keep, 1e-10);
    if q.len() != n - 1 {
        return Err(Error::ShapeMismatch);
    }
    Ok((ComplexMatrix::from_columns(n, &q), drop))
}

pub fn tangent_frame(point: &BoundaryPoint) -> Result<TangentFrame> {
    let n = point.model().ambient_dim();
    tangent_frame_with_reference(point, &ComplexMatrix::identity(n), &TolerancePolicy::default())
}

/// Frame built from an arbitrary reference basis instead of the standard one.
pub fn tangent_frame_with_reference(
    point: &BoundaryPoint,
    reference: &ComplexMatrix,
    policy: &TolerancePolicy,
) -> Result<TangentFrame> {
    let (vectors, _) = frame_at(point.model(), &point.coords(), reference, None, policy)?;
    Ok(TangentFrame { base: point.clone(), vectors })
}

/// `Vᵀ H V̄` for the frame `V` and complex Hessian `H`.
pub(crate) fn levi_matrix(h: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    let hv = h.mul(&v.conj());
    let mut l = v.transpose().mul(&hv);
    let k = l.rows();
    for a in 0..k {
        l[(a, a)] = C64::new(l[(a, a)].re, 0.0);
        for b in a + 1..k {
            let x = (l[(a, b)] + l[(b, a)].conj()) * 0.5;
            l[(a, b)] = x;
            l[(b, a)] = x.conj();
        }
    }
    l
}

/// Levi report with the stability flag; never fails on instability.
pub fn levi_report_unchecked(point: &BoundaryPoint, policy: &TolerancePolicy) -> Result<LeviReport> {
    let n = point.model().ambient_dim();
    let frame = tangent_frame_with_reference(point, &ComplexMatrix::identity(n), policy)?;
    levi_report_in_frame(frame, policy)
}

/// Levi report in a given frame. The zero band is measured against the
/// larger of the Levi eigenvalues and `‖H‖_F`.
pub fn levi_report_in_frame(frame: TangentFrame, policy: &TolerancePolicy) -> Result<LeviReport> {
    let h = frame.base.hessian()?;
    let matrix = levi_matrix(&h, &frame.vectors);
    let eig = hermitian_eigen(&matrix, policy)?;
    let (signature, stable) = signature_with_scale(&eig.values, h.frobenius_norm(), policy);
    Ok(LeviReport { frame, matrix, signature, stable })
}

/// Levi report; fails with `UnstableSignature` when the two tolerances disagree.
pub fn levi_report(point: &BoundaryPoint) -> Result<LeviReport> {
    levi_report_with(point, &TolerancePolicy::default())
}

pub fn levi_report_with(point: &BoundaryPoint, policy: &TolerancePolicy) -> Result<LeviReport> {
    let r = levi_report_unchecked(point, policy)?;
    if !r.stable {
        return Err(Error::UnstableSignature);
    }
    Ok(r)
}

/// Orthonormal basis of the Levi null space in ambient coordinates (`N′ × K`).
pub fn levi_null_basis(point: &BoundaryPoint) -> Result<ComplexMatrix> {
    levi_null_basis_with(point, &TolerancePolicy::default())
}

pub fn levi_null_basis_with(point: &BoundaryPoint, policy: &TolerancePolicy) -> Result<ComplexMatrix> {
    let r = levi_report_with(point, policy)?;
    let eig = hermitian_eigen(&r.matrix, policy)?;
    let scale = eig.values.iter().fold(r.frame.base.hessian()?.frobenius_norm(), |a, x| a.max(x.abs()));
    let band = policy.rel_rank_tol * scale;
    let n = point.model().ambient_dim();
    let cols: Vec<Vec<C64>> = (0..eig.values.len())
        .filter(|&j| eig.values[j].abs() <= band)
        .map(|j| r.frame.vectors.mul_vec(&conj_vec(&eig.vectors.column(j))))
        .collect();
    Ok(ComplexMatrix::from_columns(n, &cols))
}

/// `L(v1, v2) = Σ ρ_{w_a w̄_b} (v1)_a conj(v2)_b` for complex tangent vectors.
pub fn scalar_levi_value(point: &BoundaryPoint, v1: &[C64], v2: &[C64]) -> Result<C64> {
    let policy = TolerancePolicy::default();
    let n = point.model().ambient_dim();
    if v1.len() != n || v2.len() != n {
        return Err(Error::ShapeMismatch);
    }
    let g = point.gradient()?;
    let gn = norm(&g);
    for v in [v1, v2] {
        if dot_u(&g, v).norm() > policy.abs_residual_tol * gn * norm(v).max(1.0) {
            return Err(Error::NotTangent);
        }
    }
    let h = point.hessian()?;
    Ok(dot_u(v1, &h.mul_vec(&conj_vec(v2))))
}

/// The Hessian at `w` contracted with the conjugated frame columns,
/// `H(w)·conj(v_j(w))`, as columns. Used for the nondegeneracy ranks.
pub(crate) fn hessian_on_frame(
    model: &DomainModel,
    w: &[C64],
    drop: usize,
    policy: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    let n = model.ambient_dim();
    let (v, _) = frame_at(model, w, &ComplexMatrix::identity(n), Some(drop), policy)?;
    Ok(complex_hessian(model, w)?.mul(&v.conj()))
}
