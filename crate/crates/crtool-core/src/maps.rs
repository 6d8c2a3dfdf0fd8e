//! Explicit holomorphic maps between the models: unitary automorphisms, the
//! tube-to-IV biholomorphism, block and sphere embeddings, and a
//! CR-transversality check.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::crframe::tangent_frame;
use crate::domains::{BoundaryPoint, DomainModel, ModelKind};
use crate::error::{Error, Result};
use crate::nu::{nu_estimate, NuConfig};
use crate::numerics::{
    conj_vec, d_derivative_with_step, dot_u, norm, project_out, rank_with_tol, scale_vec, ComplexMatrix,
    TolerancePolicy,
};

/// Step for the finite-difference Jacobian of the Cayley map.
const JACOBIAN_STEP: f64 = 1e-4;

/// A holomorphic function of the source coordinates, used as the free
/// entry of the embeddings. Must satisfy `|φ| < 1` wherever evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum Phi {
    Constant(C64),
    /// Sum of `coefficient · Π z_j^{e_j}` over flattened source coordinates.
    Polynomial(Vec<(Vec<u32>, C64)>),
}

impl Phi {
    pub fn value(&self, z: &[C64]) -> Result<C64> {
        let v = match self {
            Phi::Constant(c) => *c,
            Phi::Polynomial(terms) => {
                let mut s = C64::new(0.0, 0.0);
                for (e, c) in terms {
                    if e.len() != z.len() {
                        return Err(Error::ShapeMismatch);
                    }
                    s += c * z.iter().zip(e).map(|(x, &k)| x.powu(k)).product::<C64>();
                }
                s
            }
        };
        if !v.is_finite() || v.norm() >= 1.0 {
            return Err(Error::PhiOutOfRange);
        }
        Ok(v)
    }

    /// `dφ(x) = Σ ∂φ/∂z_j · x_j`.
    pub fn differential(&self, z: &[C64], x: &[C64]) -> Result<C64> {
        match self {
            Phi::Constant(_) => Ok(C64::new(0.0, 0.0)),
            Phi::Polynomial(terms) => {
                let mut s = C64::new(0.0, 0.0);
                for (e, c) in terms {
                    if e.len() != z.len() {
                        return Err(Error::ShapeMismatch);
                    }
                    for j in 0..z.len() {
                        if e[j] == 0 {
                            continue;
                        }
                        let mut t = *c * f64::from(e[j]) * x[j];
                        for (i, (zi, &k)) in z.iter().zip(e).enumerate() {
                            t *= if i == j { zi.powu(k - 1) } else { zi.powu(k) };
                        }
                        s += t;
                    }
                }
                Ok(s)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum MapSpec {
    /// `Z ↦ U Z V*` on I(m, n).
    UnitaryI { u: ComplexMatrix, v: ComplexMatrix },
    /// `Z ↦ U Z Uᵀ` on II(m).
    UnitaryII { u: ComplexMatrix },
    /// `Z ↦ U Z Uᵀ` on III(m).
    UnitaryIII { u: ComplexMatrix },
    /// `z ↦ λ·(z_{π(0)}, …, z_{π(m−1)})` on IV(m), `|λ| = 1`.
    PermutationPhaseIV { perm: Vec<usize>, phase: C64 },
    /// Tube(m) → IV(m).
    CayleyTubeToIV { m: usize },
    /// `Z ↦ diag(Z, φ)` from I(m, n) to I(m+1, n+1).
    BlockEmbedI { m: usize, n: usize, phi: Phi },
    /// `Z ↦ diag(Z, [[0, φ], [−φ, 0]])` from II(m) to II(m+2).
    BlockEmbedII { m: usize, phi: Phi },
    /// `z ↦ ½ aaᵀ + (φ/2) bbᵀ`, `a = (z, 1)`, `b = (z, −1)`, from the sphere
    /// in `ℂ^{m−1}` to III(m).
    SphereEmbedIII { m: usize, phi: Phi },
    /// Constant map onto a fixed target point.
    Constant { source: DomainModel, target: BoundaryPoint },
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let (r, c) = u.shape();
    if r != c || r == 0 {
        return Err(Error::ShapeMismatch);
    }
    if u.adjoint().mul(u).sub(&ComplexMatrix::identity(r)).max_abs() > 1e-12 {
        return Err(Error::NotUnitary);
    }
    Ok(())
}

impl MapSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            MapSpec::UnitaryI { u, v } => {
                check_unitary(u)?;
                check_unitary(v)
            }
            MapSpec::UnitaryII { u } | MapSpec::UnitaryIII { u } => check_unitary(u),
            MapSpec::PermutationPhaseIV { perm, phase } => {
                let mut seen = vec![false; perm.len()];
                for &p in perm {
                    if p >= perm.len() || seen[p] {
                        return Err(Error::NotUnitary);
                    }
                    seen[p] = true;
                }
                if (phase.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::NotUnitary);
                }
                Ok(())
            }
            _ => Ok(()),
        }
        .and_then(|_| self.source().map(|_| ()))
        .and_then(|_| self.target().map(|_| ()))
    }

    pub fn source(&self) -> Result<DomainModel> {
        match self {
            MapSpec::UnitaryI { u, v } => DomainModel::new(ModelKind::I, u.rows(), v.rows()),
            MapSpec::UnitaryII { u } => DomainModel::new(ModelKind::II, u.rows(), 0),
            MapSpec::UnitaryIII { u } => DomainModel::new(ModelKind::III, u.rows(), 0),
            MapSpec::PermutationPhaseIV { perm, .. } => DomainModel::new(ModelKind::IV, perm.len(), 0),
            MapSpec::CayleyTubeToIV { m } => DomainModel::new(ModelKind::Tube, *m, 0),
            MapSpec::BlockEmbedI { m, n, .. } => DomainModel::new(ModelKind::I, *m, *n),
            MapSpec::BlockEmbedII { m, .. } => DomainModel::new(ModelKind::II, *m, 0),
            MapSpec::SphereEmbedIII { m, .. } => DomainModel::sphere(m.saturating_sub(1)),
            MapSpec::Constant { source, .. } => Ok(*source),
        }
    }

    pub fn target(&self) -> Result<DomainModel> {
        match self {
            MapSpec::CayleyTubeToIV { m } => DomainModel::new(ModelKind::IV, *m, 0),
            MapSpec::BlockEmbedI { m, n, .. } => DomainModel::new(ModelKind::I, m + 1, n + 1),
            MapSpec::BlockEmbedII { m, .. } => DomainModel::new(ModelKind::II, m + 2, 0),
            MapSpec::SphereEmbedIII { m, .. } => DomainModel::new(ModelKind::III, *m, 0),
            MapSpec::Constant { target, .. } => Ok(*target.model()),
            _ => self.source(),
        }
    }

    pub fn is_unitary(&self) -> bool {
        matches!(
            self,
            MapSpec::UnitaryI { .. }
                | MapSpec::UnitaryII { .. }
                | MapSpec::UnitaryIII { .. }
                | MapSpec::PermutationPhaseIV { .. }
        )
    }

    /// The map on flattened source coordinates.
    pub fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        let src = self.source()?;
        let tgt = self.target()?;
        if z.len() != src.ambient_dim() {
            return Err(Error::ShapeMismatch);
        }
        match self {
            MapSpec::UnitaryI { u, v } => tgt.coords_of(&u.mul(&src.matrix_of(z)?).mul(&v.adjoint())),
            MapSpec::UnitaryII { u } | MapSpec::UnitaryIII { u } => {
                tgt.coords_of(&u.mul(&src.matrix_of(z)?).mul(&u.transpose()))
            }
            MapSpec::PermutationPhaseIV { perm, phase } => Ok(perm.iter().map(|&p| phase * z[p]).collect()),
            MapSpec::CayleyTubeToIV { .. } => cayley(z),
            MapSpec::BlockEmbedI { m, n, phi } => {
                let f = phi.value(z)?;
                let zm = src.matrix_of(z)?;
                let big = ComplexMatrix::from_fn(m + 1, n + 1, |i, j| {
                    if i < *m && j < *n {
                        zm[(i, j)]
                    } else if i == *m && j == *n {
                        f
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                tgt.coords_of(&big)
            }
            MapSpec::BlockEmbedII { m, phi } => {
                let f = phi.value(z)?;
                tgt.coords_of(&block_ii(&src.matrix_of(z)?, *m, f))
            }
            MapSpec::SphereEmbedIII { phi, .. } => {
                let f = phi.value(z)?;
                let (a, b) = sphere_vectors(z);
                let h = ComplexMatrix::outer_t(&a, &a)
                    .scale(C64::new(0.5, 0.0))
                    .add(&ComplexMatrix::outer_t(&b, &b).scale(f * 0.5));
                tgt.coords_of(&h)
            }
            MapSpec::Constant { target, .. } => Ok(target.coords()),
        }
    }

    /// The complex-linear differential at `z` applied to `x`.
    pub fn differential(&self, z: &[C64], x: &[C64]) -> Result<Vec<C64>> {
        let src = self.source()?;
        let tgt = self.target()?;
        if z.len() != src.ambient_dim() || x.len() != z.len() {
            return Err(Error::ShapeMismatch);
        }
        match self {
            MapSpec::UnitaryI { .. }
            | MapSpec::UnitaryII { .. }
            | MapSpec::UnitaryIII { .. }
            | MapSpec::PermutationPhaseIV { .. } => {
                // Linear maps: the differential is the map itself.
                self.eval(x)
            }
            MapSpec::CayleyTubeToIV { .. } => {
                let z = z.to_vec();
                let x = x.to_vec();
                let curve = move |t: C64| {
                    let q: Vec<C64> = z.iter().zip(&x).map(|(a, b)| a + b * t).collect();
                    Ok(ComplexMatrix::column_vector(&cayley(&q)?))
                };
                Ok(d_derivative_with_step(curve, C64::new(0.0, 0.0), JACOBIAN_STEP)?.into_vec())
            }
            MapSpec::BlockEmbedI { m, n, phi } => {
                phi.value(z)?;
                let df = phi.differential(z, x)?;
                let xm = src.matrix_of(x)?;
                let big = ComplexMatrix::from_fn(m + 1, n + 1, |i, j| {
                    if i < *m && j < *n {
                        xm[(i, j)]
                    } else if i == *m && j == *n {
                        df
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                tgt.coords_of(&big)
            }
            MapSpec::BlockEmbedII { m, phi } => {
                phi.value(z)?;
                let df = phi.differential(z, x)?;
                tgt.coords_of(&block_ii(&src.matrix_of(x)?, *m, df))
            }
            MapSpec::SphereEmbedIII { phi, .. } => {
                let f = phi.value(z)?;
                let df = phi.differential(z, x)?;
                let (a, b) = sphere_vectors(z);
                let mut dx = x.to_vec();
                dx.push(C64::new(0.0, 0.0));
                let sym = |p: &[C64], q: &[C64]| ComplexMatrix::outer_t(p, q).add(&ComplexMatrix::outer_t(q, p));
                let h = sym(&dx, &a)
                    .scale(C64::new(0.5, 0.0))
                    .add(&ComplexMatrix::outer_t(&b, &b).scale(df * 0.5))
                    .add(&sym(&dx, &b).scale(f * 0.5));
                tgt.coords_of(&h)
            }
            MapSpec::Constant { target, .. } => Ok(vec![C64::new(0.0, 0.0); target.model().ambient_dim()]),
        }
    }
}

fn block_ii(z: &ComplexMatrix, m: usize, f: C64) -> ComplexMatrix {
    ComplexMatrix::from_fn(m + 2, m + 2, |i, j| {
        if i < m && j < m {
            z[(i, j)]
        } else if i == m && j == m + 1 {
            f
        } else if i == m + 1 && j == m {
            -f
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn sphere_vectors(z: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let mut a = z.to_vec();
    let mut b = z.to_vec();
    a.push(C64::new(1.0, 0.0));
    b.push(C64::new(-1.0, 0.0));
    (a, b)
}

/// `F(z) = z_m² − z_1² − … − z_{m−1}²`.
fn light_form(z: &[C64]) -> C64 {
    let (last, rest) = z.split_last().expect("nonempty");
    last * last - rest.iter().map(|x| x * x).sum::<C64>()
}

/// `z ↦ i·(2ζ′, 1 + F(ζ)) / F(ζ + 𝐢)` with `ζ = i·z`, `ζ′` its first `m−1`
/// entries and `𝐢 = (0, …, 0, i)`.
pub fn cayley(z: &[C64]) -> Result<Vec<C64>> {
    let policy = TolerancePolicy::default();
    let i = C64::new(0.0, 1.0);
    let zeta: Vec<C64> = z.iter().map(|x| i * x).collect();
    let mut shifted = zeta.clone();
    *shifted.last_mut().ok_or(Error::ShapeMismatch)? += i;
    let den = light_form(&shifted);
    if den.norm() < policy.abs_residual_tol {
        return Err(Error::CayleySingular);
    }
    let m = z.len();
    let mut out: Vec<C64> = zeta[..m - 1].iter().map(|x| i * 2.0 * x / den).collect();
    out.push(i * (1.0 + light_form(&zeta)) / den);
    Ok(out)
}

/// The image point in the target model.
pub fn apply_map(spec: &MapSpec, point: &BoundaryPoint) -> Result<BoundaryPoint> {
    spec.validate()?;
    if *point.model() != spec.source()? {
        return Err(Error::SourceMismatch);
    }
    let w = spec.eval(&point.coords())?;
    BoundaryPoint::from_coords(&spec.target()?, &w, &TolerancePolicy::default())
}

/// `h_* X` for a complex tangent `X` at `point`.
pub fn pushforward_cr(spec: &MapSpec, point: &BoundaryPoint, tangent: &[C64]) -> Result<Vec<C64>> {
    spec.validate()?;
    if *point.model() != spec.source()? {
        return Err(Error::SourceMismatch);
    }
    let policy = TolerancePolicy::default();
    let g = point.gradient()?;
    if tangent.len() != g.len() {
        return Err(Error::ShapeMismatch);
    }
    if dot_u(&g, tangent).norm() > policy.abs_residual_tol * norm(&g) * norm(tangent).max(1.0) {
        return Err(Error::NotTangent);
    }
    spec.differential(&point.coords(), tangent)
}

/// Real vectors of `ℝ^{2N}` as real-valued complex columns `(Re x, Im x)`.
fn realify(x: &[C64]) -> Vec<C64> {
    x.iter().map(|z| C64::new(z.re, 0.0)).chain(x.iter().map(|z| C64::new(z.im, 0.0))).collect()
}

/// Whether the complex tangents at the image together with `h_*` of the
/// real tangent space span the real tangent space of the target.
pub fn cr_transversality_check(spec: &MapSpec, point: &BoundaryPoint) -> Result<bool> {
    let policy = TolerancePolicy::default();
    let image = apply_map(spec, point)?;
    let i = C64::new(0.0, 1.0);
    let target_frame = tangent_frame(&image)?;
    let n_t = image.model().ambient_dim();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for v in target_frame.vectors.columns() {
        let iv: Vec<C64> = v.iter().map(|x| i * x).collect();
        cols.push(realify(&v));
        cols.push(realify(&iv));
    }
    // Real tangent space of the source: complex tangents, their i-multiples,
    // and the characteristic direction i·∇ρ.
    let z = point.coords();
    let mut source_real: Vec<Vec<C64>> = Vec::new();
    for v in tangent_frame(point)?.vectors.columns() {
        source_real.push(v.iter().map(|x| i * x).collect());
        source_real.push(v);
    }
    let g = point.gradient()?;
    source_real.push(g.iter().map(|x| i * x.conj()).collect());
    let g_image = image.gradient()?;
    // Real normal of the target in (Re, Im) coordinates.
    let nrm = realify(&conj_vec(&g_image));
    let nrm = scale_vec(&nrm, C64::new(1.0 / norm(&nrm), 0.0));
    let nrm = ComplexMatrix::from_columns(2 * n_t, &[nrm]);
    for v in source_real {
        let hv = spec.differential(&z, &v)?;
        // The image of a real tangent vector must be tangent to the target;
        // the roundoff-level normal part is then removed.
        if dot_u(&g_image, &hv).re.abs() > 1e-6 * norm(&g_image) * norm(&hv).max(1.0) {
            return Err(Error::NotTangent);
        }
        cols.push(project_out(&realify(&hv), &nrm));
    }
    let (rank, stable) = rank_with_tol(&ComplexMatrix::from_columns(2 * n_t, &cols), &policy)?;
    if !stable {
        return Err(Error::UnstableRank);
    }
    Ok(rank == 2 * n_t - 1)
}

/// `ν` at `point` and at its image under a unitary map.
pub fn nu_invariance_probe(spec: &MapSpec, point: &BoundaryPoint, config: &NuConfig) -> Result<(usize, usize)> {
    if !spec.is_unitary() {
        return Err(Error::SourceMismatch);
    }
    let image = apply_map(spec, point)?;
    Ok((nu_estimate(point, config)?.nu, nu_estimate(&image, config)?.nu))
}
