use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use super::{DomainModel, ModelKind};
use crate::error::{Error, Result};
use crate::numerics::{det, pfaffian, ComplexMatrix};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// `ρ(Z)` on a base-model ambient matrix; the open domain is `{ρ < 0}`.
pub fn defining_value(model: &DomainModel, z: &ComplexMatrix) -> Result<f64> {
    let w = model.base().coords_of(z)?;
    Ok(coords_value(&model.base(), &w))
}

/// The function whose derivatives [`complex_gradient`] and
/// [`complex_hessian`] return. It equals [`defining_value`] except for kind II,
/// where `−det(𝕀 − Z*Z)` vanishes to second order on the boundary and is
/// replaced by the square root `−Pf`, i.e. minus the product of `1 − σ²` over
/// singular-value pairs.
pub fn reduced_defining_value(model: &DomainModel, w: &[C64]) -> Result<f64> {
    check_len(model, w)?;
    if model.kind() == ModelKind::II {
        Ok(-(pf_scale(model.m()) * pfaffian(&pf_matrix(model, w))).re)
    } else {
        Ok(coords_value(&model.base(), w))
    }
}

/// `ρ_w` in flattened coordinates (length `N′`).
pub fn complex_gradient(model: &DomainModel, w: &[C64]) -> Result<Vec<C64>> {
    check_len(model, w)?;
    let mut g = match model.kind() {
        ModelKind::I | ModelKind::III => det_gradient(model, w),
        ModelKind::II => pf_gradient(model, w),
        ModelKind::IV => {
            let s: C64 = w[..model.m()].iter().map(|x| x * x).sum();
            w[..model.m()].iter().map(|x| x.conj() * 2.0 - x * s.conj() * 2.0).collect()
        }
        ModelKind::Tube => {
            let m = model.m();
            (0..m).map(|j| C64::new(if j + 1 < m { w[j].re } else { -w[j].re }, 0.0)).collect()
        }
    };
    if model.has_flat_line() {
        g.push(ZERO);
    }
    Ok(g)
}

/// `ρ_{w_a w̄_b}` in flattened coordinates (`N′ × N′`).
pub fn complex_hessian(model: &DomainModel, w: &[C64]) -> Result<ComplexMatrix> {
    check_len(model, w)?;
    let base = match model.kind() {
        ModelKind::I | ModelKind::III => det_hessian(model, w),
        ModelKind::II => pf_hessian(model, w),
        ModelKind::IV => {
            let z = &w[..model.m()];
            ComplexMatrix::from_fn(z.len(), z.len(), |j, k| {
                let d = if j == k { 2.0 } else { 0.0 };
                C64::new(d, 0.0) - z[j] * z[k].conj() * 4.0
            })
        }
        ModelKind::Tube => {
            let m = model.m();
            ComplexMatrix::from_fn(m, m, |j, k| {
                if j != k {
                    ZERO
                } else if j + 1 < m {
                    C64::new(0.5, 0.0)
                } else {
                    C64::new(-0.5, 0.0)
                }
            })
        }
    };
    if !model.has_flat_line() {
        return Ok(base);
    }
    let n = model.ambient_dim();
    Ok(ComplexMatrix::from_fn(n, n, |a, b| if a + 1 < n && b + 1 < n { base[(a, b)] } else { ZERO }))
}

fn check_len(model: &DomainModel, w: &[C64]) -> Result<()> {
    if w.len() != model.ambient_dim() {
        return Err(Error::ShapeMismatch);
    }
    if w.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn coords_value(base: &DomainModel, w: &[C64]) -> f64 {
    let m = base.m();
    match base.kind() {
        ModelKind::I | ModelKind::II | ModelKind::III => -det(&bordered(base, w)).re,
        ModelKind::IV => {
            let z = &w[..m];
            let s: C64 = z.iter().map(|x| x * x).sum();
            let nn: f64 = z.iter().map(|x| x.norm_sqr()).sum();
            2.0 * nn - 1.0 - s.norm_sqr()
        }
        ModelKind::Tube => {
            let head: f64 = w[..m - 1].iter().map(|x| x.re * x.re).sum();
            head - w[m - 1].re * w[m - 1].re
        }
    }
}

/// `[[𝕀, Z], [Z*, 𝕀]]`, whose determinant is `det(𝕀 − Z*Z)`.
fn bordered(base: &DomainModel, w: &[C64]) -> ComplexMatrix {
    let z = base.matrix_of(w).expect("length checked");
    let (m, n) = z.shape();
    ComplexMatrix::from_fn(m + n, m + n, |r, c| match (r < m, c < m) {
        (true, true) | (false, false) => {
            if r == c {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        }
        (true, false) => z[(r, c - m)],
        (false, true) => z[(c, r - m)].conj(),
    })
}

/// Positions of the holomorphic (`z`) and antiholomorphic (`z̄`) occurrences of
/// each free coordinate inside the bordered matrix, with their coefficients.
type Slots = Vec<Vec<(usize, usize, f64)>>;

fn det_slots(model: &DomainModel) -> (Slots, Slots) {
    let (m, n) = model.shape();
    let mut hol = Vec::new();
    let mut anti = Vec::new();
    match model.kind() {
        ModelKind::I => {
            for i in 0..m {
                for j in 0..n {
                    hol.push(vec![(i, m + j, 1.0)]);
                    anti.push(vec![(m + j, i, 1.0)]);
                }
            }
        }
        ModelKind::III => {
            let s = core::f64::consts::FRAC_1_SQRT_2;
            for i in 0..m {
                for j in i..m {
                    if i == j {
                        hol.push(vec![(i, m + i, 1.0)]);
                        anti.push(vec![(m + i, i, 1.0)]);
                    } else {
                        hol.push(vec![(i, m + j, s), (j, m + i, s)]);
                        anti.push(vec![(m + j, i, s), (m + i, j, s)]);
                    }
                }
            }
        }
        _ => unreachable!("determinant slots only for kinds I and III"),
    }
    (hol, anti)
}

fn minor(a: &ComplexMatrix, skip_rows: &[usize], skip_cols: &[usize]) -> ComplexMatrix {
    let rows: Vec<usize> = (0..a.rows()).filter(|r| !skip_rows.contains(r)).collect();
    let cols: Vec<usize> = (0..a.cols()).filter(|c| !skip_cols.contains(c)).collect();
    ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])])
}

fn parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `∂ det / ∂K_{rc}`
fn cofactor1(k: &ComplexMatrix, r: usize, c: usize) -> C64 {
    det(&minor(k, &[r], &[c])) * parity(r + c)
}

/// `∂² det / ∂K_{r1 c1} ∂K_{r2 c2}`
fn cofactor2(k: &ComplexMatrix, r1: usize, c1: usize, r2: usize, c2: usize) -> C64 {
    if r1 == r2 || c1 == c2 {
        return ZERO;
    }
    let s = if (r1 < r2) == (c1 < c2) { 1.0 } else { -1.0 };
    det(&minor(k, &[r1, r2], &[c1, c2])) * (parity(r1 + c1 + r2 + c2) * s)
}

fn det_gradient(model: &DomainModel, w: &[C64]) -> Vec<C64> {
    let k = bordered(&model.base(), w);
    let (hol, _) = det_slots(model);
    hol.iter().map(|slots| -slots.iter().map(|&(r, c, a)| cofactor1(&k, r, c) * a).sum::<C64>()).collect()
}

fn det_hessian(model: &DomainModel, w: &[C64]) -> ComplexMatrix {
    let k = bordered(&model.base(), w);
    let (hol, anti) = det_slots(model);
    let n = hol.len();
    let mut h = ComplexMatrix::from_fn(n, n, |a, b| {
        let mut s = ZERO;
        for &(r1, c1, x) in &hol[a] {
            for &(r2, c2, y) in &anti[b] {
                s += cofactor2(&k, r1, c1, r2, c2) * (x * y);
            }
        }
        -s
    });
    hermitize(&mut h);
    h
}

fn hermitize(h: &mut ComplexMatrix) {
    let n = h.rows();
    for a in 0..n {
        h[(a, a)] = C64::new(h[(a, a)].re, 0.0);
        for b in a + 1..n {
            let x = (h[(a, b)] + h[(b, a)].conj()) * 0.5;
            h[(a, b)] = x;
            h[(b, a)] = x.conj();
        }
    }
}

/// `[[Z, 𝕀], [−𝕀, Z̄]]`; its Pfaffian squares to `det(𝕀 − Z*Z)` for skew `Z`.
fn pf_matrix(model: &DomainModel, w: &[C64]) -> ComplexMatrix {
    let z = model.base().matrix_of(w).expect("length checked");
    let m = model.m();
    ComplexMatrix::from_fn(2 * m, 2 * m, |r, c| match (r < m, c < m) {
        (true, true) => z[(r, c)],
        (false, false) => z[(r - m, c - m)].conj(),
        (true, false) => {
            if c - m == r {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        }
        (false, true) => {
            if r - m == c {
                C64::new(-1.0, 0.0)
            } else {
                ZERO
            }
        }
    })
}

/// `1 / Pf(M(0))`, making the reduced function equal `+1` at the origin.
fn pf_scale(m: usize) -> f64 {
    parity(m * (m - 1) / 2)
}

fn inversions(seq: &[usize]) -> usize {
    let mut k = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                k += 1;
            }
        }
    }
    k
}

/// Coefficient of the product of the upper entries at `pairs` in `Pf(a)`.
fn pf_coefficient(a: &ComplexMatrix, pairs: &[(usize, usize)]) -> C64 {
    let used: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
    let rest: Vec<usize> = (0..a.rows()).filter(|r| !used.contains(r)).collect();
    let mut seq = used.clone();
    seq.extend_from_slice(&rest);
    let sub = ComplexMatrix::from_fn(rest.len(), rest.len(), |i, j| a[(rest[i], rest[j])]);
    pfaffian(&sub) * parity(inversions(&seq))
}

fn upper_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            v.push((i, j));
        }
    }
    v
}

fn pf_gradient(model: &DomainModel, w: &[C64]) -> Vec<C64> {
    let a = pf_matrix(model, w);
    let c = -pf_scale(model.m()) * core::f64::consts::FRAC_1_SQRT_2;
    upper_pairs(model.m()).into_iter().map(|p| pf_coefficient(&a, &[p]) * c).collect()
}

fn pf_hessian(model: &DomainModel, w: &[C64]) -> ComplexMatrix {
    let a = pf_matrix(model, w);
    let m = model.m();
    let pairs = upper_pairs(m);
    let c = -pf_scale(m) * 0.5;
    let mut h = ComplexMatrix::from_fn(pairs.len(), pairs.len(), |x, y| {
        let (p, q) = pairs[x];
        let (r, s) = pairs[y];
        pf_coefficient(&a, &[(p, q), (m + r, m + s)]) * c
    });
    hermitize(&mut h);
    h
}
