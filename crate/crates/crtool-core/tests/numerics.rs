use crtool_core::numerics::*;
use crtool_core::rng::SeededRng;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn real(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_major(rows, cols, v.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
}

fn reconstruct(s: &Svd) -> ComplexMatrix {
    let d: Vec<C64> = s.singular_values.iter().map(|&x| c(x, 0.0)).collect();
    s.u.mul(&ComplexMatrix::from_diag(&d)).mul(&s.v.adjoint())
}

#[test]
fn skew_2x2_has_paired_singular_values() {
    let a = real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let s = svd(&a).unwrap();
    assert!((s.singular_values[0] - 1.0).abs() < 1e-14);
    assert!((s.singular_values[1] - 1.0).abs() < 1e-14);
}

#[test]
fn zero_matrix_singular_values() {
    let s = svd(&ComplexMatrix::zeros(3, 2)).unwrap();
    assert_eq!(s.singular_values, vec![0.0, 0.0]);
    assert!(reconstruct(&s).frobenius_norm() == 0.0);
}

#[test]
fn random_rectangular_reconstruction() {
    let mut rng = SeededRng::new(7);
    for (m, n) in [(4, 3), (3, 4), (6, 6), (1, 5), (5, 1)] {
        let a = rng.complex_matrix(m, n);
        let s = svd(&a).unwrap();
        let r = reconstruct(&s).sub(&a).frobenius_norm();
        assert!(r < 1e-12 * a.frobenius_norm(), "{m}x{n}: {r}");
        for w in s.singular_values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let k = m.min(n);
        let uu = s.u.adjoint().mul(&s.u).sub(&ComplexMatrix::identity(k)).frobenius_norm();
        let vv = s.v.adjoint().mul(&s.v).sub(&ComplexMatrix::identity(k)).frobenius_norm();
        assert!(uu < 1e-12 && vv < 1e-12);
    }
}

#[test]
fn svd_rejects_nan() {
    let a = ComplexMatrix::from_fn(2, 2, |i, _| if i == 0 { c(f64::NAN, 0.0) } else { c(1.0, 0.0) });
    assert_eq!(svd(&a).unwrap_err(), crtool_core::Error::NonFinite);
}

#[test]
fn rank_examples() {
    let p = TolerancePolicy::default();
    assert_eq!(rank_with_tol(&ComplexMatrix::identity(3), &p).unwrap(), (3, true));
    assert_eq!(rank_with_tol(&real(2, 2, &[1.0, 0.0, 0.0, 1e-14]), &p).unwrap(), (1, true));
    // A singular value between the two tolerances is flagged.
    assert_eq!(rank_with_tol(&real(2, 2, &[1.0, 0.0, 0.0, 1e-11]), &p).unwrap(), (1, false));
    assert_eq!(rank_with_tol(&ComplexMatrix::zeros(2, 3), &p).unwrap(), (0, true));
}

#[test]
fn kernel_examples() {
    let p = TolerancePolicy::default();
    let k = kernel_basis(&real(2, 2, &[1.0, 0.0, 0.0, 0.0]), &p).unwrap();
    assert_eq!(k.cols(), 1);
    assert!(k[(0, 0)].norm() < 1e-14 && (k[(1, 0)].norm() - 1.0).abs() < 1e-14);
    let mut rng = SeededRng::new(3);
    let full = rng.complex_matrix(4, 4);
    assert_eq!(kernel_basis(&full, &p).unwrap().cols(), 0);
    let wide = rng.complex_matrix(2, 5);
    let k = kernel_basis(&wide, &p).unwrap();
    assert_eq!(k.cols(), 3);
    assert!(wide.mul(&k).frobenius_norm() < 1e-12 * wide.frobenius_norm());
    assert!(k.adjoint().mul(&k).sub(&ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);
}

#[test]
fn signature_examples() {
    let p = TolerancePolicy::default();
    let s = hermitian_signature(&ComplexMatrix::identity(4), &p).unwrap();
    assert_eq!((s.pos, s.zero, s.neg), (4, 0, 0));
    let s = hermitian_signature(&real(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]), &p).unwrap();
    assert_eq!((s.pos, s.zero, s.neg), (1, 1, 1));
    let nh = real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
    assert_eq!(hermitian_signature(&nh, &p).unwrap_err(), crtool_core::Error::NotHermitian);
}

#[test]
fn eigen_reconstructs() {
    let mut rng = SeededRng::new(11);
    let p = TolerancePolicy::default();
    for n in [1, 2, 5, 12] {
        let a = rng.complex_matrix(n, n);
        let h = a.add(&a.adjoint());
        let e = hermitian_eigen(&h, &p).unwrap();
        let d: Vec<C64> = e.values.iter().map(|&x| c(x, 0.0)).collect();
        let r = e.vectors.mul(&ComplexMatrix::from_diag(&d)).mul(&e.vectors.adjoint()).sub(&h);
        assert!(r.frobenius_norm() < 1e-12 * h.frobenius_norm());
    }
}

#[test]
fn pfaffian_squares_to_determinant() {
    let mut rng = SeededRng::new(5);
    for n in [2, 4, 6, 8] {
        let a = rng.complex_matrix(n, n);
        let s = a.sub(&a.transpose());
        let pf = pfaffian(&s);
        let d = det(&s);
        assert!((pf * pf - d).norm() < 1e-10 * d.norm().max(1.0));
    }
    let j = real(2, 2, &[0.0, 2.5, -2.5, 0.0]);
    assert!((pfaffian(&j) - c(2.5, 0.0)).norm() < 1e-15);
}

#[test]
fn dbar_examples() {
    let p = TolerancePolicy::default();
    let b0 = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.25));
    let cst = b0.clone();
    let d = dbar_derivative(|_| Ok(cst.clone()), c(0.3, -0.1), &p).unwrap();
    assert!(d.frobenius_norm() < 1e-12);
    let b = b0.clone();
    let d = dbar_derivative(move |t: C64| Ok(b.scale(t.conj())), c(0.0, 0.0), &p).unwrap();
    assert!(d.sub(&b0).frobenius_norm() < 1e-9);
    // Holomorphic curve: no t̄ dependence.
    let b = b0.clone();
    let d = dbar_derivative(move |t: C64| Ok(b.scale(t * t * t + t)), c(0.2, 0.4), &p).unwrap();
    assert!(d.frobenius_norm() < 1e-8);
    // Mixed polynomial: ∂/∂t̄ (t² t̄²) = 2 t² t̄.
    let t0 = c(0.3, 0.7);
    let d = dbar_derivative(|t: C64| Ok(ComplexMatrix::column_vector(&[t * t * t.conj() * t.conj()])), t0, &p).unwrap();
    assert!((d[(0, 0)] - t0 * t0 * t0.conj() * 2.0).norm() < 1e-9);
}

#[test]
fn principal_angles() {
    let a = ComplexMatrix::from_columns(3, &[vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]]);
    let th = 1e-7f64;
    let b = ComplexMatrix::from_columns(3, &[vec![c(th.cos(), 0.0), c(0.0, th.sin()), c(0.0, 0.0)]]);
    let ang = max_principal_angle(&a, &b).unwrap();
    assert!((ang - th).abs() < 1e-12, "{ang}");
}

fn arb_matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max, 1..=max, any::<u64>()).prop_map(|(m, n, s)| SeededRng::new(s).complex_matrix(m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn singular_values_unitarily_invariant(a in arb_matrix(5), s in any::<u64>()) {
        let u = SeededRng::new(s).unitary(a.rows());
        let s1 = singular_values(&a).unwrap();
        let s2 = singular_values(&u.mul(&a)).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() < 1e-12 * s1[0].max(1.0));
        }
    }

    #[test]
    fn rank_unitarily_invariant(seed in any::<u64>(), m in 2usize..6, n in 2usize..6, r in 0usize..4) {
        let mut rng = SeededRng::new(seed);
        let r = r.min(m).min(n);
        let a = rng.complex_matrix(m, r).mul(&rng.complex_matrix(r, n));
        let p = TolerancePolicy::default();
        let (k1, s1) = rank_with_tol(&a, &p).unwrap();
        let (k2, s2) = rank_with_tol(&rng.unitary(m).mul(&a).mul(&rng.unitary(n)), &p).unwrap();
        prop_assert!(s1 && s2);
        prop_assert_eq!(k1, r);
        prop_assert_eq!(k2, r);
    }

    #[test]
    fn sylvester_inertia(seed in any::<u64>(), n in 1usize..7, npos in 0usize..7, nneg in 0usize..7) {
        let mut rng = SeededRng::new(seed);
        let npos = npos.min(n);
        let nneg = nneg.min(n - npos);
        let d: Vec<C64> = (0..n).map(|i| {
            if i < npos { c(1.0 + rng.uniform(), 0.0) } else if i < npos + nneg { c(-1.0 - rng.uniform(), 0.0) } else { c(0.0, 0.0) }
        }).collect();
        let h = ComplexMatrix::from_diag(&d);
        let p = rng.complex_matrix(n, n).add(&ComplexMatrix::identity(n).scale(c(2.0, 0.0)));
        let g = p.adjoint().mul(&h).mul(&p);
        let pol = TolerancePolicy::default();
        let (s, stable) = hermitian_signature_checked(&g, &pol).unwrap();
        prop_assert!(stable);
        prop_assert_eq!((s.pos, s.zero, s.neg), (npos, n - npos - nneg, nneg));
    }
}
