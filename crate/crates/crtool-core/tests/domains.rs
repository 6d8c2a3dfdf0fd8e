use crtool_core::domains::*;
use crtool_core::numerics::*;
use crtool_core::Error;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn models() -> Vec<DomainModel> {
    let mut v = Vec::new();
    for (m, n) in [(2, 2), (2, 3), (3, 2), (3, 4), (4, 4)] {
        v.push(DomainModel::new(ModelKind::I, m, n).unwrap());
    }
    for m in [4, 5, 6] {
        v.push(DomainModel::new(ModelKind::II, m, 0).unwrap());
    }
    for m in [2, 3, 4] {
        v.push(DomainModel::new(ModelKind::III, m, 0).unwrap());
    }
    for m in [2, 3, 5] {
        v.push(DomainModel::new(ModelKind::IV, m, 0).unwrap());
    }
    for m in [3, 4, 6] {
        v.push(DomainModel::new(ModelKind::Tube, m, 0).unwrap());
    }
    v.push(DomainModel::new(ModelKind::I, 3, 3).unwrap().product_with_line());
    v
}

fn unit(n: usize, i: usize) -> Vec<C64> {
    let mut e = vec![c(0.0, 0.0); n];
    e[i] = c(1.0, 0.0);
    e
}

fn shifted(w: &[C64], e: &[C64], t: C64) -> Vec<C64> {
    w.iter().zip(e).map(|(a, b)| a + b * t).collect()
}

#[test]
fn dimension_table() {
    let t = |k, m, n| {
        let d = DomainModel::new(k, m, n).unwrap();
        (d.ambient_dim(), d.leaf_dim(), d.expected_positive())
    };
    assert_eq!(t(ModelKind::I, 3, 4), (12, 6, 5));
    assert_eq!(t(ModelKind::II, 5, 0), (10, 3, 6));
    assert_eq!(t(ModelKind::III, 4, 0), (10, 6, 3));
    assert_eq!(t(ModelKind::IV, 3, 0), (3, 1, 1));
    assert_eq!(t(ModelKind::Tube, 4, 0), (4, 1, 2));
    assert_eq!(DomainModel::new(ModelKind::II, 3, 0).unwrap_err(), Error::BadDimensions);
    assert_eq!(DomainModel::new(ModelKind::I, 1, 3).unwrap_err(), Error::BadDimensions);
    assert_eq!(DomainModel::new(ModelKind::Tube, 2, 0).unwrap_err(), Error::BadDimensions);
    for m in 2..8 {
        for n in 2..8 {
            let d = DomainModel::new(ModelKind::I, m, n).unwrap();
            assert_eq!(d.expected_positive() + d.leaf_dim() + 1, d.ambient_dim());
        }
        for k in [ModelKind::II, ModelKind::III, ModelKind::IV, ModelKind::Tube] {
            if let Ok(d) = DomainModel::new(k, m, 0) {
                assert_eq!(d.expected_positive() + d.leaf_dim() + 1, d.ambient_dim());
            }
        }
    }
}

#[test]
fn defining_value_examples() {
    let d = DomainModel::new(ModelKind::I, 2, 3).unwrap();
    assert!((defining_value(&d, &ComplexMatrix::zeros(2, 3)).unwrap() + 1.0).abs() < 1e-15);
    let d = DomainModel::new(ModelKind::I, 2, 2).unwrap();
    let a = [c(0.6, 0.0), c(0.0, 0.8)];
    let b = [c(0.0, -1.0), c(0.0, 0.0)];
    assert!(defining_value(&d, &ComplexMatrix::outer_h(&a, &b)).unwrap().abs() < 1e-15);
    let d4 = DomainModel::new(ModelKind::IV, 3, 0).unwrap();
    let z = ComplexMatrix::column_vector(&[c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.0)]);
    assert!(defining_value(&d4, &z).unwrap().abs() < 1e-15);
    let g = complex_gradient(&d4, z.as_slice()).unwrap();
    for (x, y) in g.iter().zip([c(1.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)]) {
        assert!((x - y).norm() < 1e-15);
    }
    assert_eq!(defining_value(&d, &ComplexMatrix::zeros(2, 3)).unwrap_err(), Error::ShapeMismatch);
    let g = complex_gradient(&d, &[c(0.0, 0.0); 4]).unwrap();
    assert!(g.iter().all(|x| x.norm() < 1e-15));
}

#[test]
fn tube_hessian_is_constant() {
    let d = DomainModel::new(ModelKind::Tube, 4, 0).unwrap();
    let w = [c(0.3, 1.0), c(-0.2, 0.5), c(1.1, -2.0), c(0.7, 0.1)];
    let h = complex_hessian(&d, &w).unwrap();
    let want = ComplexMatrix::from_diag(&[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0)]);
    assert!(h.sub(&want).max_abs() == 0.0);
}

#[test]
fn smooth_part_examples() {
    let p = TolerancePolicy::default();
    let d = DomainModel::new(ModelKind::I, 2, 2).unwrap();
    let diag = |a: f64, b: f64| ComplexMatrix::from_diag(&[c(a, 0.0), c(b, 0.0)]);
    assert!(is_smooth_boundary_point(&d, &diag(1.0, 0.5), &p));
    assert!(!is_smooth_boundary_point(&d, &diag(1.0, 1.0), &p));
    assert!(!is_smooth_boundary_point(&d, &diag(0.9, 0.5), &p));
    let t = DomainModel::new(ModelKind::Tube, 3, 0).unwrap();
    let z = ComplexMatrix::column_vector(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(!is_smooth_boundary_point(&t, &z, &p));
}

#[test]
fn sampler_examples() {
    let p = TolerancePolicy::default();
    let d = DomainModel::new(ModelKind::I, 2, 2).unwrap();
    let pt = sample_boundary_point(&d, 1, 0.0).unwrap();
    let s = singular_values(pt.ambient()).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-12 && s[1] < 1e-12);
    assert!(pt.is_canonical());

    let d = DomainModel::new(ModelKind::II, 4, 0).unwrap();
    let pt = sample_boundary_point(&d, 2, 0.5).unwrap();
    let s = singular_values(pt.ambient()).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
    assert!((s[2] - 0.5).abs() < 1e-12 && (s[3] - 0.5).abs() < 1e-12);

    let d = DomainModel::new(ModelKind::IV, 3, 0).unwrap();
    let pt = sample_boundary_point(&d, 3, 0.3).unwrap();
    assert!(pt.defining_value().abs() < 1e-14);
    let nn: f64 = pt.ambient().as_slice().iter().map(|x| x.norm_sqr()).sum();
    assert!(nn < 1.0);
    match pt.provenance() {
        Provenance::Quadric { t, .. } => assert!((t.norm() - 0.3).abs() < 1e-14),
        other => panic!("{other:?}"),
    }
    assert_eq!(sample_boundary_point(&d, 3, 1.0).unwrap_err(), Error::BadDimensions);

    let a = sample_boundary_point(&d, 9, 0.4).unwrap();
    let b = sample_boundary_point(&d, 9, 0.4).unwrap();
    assert_eq!(a, b);
    assert!(BoundaryPoint::from_ambient(&d, ComplexMatrix::zeros(3, 1), None, &p).is_err());
}

#[test]
fn sampled_points_are_smooth_boundary_points() {
    let p = TolerancePolicy::default();
    for d in models() {
        for seed in 0..200u64 {
            let r = 0.95 * (seed % 7) as f64 / 7.0;
            let pt = sample_boundary_point(&d, seed, r).unwrap();
            assert!(pt.defining_value().abs() < 1e-10, "{d:?} {seed}");
            assert!(is_smooth_boundary_point(&d.base(), pt.ambient(), &p));
            let s = singular_values(pt.ambient()).unwrap();
            if d.kind() == ModelKind::II {
                for k in (0..s.len() - 1).step_by(2) {
                    assert!((s[k] - s[k + 1]).abs() < 1e-10, "{s:?}");
                }
            }
        }
    }
}

#[test]
fn provenance_recovery_roundtrip() {
    let p = TolerancePolicy::default();
    for d in models() {
        for seed in 0..20u64 {
            let pt = sample_boundary_point(&d, seed, 0.6).unwrap();
            let back = BoundaryPoint::from_ambient(&d, pt.ambient().clone(), pt.extra(), &p).unwrap();
            assert!(back.provenance().ambient().sub(pt.ambient()).max_abs() < 1e-12);
            let a = pt.canonical(&p).unwrap();
            let b = back.canonical(&p).unwrap();
            assert!(a.ambient().sub(b.ambient()).max_abs() < 1e-9, "{d:?} {seed}");
            if d.kind() != ModelKind::Tube {
                assert!((pt.provenance().offset_size() - back.provenance().offset_size()).abs() < 1e-9);
            }
        }
    }
}

fn fd_gradient(d: &DomainModel, w: &[C64]) -> Vec<C64> {
    (0..w.len())
        .map(|a| {
            let e = unit(w.len(), a);
            let f = |t: C64| {
                let x = reduced_defining_value(d, &shifted(w, &e, t))?;
                Ok(ComplexMatrix::column_vector(&[c(x, 0.0)]))
            };
            d_derivative_with_step(f, c(0.0, 0.0), 1e-3).unwrap()[(0, 0)]
        })
        .collect()
}

fn fd_hessian(d: &DomainModel, w: &[C64]) -> ComplexMatrix {
    let n = w.len();
    let mut h = ComplexMatrix::zeros(n, n);
    for b in 0..n {
        let e = unit(n, b);
        let f = |t: C64| Ok(ComplexMatrix::column_vector(&complex_gradient(d, &shifted(w, &e, t))?));
        let col = dbar_derivative_with_step(f, c(0.0, 0.0), 1e-3).unwrap();
        for a in 0..n {
            h[(a, b)] = col[(a, 0)];
        }
    }
    h
}

#[test]
fn gradient_and_hessian_match_finite_differences() {
    for d in models() {
        for seed in 0..4u64 {
            let pt = sample_boundary_point(&d, seed, 0.5).unwrap();
            let w = pt.coords();
            let g = complex_gradient(&d, &w).unwrap();
            let fd = fd_gradient(&d, &w);
            let scale = norm(&g).max(1e-300);
            let err = norm(&sub_vec(&g, &fd));
            assert!(err < 1e-7 * scale, "{d:?} gradient rel err {}", err / scale);
            let h = complex_hessian(&d, &w).unwrap();
            assert!(hermitian_residual(&h) < 1e-10);
            let err = h.sub(&fd_hessian(&d, &w)).max_abs();
            assert!(err < 1e-6, "{d:?} hessian err {err}");
        }
    }
}

#[test]
fn reduced_function_squares_to_determinant_for_skew() {
    let d = DomainModel::new(ModelKind::II, 5, 0).unwrap();
    for seed in 0..5u64 {
        let pt = sample_boundary_point(&d, seed, 0.5).unwrap();
        let z = pt.ambient().scale(c(0.9, 0.0));
        let w = d.coords_of(&z).unwrap();
        let r = reduced_defining_value(&d, &w).unwrap();
        let full = defining_value(&d, &z).unwrap();
        assert!(r < 0.0);
        assert!((r * r + full).abs() < 1e-12, "{r} {full}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coordinates_roundtrip(seed in any::<u64>(), k in 0usize..5, m in 2usize..6) {
        let kind = [ModelKind::I, ModelKind::II, ModelKind::III, ModelKind::IV, ModelKind::Tube][k];
        if let Ok(d) = DomainModel::new(kind, m.max(4), m) {
            let pt = sample_boundary_point(&d, seed, 0.3).unwrap();
            let w = d.coords_of(pt.ambient()).unwrap();
            prop_assert_eq!(w.len(), d.ambient_dim());
            let z = d.matrix_of(&w).unwrap();
            prop_assert!(z.sub(pt.ambient()).max_abs() < 1e-15);
            // Coordinates are isometric to the Frobenius norm.
            prop_assert!((norm(&w) - pt.ambient().frobenius_norm()).abs() < 1e-12);
        }
    }
}
