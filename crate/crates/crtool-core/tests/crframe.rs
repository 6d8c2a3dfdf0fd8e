use crtool_core::crframe::*;
use crtool_core::domains::*;
use crtool_core::foliation::leaf_frame;
use crtool_core::numerics::*;
use crtool_core::rng::SeededRng;
use crtool_core::Error;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn model(kind: ModelKind, m: usize, n: usize) -> DomainModel {
    DomainModel::new(kind, m, n).unwrap()
}

fn all_models() -> Vec<DomainModel> {
    let mut v = Vec::new();
    for m in 2..=4 {
        for n in 2..=4 {
            v.push(model(ModelKind::I, m, n));
        }
    }
    for m in 4..=6 {
        v.push(model(ModelKind::II, m, 0));
    }
    for m in 2..=5 {
        v.push(model(ModelKind::III, m, 0));
        v.push(model(ModelKind::IV, m, 0));
    }
    for m in 3..=6 {
        v.push(model(ModelKind::Tube, m, 0));
    }
    v
}

#[test]
fn frame_column_counts() {
    let p = TolerancePolicy::default();
    let d = model(ModelKind::IV, 2, 0);
    let z = ComplexMatrix::column_vector(&[c(0.5, 0.0), c(0.0, 0.5)]);
    let pt = BoundaryPoint::from_ambient(&d, z, None, &p).unwrap();
    let f = tangent_frame(&pt).unwrap();
    assert_eq!(f.vectors.shape(), (2, 1));
    let g = pt.gradient().unwrap();
    assert!(dot_u(&g, &f.vectors.column(0)).norm() < 1e-14);
    let d = model(ModelKind::I, 2, 2);
    let pt = sample_boundary_point(&d, 0, 0.0).unwrap();
    assert_eq!(tangent_frame(&pt).unwrap().vectors.shape(), (4, 3));
}

#[test]
fn frames_are_orthonormal_and_tangent() {
    for d in all_models() {
        for seed in 0..10u64 {
            let pt = sample_boundary_point(&d, seed, 0.5).unwrap();
            let f = tangent_frame(&pt).unwrap();
            let k = f.vectors.cols();
            assert!(f.vectors.adjoint().mul(&f.vectors).sub(&ComplexMatrix::identity(k)).max_abs() < 1e-12);
            let g = pt.gradient().unwrap();
            for j in 0..k {
                assert!(dot_u(&g, &f.vectors.column(j)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn signature_examples() {
    let sig = |d: DomainModel, seed| {
        let s = levi_report(&sample_boundary_point(&d, seed, 0.4).unwrap()).unwrap().signature;
        (s.pos, s.zero, s.neg)
    };
    assert_eq!(sig(model(ModelKind::I, 3, 3), 1), (4, 4, 0));
    assert_eq!(sig(model(ModelKind::II, 5, 0), 2), (6, 3, 0));
    assert_eq!(sig(model(ModelKind::IV, 3, 0), 3), (1, 1, 0));
    assert_eq!(sig(model(ModelKind::IV, 2, 0), 3), (0, 1, 0));
}

#[test]
fn signature_matches_table_on_samples() {
    for d in all_models() {
        for seed in 0..40u64 {
            let r = 0.9 * (seed % 5) as f64 / 5.0;
            let rep = levi_report(&sample_boundary_point(&d, seed, r).unwrap()).unwrap();
            let s = rep.signature;
            assert_eq!((s.pos, s.zero, s.neg), (d.expected_positive(), d.leaf_dim(), 0), "{d:?} {seed}");
            assert!(hermitian_residual(&rep.matrix) < 1e-12);
        }
    }
}

#[test]
fn signature_is_independent_of_reference_basis() {
    let p = TolerancePolicy::default();
    for d in all_models() {
        let pt = sample_boundary_point(&d, 5, 0.3).unwrap();
        let a = levi_report(&pt).unwrap().signature;
        let u = SeededRng::new(17).unitary(d.ambient_dim());
        let f = tangent_frame_with_reference(&pt, &u, &p).unwrap();
        let b = levi_report_in_frame(f, &p).unwrap().signature;
        assert_eq!(a, b);
    }
}

#[test]
fn null_space_is_the_leaf() {
    for d in all_models() {
        for seed in 0..10u64 {
            let pt = sample_boundary_point(&d, seed, 0.6).unwrap();
            let null = levi_null_basis(&pt).unwrap();
            let leaf = leaf_frame(&pt).unwrap().leaf_basis;
            let ang = max_principal_angle(&null, &leaf).unwrap();
            assert!(ang < 1e-6, "{d:?} {seed}: {ang}");
        }
    }
}

#[test]
fn null_space_examples() {
    let p = TolerancePolicy::default();
    let d = model(ModelKind::IV, 3, 0);
    let pt = sample_boundary_point(&d, 4, 0.0).unwrap();
    let wbar: Vec<C64> = pt.ambient().as_slice().iter().map(|x| x.conj()).collect();
    let wb = ComplexMatrix::from_columns(3, &[scale_vec(&wbar, c(1.0 / norm(&wbar), 0.0))]);
    assert!(max_principal_angle(&levi_null_basis(&pt).unwrap(), &wb).unwrap() < 1e-6);

    let d = model(ModelKind::Tube, 4, 0);
    let z = ComplexMatrix::column_vector(&[c(0.6, 1.0), c(0.0, -2.0), c(0.8, 0.3), c(1.0, 0.5)]);
    let pt = BoundaryPoint::from_ambient(&d, z, None, &p).unwrap();
    let re = vec![c(0.6, 0.0), c(0.0, 0.0), c(0.8, 0.0), c(1.0, 0.0)];
    let rb = ComplexMatrix::from_columns(4, &[scale_vec(&re, c(1.0 / norm(&re), 0.0))]);
    assert!(max_principal_angle(&levi_null_basis(&pt).unwrap(), &rb).unwrap() < 1e-6);
}

#[test]
fn scalar_levi_values() {
    let d = model(ModelKind::I, 3, 3);
    let pt = sample_boundary_point(&d, 8, 0.5).unwrap();
    let rep = levi_report(&pt).unwrap();
    let null = levi_null_basis(&pt).unwrap();
    let x = null.column(0);
    assert!(scalar_levi_value(&pt, &x, &x).unwrap().norm() < 1e-9);
    let eig = hermitian_eigen(&rep.matrix, &TolerancePolicy::default()).unwrap();
    let top = rep.frame.vectors.mul_vec(&conj_vec(&eig.vectors.column(0)));
    let v = scalar_levi_value(&pt, &top, &top).unwrap();
    assert!(v.re > 1e-3 && v.im.abs() < 1e-12, "{v}");
    let mut rng = SeededRng::new(3);
    for _ in 0..10 {
        let a = rep.frame.vectors.mul_vec(&rng.complex_vec(8));
        let b = rep.frame.vectors.mul_vec(&rng.complex_vec(8));
        let ab = scalar_levi_value(&pt, &a, &b).unwrap();
        let ba = scalar_levi_value(&pt, &b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-10);
    }
    let g = conj_vec(&pt.gradient().unwrap());
    assert_eq!(scalar_levi_value(&pt, &g, &g).unwrap_err(), Error::NotTangent);
}

#[test]
fn vanishing_gradient_is_reported() {
    let d = model(ModelKind::I, 2, 2);
    let p = TolerancePolicy::default();
    let w = vec![c(0.0, 0.0); 4];
    let err = frame_at(&d, &w, &ComplexMatrix::identity(4), None, &p).unwrap_err();
    assert_eq!(err, Error::VanishingGradient);
}
