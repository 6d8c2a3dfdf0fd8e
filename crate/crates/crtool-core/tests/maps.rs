use crtool_core::crframe::*;
use crtool_core::domains::*;
use crtool_core::foliation::leaf_frame;
use crtool_core::maps::*;
use crtool_core::nu::NuConfig;
use crtool_core::numerics::*;
use crtool_core::rng::SeededRng;
use crtool_core::Error;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn model(kind: ModelKind, m: usize, n: usize) -> DomainModel {
    DomainModel::new(kind, m, n).unwrap()
}

fn policy() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn unitary_specs(rng: &mut SeededRng) -> Vec<MapSpec> {
    vec![
        MapSpec::UnitaryI { u: rng.unitary(3), v: rng.unitary(2) },
        MapSpec::UnitaryII { u: rng.unitary(5) },
        MapSpec::UnitaryIII { u: rng.unitary(3) },
        MapSpec::PermutationPhaseIV { perm: vec![2, 0, 3, 1], phase: C64::from_polar(1.0, 0.7) },
    ]
}

fn embedding_specs(phi: C64) -> Vec<MapSpec> {
    vec![
        MapSpec::BlockEmbedI { m: 2, n: 3, phi: Phi::Constant(phi) },
        MapSpec::BlockEmbedII { m: 4, phi: Phi::Constant(phi) },
        MapSpec::SphereEmbedIII { m: 3, phi: Phi::Constant(phi) },
    ]
}

#[test]
fn identity_unitary_is_identity() {
    let d = model(ModelKind::I, 3, 2);
    let pt = sample_boundary_point(&d, 1, 0.4).unwrap();
    let spec = MapSpec::UnitaryI { u: ComplexMatrix::identity(3), v: ComplexMatrix::identity(2) };
    let q = apply_map(&spec, &pt).unwrap();
    assert!(q.ambient().sub(pt.ambient()).max_abs() < 1e-15);
}

#[test]
fn invalid_specs_are_rejected() {
    let mut u = ComplexMatrix::identity(3);
    u[(0, 0)] = c(1.1, 0.0);
    assert_eq!(MapSpec::UnitaryIII { u }.validate().unwrap_err(), Error::NotUnitary);
    let bad = MapSpec::PermutationPhaseIV { perm: vec![0, 0, 1], phase: c(1.0, 0.0) };
    assert_eq!(bad.validate().unwrap_err(), Error::NotUnitary);
    let spec = MapSpec::UnitaryII { u: ComplexMatrix::identity(5) };
    let pt = sample_boundary_point(&model(ModelKind::II, 4, 0), 0, 0.0).unwrap();
    assert_eq!(apply_map(&spec, &pt).unwrap_err(), Error::SourceMismatch);
    let spec = MapSpec::BlockEmbedI { m: 2, n: 2, phi: Phi::Constant(c(1.0, 0.0)) };
    let pt = sample_boundary_point(&model(ModelKind::I, 2, 2), 0, 0.0).unwrap();
    assert_eq!(apply_map(&spec, &pt).unwrap_err(), Error::PhiOutOfRange);
}

#[test]
fn images_are_smooth_boundary_points() {
    let mut rng = SeededRng::new(3);
    let mut specs = unitary_specs(&mut rng);
    specs.extend(embedding_specs(c(0.5, -0.2)));
    specs.push(MapSpec::CayleyTubeToIV { m: 4 });
    specs.push(MapSpec::SphereEmbedIII {
        m: 4,
        phi: Phi::Polynomial(vec![(vec![1, 0, 0], c(0.4, 0.0)), (vec![0, 2, 1], c(0.0, 0.3))]),
    });
    for spec in specs {
        let src = spec.source().unwrap();
        let tgt = spec.target().unwrap();
        for seed in 0..200u64 {
            let pt = sample_boundary_point(&src, seed, 0.8 * (seed % 4) as f64 / 4.0).unwrap();
            let q = apply_map(&spec, &pt).unwrap();
            assert_eq!(*q.model(), tgt);
            assert!(is_smooth_boundary_point(&tgt, q.ambient(), &policy()), "{spec:?}");
        }
    }
}

#[test]
fn cayley_example() {
    let mut z = vec![c(0.0, 0.0); 4];
    z[0] = c(1.0, 0.0);
    z[3] = c(1.0, 0.0);
    let w = cayley(&z).unwrap();
    let want = [c(2.0 / 3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0 / 3.0)];
    assert!(norm(&sub_vec(&w, &want)) < 1e-15);
    let d = model(ModelKind::IV, 4, 0);
    let rho = defining_value(&d, &ComplexMatrix::column_vector(&w)).unwrap();
    assert!(rho.abs() < 1e-12);
    // F(iz + 𝐢) = 0 at z = (0, 0, 0, −1).
    let mut s = vec![c(0.0, 0.0); 4];
    s[3] = c(-1.0, 0.0);
    assert_eq!(cayley(&s).unwrap_err(), Error::CayleySingular);
}

#[test]
fn cayley_jacobian_has_full_rank() {
    let spec = MapSpec::CayleyTubeToIV { m: 5 };
    let src = spec.source().unwrap();
    for seed in 0..100u64 {
        let pt = sample_boundary_point(&src, seed, 0.5).unwrap();
        let z = pt.coords();
        let cols: Vec<Vec<C64>> =
            (0..5).map(|j| spec.differential(&z, &ComplexMatrix::identity(5).column(j)).unwrap()).collect();
        let s = singular_values(&ComplexMatrix::from_columns(5, &cols)).unwrap();
        assert!(s[4] > 1e-6, "{s:?}");
        let q = apply_map(&spec, &pt).unwrap();
        assert!(q.defining_value().abs() < 1e-8);
    }
}

#[test]
fn pushforwards_are_tangent() {
    let mut rng = SeededRng::new(4);
    let mut specs = unitary_specs(&mut rng);
    specs.extend(embedding_specs(c(0.0, 0.9)));
    specs.push(MapSpec::CayleyTubeToIV { m: 4 });
    specs.push(MapSpec::BlockEmbedI {
        m: 2,
        n: 2,
        phi: Phi::Polynomial(vec![(vec![1, 0, 0, 1], c(0.3, 0.1)), (vec![0, 1, 0, 0], c(0.2, 0.0))]),
    });
    for spec in specs {
        let src = spec.source().unwrap();
        for seed in 0..10u64 {
            let pt = sample_boundary_point(&src, seed, 0.3).unwrap();
            let q = apply_map(&spec, &pt).unwrap();
            let g = q.gradient().unwrap();
            let frame = tangent_frame(&pt).unwrap();
            for v in frame.vectors.columns() {
                let hv = pushforward_cr(&spec, &pt, &v).unwrap();
                assert!(dot_u(&g, &hv).norm() < 1e-8 * norm(&g), "{spec:?}");
            }
        }
    }
    let pt = sample_boundary_point(&model(ModelKind::IV, 4, 0), 1, 0.0).unwrap();
    let spec = MapSpec::PermutationPhaseIV { perm: vec![0, 1, 2, 3], phase: c(1.0, 0.0) };
    let normal = conj_vec(&pt.gradient().unwrap());
    assert_eq!(pushforward_cr(&spec, &pt, &normal).unwrap_err(), Error::NotTangent);
}

#[test]
fn polynomial_phi_differential_matches_finite_differences() {
    let phi = Phi::Polynomial(vec![(vec![2, 1], c(0.1, 0.2)), (vec![0, 3], c(-0.2, 0.0)), (vec![0, 0], c(0.1, 0.0))]);
    let z = [c(0.3, -0.1), c(0.2, 0.4)];
    let x = [c(0.7, 0.2), c(-0.1, 0.5)];
    let h = 1e-6;
    let zp: Vec<C64> = z.iter().zip(&x).map(|(a, b)| a + b * h).collect();
    let zm: Vec<C64> = z.iter().zip(&x).map(|(a, b)| a - b * h).collect();
    let fd = (phi.value(&zp).unwrap() - phi.value(&zm).unwrap()) / (2.0 * h);
    assert!((fd - phi.differential(&z, &x).unwrap()).norm() < 1e-9);
}

#[test]
fn unitary_maps_preserve_signature() {
    let mut rng = SeededRng::new(5);
    for spec in unitary_specs(&mut rng) {
        let src = spec.source().unwrap();
        let pt = sample_boundary_point(&src, 2, 0.5).unwrap();
        let a = levi_report(&pt).unwrap().signature;
        let b = levi_report(&apply_map(&spec, &pt).unwrap()).unwrap().signature;
        assert_eq!(a, b);
    }
}

#[test]
fn cayley_maps_leaves_to_leaves() {
    let spec = MapSpec::CayleyTubeToIV { m: 4 };
    for seed in 0..10u64 {
        let pt = sample_boundary_point(&spec.source().unwrap(), seed, 0.4).unwrap();
        let leaf = leaf_frame(&pt).unwrap().leaf_basis.column(0);
        let img = pushforward_cr(&spec, &pt, &leaf).unwrap();
        let q = apply_map(&spec, &pt).unwrap();
        let target_leaf = leaf_frame(&q).unwrap().leaf_basis;
        let img = scale_vec(&img, c(1.0 / norm(&img), 0.0));
        let ang = max_principal_angle(&ComplexMatrix::from_columns(4, &[img]), &target_leaf).unwrap();
        assert!(ang < 1e-5, "{ang}");
    }
}

#[test]
fn block_images_keep_block_structure() {
    let spec = MapSpec::BlockEmbedI { m: 2, n: 3, phi: Phi::Constant(c(0.5, 0.0)) };
    let pt = sample_boundary_point(&model(ModelKind::I, 2, 3), 4, 0.0).unwrap();
    let q = apply_map(&spec, &pt).unwrap();
    let s = singular_values(q.ambient()).unwrap();
    assert!((s[0] - 1.0).abs() < 1e-12 && s[1] < 1.0 - 1e-6);
    let tgt = spec.target().unwrap();
    for v in tangent_frame(&pt).unwrap().vectors.columns() {
        let x = tgt.matrix_of(&pushforward_cr(&spec, &pt, &v).unwrap()).unwrap();
        for j in 0..4 {
            assert_eq!(x[(2, j)], c(0.0, 0.0));
        }
        for i in 0..3 {
            assert_eq!(x[(i, 3)], c(0.0, 0.0));
        }
    }
}

#[test]
fn transversality() {
    let mut rng = SeededRng::new(6);
    let mut specs = unitary_specs(&mut rng);
    specs.push(MapSpec::CayleyTubeToIV { m: 4 });
    for k in 0..10 {
        let phi = C64::from_polar(0.09 * k as f64, 1.3 * k as f64);
        specs.extend(embedding_specs(phi));
    }
    for spec in &specs {
        let src = spec.source().unwrap();
        for seed in 0..3u64 {
            let pt = sample_boundary_point(&src, seed, 0.5).unwrap();
            assert!(cr_transversality_check(spec, &pt).unwrap(), "{spec:?}");
        }
    }
    let target = sample_boundary_point(&model(ModelKind::I, 2, 2), 0, 0.0).unwrap();
    let spec = MapSpec::Constant { source: model(ModelKind::IV, 3, 0), target };
    let pt = sample_boundary_point(&model(ModelKind::IV, 3, 0), 1, 0.2).unwrap();
    assert!(!cr_transversality_check(&spec, &pt).unwrap());
}

#[test]
fn nu_is_invariant() {
    let mut rng = SeededRng::new(7);
    let cfg = NuConfig::default();
    for (spec, want) in [
        (MapSpec::UnitaryI { u: rng.unitary(3), v: rng.unitary(3) }, 2),
        (MapSpec::UnitaryII { u: rng.unitary(5) }, 2),
        (MapSpec::PermutationPhaseIV { perm: vec![3, 1, 0, 2], phase: c(0.0, 1.0) }, 0),
    ] {
        let src = spec.source().unwrap();
        for r in [0.0, 0.5] {
            let pt = sample_boundary_point(&src, 1, r).unwrap();
            assert_eq!(nu_invariance_probe(&spec, &pt, &cfg).unwrap(), (want, want));
        }
    }
    let spec = MapSpec::CayleyTubeToIV { m: 4 };
    let pt = sample_boundary_point(&spec.source().unwrap(), 1, 0.0).unwrap();
    assert_eq!(nu_invariance_probe(&spec, &pt, &cfg).unwrap_err(), Error::SourceMismatch);
}

#[test]
fn sphere_model() {
    let d = DomainModel::sphere(3).unwrap();
    assert_eq!((d.leaf_dim(), d.expected_positive(), d.ambient_dim()), (0, 2, 3));
    let pt = sample_boundary_point(&d, 1, 0.0).unwrap();
    assert!((norm(pt.ambient().as_slice()) - 1.0).abs() < 1e-14);
    let s = levi_report(&pt).unwrap().signature;
    assert_eq!((s.pos, s.zero, s.neg), (2, 0, 0));
    assert_eq!(crtool_core::nu::nu_estimate(&pt, &NuConfig::default()).unwrap_err(), Error::BadDimensions);
    assert_eq!(DomainModel::sphere(1).unwrap_err(), Error::BadDimensions);
}
