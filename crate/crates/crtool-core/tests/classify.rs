use crtool_core::classify::*;
use crtool_core::domains::{DomainModel, ModelKind};
use crtool_core::Error;
use VerdictValue::*;

fn v(kind: ModelKind, m: usize, n: usize, np: usize, t: bool, mi: bool) -> VerdictValue {
    classify(kind, m, n, np, t, mi).unwrap().value
}

#[test]
fn examples() {
    assert_eq!(v(ModelKind::I, 3, 3, 4, true, true), RegularityGuaranteed);
    assert_eq!(v(ModelKind::I, 3, 3, 5, true, true), NoTransversalMap);
    assert_eq!(v(ModelKind::I, 3, 3, 2, true, true), CounterexampleRegime);
    assert_eq!(v(ModelKind::II, 5, 0, 2, true, true), CounterexampleRegime);
    assert_eq!(v(ModelKind::II, 5, 0, 1, true, true), OutsideTheorem);
    assert_eq!(v(ModelKind::III, 4, 0, 3, false, false), RegularityGuaranteed);
    assert_eq!(v(ModelKind::III, 4, 0, 1, true, true), OutsideTheorem);
    assert_eq!(v(ModelKind::IV, 5, 0, 3, true, true), RegularityGuaranteed);
    assert_eq!(v(ModelKind::IV, 5, 0, 4, true, true), OutsideTheorem);
    assert_eq!(v(ModelKind::IV, 5, 0, 2, false, true), DichotomyRegime);
    assert_eq!(v(ModelKind::IV, 5, 0, 2, true, false), OutsideTheorem);
}

#[test]
fn bad_dimensions() {
    assert_eq!(classify(ModelKind::I, 1, 3, 1, true, true).unwrap_err(), Error::BadDimensions);
    assert_eq!(classify(ModelKind::II, 3, 0, 1, true, true).unwrap_err(), Error::BadDimensions);
    assert_eq!(classify(ModelKind::IV, 3, 0, 3, true, true).unwrap_err(), Error::BadDimensions);
    assert!(classify(ModelKind::IV, 3, 0, 2, true, true).is_ok());
}

#[test]
fn total_with_citations_and_no_quartic_counterexamples() {
    let mut models = Vec::new();
    for m in 2..=6 {
        for n in 2..=6 {
            models.push((ModelKind::I, m, n));
        }
        models.push((ModelKind::III, m, 0));
        models.push((ModelKind::IV, m, 0));
    }
    for m in 4..=6 {
        models.push((ModelKind::II, m, 0));
    }
    for m in 3..=6 {
        models.push((ModelKind::Tube, m, 0));
    }
    for (kind, m, n) in models {
        let d = DomainModel::new(kind, m, n).unwrap();
        let mut seen_guaranteed = false;
        for np in 0..d.ambient_dim() {
            for t in [false, true] {
                for mi in [false, true] {
                    let out = classify(kind, m, n, np, t, mi).unwrap();
                    assert_eq!(out.citation.is_empty(), out.value == OutsideTheorem);
                    if matches!(kind, ModelKind::IV | ModelKind::Tube) {
                        assert_ne!(out.value, CounterexampleRegime);
                        assert_ne!(out.value, NoTransversalMap);
                    } else {
                        // Flags do not matter for I-III.
                        assert_eq!(out, classify(kind, m, n, np, true, true).unwrap());
                    }
                    seen_guaranteed |= out.value == RegularityGuaranteed;
                }
            }
        }
        assert!(seen_guaranteed, "{kind:?} {m} {n}");
        assert_eq!(v(kind, m, n, d.expected_positive(), true, true), RegularityGuaranteed);
    }
}
