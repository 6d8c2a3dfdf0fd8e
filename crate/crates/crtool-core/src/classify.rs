//! Regularity verdicts for CR-transversal maps from a source hypersurface
//! with `n₊` positive Levi eigenvalues into the smooth boundary part of a
//! model.

use crate::domains::{DomainModel, ModelKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictValue {
    RegularityGuaranteed,
    CounterexampleRegime,
    NoTransversalMap,
    DichotomyRegime,
    OutsideTheorem,
}

impl VerdictValue {
    pub fn name(self) -> &'static str {
        match self {
            VerdictValue::RegularityGuaranteed => "RegularityGuaranteed",
            VerdictValue::CounterexampleRegime => "CounterexampleRegime",
            VerdictValue::NoTransversalMap => "NoTransversalMap",
            VerdictValue::DichotomyRegime => "DichotomyRegime",
            VerdictValue::OutsideTheorem => "OutsideTheorem",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: VerdictValue,
    /// Short justification; empty only for `OutsideTheorem`.
    pub citation: &'static str,
}

const SMOOTH: &str = "CR-transversal maps are smooth on a dense open subset for n+ in {m+n-3, m+n-2}";
const SMOOTH_II: &str = "CR-transversal maps are smooth on a dense open subset for n+ in {2m-7, ..., 2m-4}";
const SMOOTH_III: &str = "CR-transversal maps are smooth on a dense open subset for n+ = m-1";
const SMOOTH_IV: &str = "transversal maps from minimal sources with n+ <= m-2 are smooth on a dense open subset";
const NONE: &str = "no CR-transversal map exists when n+ exceeds the positive Levi count of the target";
const BLOCK_I: &str = "block embeddings with a nowhere smooth entry give nowhere smooth transversal maps";
const BLOCK_II: &str = "skew block embeddings give nowhere smooth transversal maps at n+ = 2m-8";
const SPHERE_III: &str = "quadric embeddings of the sphere give nowhere smooth transversal maps at n+ = m-2";
const DICHOTOMY: &str = "a map that is not transversal sends a minimal source into a single leaf";

fn verdict(value: VerdictValue, citation: &'static str) -> Verdict {
    Verdict { value, citation }
}

fn outside() -> Verdict {
    verdict(VerdictValue::OutsideTheorem, "")
}

/// The verdict for target `kind(m, n)`. The flags only matter for IV and the
/// tube, which share one rule.
pub fn classify(
    kind: ModelKind,
    m: usize,
    n: usize,
    n_plus: usize,
    transversal: bool,
    minimal: bool,
) -> Result<Verdict> {
    use VerdictValue::*;
    let model = DomainModel::new(kind, m, n)?;
    if n_plus >= model.ambient_dim() {
        return Err(Error::BadDimensions);
    }
    let top = model.expected_positive();
    let v = match kind {
        ModelKind::I => {
            if n_plus > top {
                verdict(NoTransversalMap, NONE)
            } else if n_plus + 1 >= top {
                verdict(RegularityGuaranteed, SMOOTH)
            } else {
                verdict(CounterexampleRegime, BLOCK_I)
            }
        }
        ModelKind::II => {
            if n_plus > top {
                verdict(NoTransversalMap, NONE)
            } else if n_plus + 3 >= top {
                verdict(RegularityGuaranteed, SMOOTH_II)
            } else if n_plus + 4 == top {
                verdict(CounterexampleRegime, BLOCK_II)
            } else {
                outside()
            }
        }
        ModelKind::III => {
            if n_plus > top {
                verdict(NoTransversalMap, NONE)
            } else if n_plus == top {
                verdict(RegularityGuaranteed, SMOOTH_III)
            } else if n_plus + 1 == top {
                verdict(CounterexampleRegime, SPHERE_III)
            } else {
                outside()
            }
        }
        ModelKind::IV | ModelKind::Tube => {
            if transversal && minimal && n_plus + 2 <= m {
                verdict(RegularityGuaranteed, SMOOTH_IV)
            } else if !transversal && minimal {
                verdict(DichotomyRegime, DICHOTOMY)
            } else {
                outside()
            }
        }
    };
    Ok(v)
}
