use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Error {
    NonFinite,
    ShapeMismatch,
    InvalidPolicy,
    Singular,
    NotHermitian,
    EvaluationFailed,
    BadDimensions,
    NotOnBoundary,
    VanishingGradient,
    UnstableSignature,
    UnstableRank,
    NotTangent,
    DegenerateSvd,
    LeftSmoothPart,
    NotLeafVector,
    NotSliceVector,
    NotCanonicalPoint,
    SourceMismatch,
    CayleySingular,
    PhiOutOfRange,
    NotUnitary,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            Error::NonFinite => "matrix has non-finite entries",
            Error::ShapeMismatch => "shape does not match the model",
            Error::InvalidPolicy => "tolerances must be positive with rel_rank_tol > stability_check_tol",
            Error::Singular => "matrix is numerically singular",
            Error::NotHermitian => "matrix is not Hermitian within tolerance",
            Error::EvaluationFailed => "curve evaluation failed",
            Error::BadDimensions => "dimensions outside the model's range",
            Error::NotOnBoundary => "point is not on the smooth boundary part",
            Error::VanishingGradient => "defining function has vanishing gradient",
            Error::UnstableSignature => "signature differs between the two tolerances",
            Error::UnstableRank => "rank differs between the two tolerances",
            Error::NotTangent => "vector is not complex tangent",
            Error::DegenerateSvd => "singular value cluster at 1 is ambiguous",
            Error::LeftSmoothPart => "offset leaves the smooth boundary part",
            Error::NotLeafVector => "vector is not tangent to the leaf",
            Error::NotSliceVector => "vector is not in the slice span",
            Error::NotCanonicalPoint => "point is not a canonical leaf base point",
            Error::SourceMismatch => "point does not belong to the map's source",
            Error::CayleySingular => "Cayley denominator vanishes",
            Error::PhiOutOfRange => "placeholder CR function must satisfy |φ| < 1",
            Error::NotUnitary => "parameter matrix is not unitary",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
