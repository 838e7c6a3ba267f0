use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mixed fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not prime or does not fit the supported modulus range")]
    BadModulus(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("non-invertible power series (constant term is zero)")]
    NonInvertibleSeries,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("main assumption fails: contraction rank {rank} < 9")]
    MainAssumptionFailed { rank: usize },
    #[error("kernel has dimension {got}, expected {expected}")]
    KernelDimension { expected: usize, got: usize },
    #[error("points in special position: cubic system has dimension {dim}")]
    SpecialPosition { dim: usize },
    #[error("syzygy space has dimension {dim}, expected 3")]
    SyzygyDegeneracy { dim: usize },
    #[error("points must be pairwise distinct")]
    RepeatedPoint,
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
    #[error("no leg named for side {0}")]
    UnknownSide(String),
    #[error("operation requires a prime-field tensor or an explicit scan prime")]
    ScanFieldRequired,
    #[error("base points are not all rational over the working field")]
    NonRationalBasePoints,
    #[error("double-six pairing is not unique: configuration degenerate")]
    PairingDegenerate,
    #[error("Schur map kernel has dimension {dim}, expected 1")]
    SchurDegenerate { dim: usize },
    #[error("Schur quadric is degenerate (det = 0)")]
    QuadricDegenerate,
    #[error("no substitution convention matches the cubic correspondence")]
    NoConvention,
    #[error("twist {twist} lies outside both resolution regimes for dims {dims:?}")]
    TwistOutOfRange { twist: i64, dims: [usize; 3] },
    #[error("base locus is empty for dims {dims:?} (d1+d2 < d3+1)")]
    GammaEmpty { dims: [usize; 3] },
    #[error("all sample points lie on the support: inconclusive")]
    Inconclusive,
    #[error("class fails n^2 = sum a_i^2 + 4, 3n = sum a_i + 6")]
    NotNn2,
    #[error("reduction exceeded {0} steps")]
    NonTermination(usize),
    #[error("expected {expected} independent sections, found {got}")]
    SectionCount { expected: usize, got: usize },
    #[error("bad reduction at prime {p}: {why}")]
    BadReduction { p: u64, why: String },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
