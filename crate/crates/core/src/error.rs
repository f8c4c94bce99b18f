use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("weight entries {0} and {1} do not differ by an integer")]
    NonIntegralDifference(String, String),
    #[error("weight is not integral")]
    NonIntegral,
    #[error("bottom entry varies across places")]
    NonConstantBottomEntry,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("rank {n} exceeds the orbit enumeration cap {cap}")]
    RankTooLarge { n: usize, cap: usize },
    #[error("weights have different shapes")]
    ShapeMismatch,
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("weight is not k-dominant")]
    NotDominant,
    #[error("the last {0} entries are not all equal")]
    TailNotConstant(usize),
    #[error("weight is not scalar (entries differ)")]
    NotScalarWeight,
    #[error("bottom entry of the base weight must equal the rank {0}")]
    BottomEntryNotRank(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("rank one is not supported here")]
    RankOne,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("no value assigned to generator '{0}'")]
    MissingAssignment(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("Siegel operator needs size at least 2")]
    SizeOne,
    #[error("degree {degree} of '{variable}' exceeds grid bound {bound}")]
    DegreeExceedsGrid { variable: String, degree: i64, bound: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, echoed by the CLI on domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::NonIntegralDifference(..) => "NonIntegralDifference",
            Error::NonIntegral => "NonIntegral",
            Error::NonConstantBottomEntry => "NonConstantBottomEntry",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::RankTooLarge { .. } => "RankTooLarge",
            Error::ShapeMismatch => "ShapeMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotDominant => "NotDominant",
            Error::TailNotConstant(_) => "TailNotConstant",
            Error::NotScalarWeight => "NotScalarWeight",
            Error::BottomEntryNotRank(_) => "BottomEntryNotRank",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::RankOne => "RankOne",
            Error::PoleAtPoint => "PoleAtPoint",
            Error::MissingAssignment(_) => "MissingAssignment",
            Error::Singular => "Singular",
            Error::NotUnimodular => "NotUnimodular",
            Error::SizeOne => "SizeOne",
            Error::DegreeExceedsGrid { .. } => "DegreeExceedsGrid",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
