use chrono::NaiveDate;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("dates are not strictly increasing at position {0}")]
    UnorderedDates(usize),
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("non-finite value at position {0}")]
    NonFiniteValue(usize),
    #[error("length mismatch: {what} ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },
    #[error("the two series share no dates")]
    EmptyIntersection,
    #[error("series too short: {len} observations, need at least {required}")]
    SeriesTooShort { len: usize, required: usize },
    #[error("insufficient observations for lag {lag}: have {n}, need at least {required}")]
    InsufficientObservations {
        n: usize,
        lag: usize,
        required: usize,
    },
    #[error("split ratio {0} outside (0, 1]")]
    InvalidRatio(f64),
    #[error("split leaves the training segment empty")]
    EmptyTrain,
    #[error("split leaves the test segment empty")]
    EmptyTestSegment,
    #[error("shape mismatch: design is {rows}x{cols}, target has {target} rows")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        target: usize,
    },
    #[error("design matrix is rank deficient (rank {rank} of {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },
    #[error("argument outside domain: {0}")]
    DomainError(&'static str),
    #[error("continued fraction did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("unrestricted model fits exactly; F statistic undefined")]
    DegenerateResiduals,
    #[error("restricted RSS {restricted} is below unrestricted RSS {unrestricted}")]
    NestingViolation { restricted: f64, unrestricted: f64 },
    #[error("series has zero variance")]
    ConstantSeries,
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("training corpus contains a single label")]
    SingleClassCorpus,
    #[error("headline {0} in the training corpus has no label")]
    UnlabeledHeadline(usize),
    #[error("headline text is empty")]
    EmptyHeadline,
    #[error("nothing to aggregate")]
    EmptyInput,
    #[error("model has {got} weights, expected {expected}")]
    FeatureDimMismatch { got: usize, expected: usize },
    #[error("model weight {0} is not finite")]
    NonFiniteWeight(usize),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySeries => "EmptySeries",
            Error::UnorderedDates(_) => "UnorderedDates",
            Error::DuplicateDate(_) => "DuplicateDate",
            Error::NonFiniteValue(_) => "NonFiniteValue",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::EmptyIntersection => "EmptyIntersection",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::InsufficientObservations { .. } => "InsufficientObservations",
            Error::InvalidRatio(_) => "InvalidRatio",
            Error::EmptyTrain => "EmptyTrain",
            Error::EmptyTestSegment => "EmptyTestSegment",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::DomainError(_) => "DomainError",
            Error::NonConvergence(_) => "NonConvergence",
            Error::DegenerateResiduals => "DegenerateResiduals",
            Error::NestingViolation { .. } => "NestingViolation",
            Error::ConstantSeries => "ConstantSeries",
            Error::EmptyCorpus => "EmptyCorpus",
            Error::SingleClassCorpus => "SingleClassCorpus",
            Error::UnlabeledHeadline(_) => "UnlabeledHeadline",
            Error::EmptyHeadline => "EmptyHeadline",
            Error::EmptyInput => "EmptyInput",
            Error::FeatureDimMismatch { .. } => "FeatureDimMismatch",
            Error::NonFiniteWeight(_) => "NonFiniteWeight",
        }
    }
}
