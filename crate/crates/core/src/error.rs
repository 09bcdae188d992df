use thiserror::Error;

/// Every failure a core operation can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KnotError {
    #[error("no pair of non-adjacent edges")]
    NoNonadjacentPairs,
    #[error("no component {0}")]
    BadComponentIndex(usize),
    #[error("bad index {0}")]
    BadIndex(usize),
    #[error("scale factor must be non-zero")]
    ZeroScale,
    #[error("all vertices coincide")]
    DegenerateLink,
    #[error("the link is empty")]
    EmptyLink,
    #[error("principal moments are degenerate; axes chosen arbitrarily")]
    DegenerateInertia,
    #[error("too few beads: {0}")]
    TooFewBeads(String),
    #[error("bad factor {0}")]
    BadFactor(f64),
    #[error("component {0} is closed; join needs open components")]
    JoinOnClosedComponent(usize),
    #[error("component {0} has fewer than 3 vertices and cannot be closed")]
    CloseTooShort(usize),
    #[error("beads {0} and {1} coincide (try jitter)")]
    CoincidentBeads(usize, usize),
    #[error("configuration is not safe (minimum distance {0:.6} < close); try fitto mindist")]
    UnsafeStart(f64),
    #[error("non-adjacent segments touch (try jitter)")]
    TouchingSegments,
    #[error("linking number is not near an integer (residual {0:.4}); try jitter")]
    GenericityFailure(f64),
    #[error("need at least two components")]
    TooFewComponents,
    #[error("projection is not generic: {0} (try jitter)")]
    DegenerateProjection(String),
    #[error("this needs a single closed component")]
    MultiComponent,
    #[error("bad count {0}")]
    BadCount(usize),
    #[error("bad parameters: {0}")]
    BadSpec(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("empty braid word")]
    EmptyWord,
    #[error("twist counts must be non-zero")]
    ZeroTwist,
    #[error("line endpoints coincide")]
    ZeroLength,
    #[error("line {line}: expected 3 values, found {found}")]
    WrongArity { line: usize, found: usize },
    #[error("bad magic; not a native knot file")]
    BadMagic,
    #[error("file is truncated")]
    Truncated,
    #[error("bad tube parameters: {0}")]
    BadTubeParams(String),
    #[error("component {0} is open")]
    OpenComponent(usize),
    #[error("unsupported mode {0}")]
    UnsupportedMode(i64),
    #[error("no open components")]
    NoOpenComponents,
}

pub type Result<T> = std::result::Result<T, KnotError>;
