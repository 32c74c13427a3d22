use thiserror::Error;

/// Errors raised by the engine. Parse errors are input errors; the rest
/// signal invalid requests or a falsified algebraic identity.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("strand count must be at least 1, got {0}")]
    NoStrands(i64),
    #[error("token {token:?} is not a nonzero integer")]
    BadToken { token: String },
    #[error("letter {letter} is out of range for {strands} strands")]
    LetterOutOfRange { letter: i64, strands: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("slice {slice}: {message}")]
    InvalidSlice { slice: usize, message: String },
    #[error("word is not closed: it ends with {found} strands but starts with {expected}")]
    NotClosed { expected: usize, found: usize },
    #[error("expected {expected} orientation flags, got {found}")]
    Orientation { expected: usize, found: usize },
    #[error("invalid crossing order: {0}")]
    CrossingOrder(String),
    #[error("diagram has {0} crossings; at most {max} are supported", max = crate::diagram::MAX_CROSSINGS)]
    TooManyCrossings(usize),
    #[error("state has {found} bits but the diagram has {expected} crossings")]
    StateLength { expected: usize, found: usize },
    #[error("crossing {0} is already 1-resolved")]
    AlreadyResolved(usize),
    #[error("labeling does not match circle {circle}: {message}")]
    LabelMismatch { circle: usize, message: String },
    #[error("states differ in {0} bits, expected exactly one raised bit")]
    BitDistance(usize),
    #[error("composition of consecutive differentials is nonzero ({0})")]
    NonzeroComposition(String),
    #[error("differential entry changes f by {shift}, expected 0 or -2")]
    FiltrationShift { shift: i64 },
    #[error("no generators in quantum grading {0}")]
    EmptyGrading(i64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("input is not a braid closure")]
    NotBraid,
    #[error("not a positive stabilization: {0}")]
    NotStabilization(String),
    #[error("invalid arc subset: {0}")]
    ArcSubset(String),
    #[error("undecorated configuration: {0}")]
    Decoration(String),
    #[error("moduli check failed: {0}")]
    Moduli(String),
    #[error("cannot read {0}")]
    Io(String),
}

impl Error {
    /// Whether the error comes from malformed or unreadable input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NoStrands(_)
                | Error::BadToken { .. }
                | Error::LetterOutOfRange { .. }
                | Error::Syntax { .. }
                | Error::InvalidSlice { .. }
                | Error::NotClosed { .. }
                | Error::Orientation { .. }
                | Error::CrossingOrder(_)
                | Error::TooManyCrossings(_)
                | Error::NotBraid
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
