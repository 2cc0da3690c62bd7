use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("matrix is not square ({0}x{1})")]
    NonSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix has full column rank, no kernel vector")]
    FullColumnRank,
    #[error("denominator has zero constant term")]
    ZeroConstantTerm,
    #[error("truncation caps differ ({0} vs {1})")]
    CapMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero period vector in linear set")]
    ZeroPeriod,
    #[error("duplicate period vector in linear set")]
    DuplicatePeriod,
    #[error("semilinear presentation is ambiguous")]
    AmbiguousPresentation,
    #[error("constraint is a mapped set; this operation needs a plain semilinear set")]
    MappedConstraint,
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("letter `{0}` is not in the alphabet")]
    ForeignLetter(String),
    #[error("transition vector is not a unit vector")]
    NonUnitVector,
    #[error("vector automaton transition labeled by the zero vector")]
    ZeroLabel,
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("automaton is not weakly-unambiguous; word `{0}` has two accepting runs")]
    Ambiguous(String),
    #[error("differential equation is trivial")]
    TrivialOde,
    #[error("cannot specialize the distinguished variable `{0}`")]
    DistinguishedVariable(String),
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
