use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not an automorphism of {algebra}")]
    UnvalidatedAutomorphism { algebra: String },
    #[error("unknown builtin algebra `{0}`")]
    UnknownName(String),
    #[error("algebra `{0}` does not satisfy the Jacobi identity")]
    NotLie(String),
    #[error("algebra is abelian")]
    AbelianAlgebra,
    #[error("subspace is not stable under sigma")]
    NotSigmaStable,
    #[error("ad(x0) does not restrict to an invertible map on the subspace")]
    AdNotInvertibleOnH,
    #[error("vector does not lie in the subspace")]
    NotInSubspace,
    #[error("graded dimensions have finite order; periods are only detected for infinite order")]
    FiniteOrderInput,
    #[error("no period fits the computed window")]
    NoPeriod,
    #[error("Gröbner computation exceeded the guard of {0} generated polynomials")]
    DegreeGuardExceeded(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable tables differ")]
    VariableMismatch,
    #[error("family ab requires a nonzero parameter a")]
    ZeroParameterA,
    #[error("family ab requires a nonzero parameter b")]
    ZeroParameterB,
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
    #[error("unknown reproduction key `{0}`")]
    UnknownKey(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable diagnostic code, one per variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "E001",
            Error::NotSquare { .. } => "E002",
            Error::SingularMatrix => "E003",
            Error::NotNilpotent => "E004",
            Error::UnvalidatedAutomorphism { .. } => "E005",
            Error::UnknownName(_) => "E006",
            Error::NotLie(_) => "E007",
            Error::AbelianAlgebra => "E008",
            Error::NotSigmaStable => "E009",
            Error::AdNotInvertibleOnH => "E010",
            Error::NotInSubspace => "E011",
            Error::FiniteOrderInput => "E012",
            Error::NoPeriod => "E013",
            Error::DegreeGuardExceeded(_) => "E014",
            Error::UnknownVariable(_) => "E015",
            Error::VariableMismatch => "E016",
            Error::ZeroParameterA => "E017",
            Error::ZeroParameterB => "E018",
            Error::MissingParameter(_) => "E019",
            Error::UnknownKey(_) => "E020",
            Error::Parse(_) => "E021",
        }
    }

    /// Guard trips are internal limits rather than bad input.
    pub fn is_guard_trip(&self) -> bool {
        matches!(self, Error::DegreeGuardExceeded(_))
    }
}
