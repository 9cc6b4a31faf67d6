use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree 2m must lie in 2..={max}, got {got}")]
    UnsupportedDegree { got: u32, max: u32 },
    #[error("field of order {p}^{n} is beyond the desk-scale bound")]
    FieldTooLarge { p: u32, n: u32 },
    #[error("modulus polynomial is not irreducible of degree {0}")]
    ReducibleModulus(usize),
    #[error("precision p^{prec} does not fit the coefficient word")]
    PrecisionOverflow { prec: u32 },
    #[error("lattice leaves the working frame; enlarge the window")]
    FrameOverflow,
    #[error("element is not a unit")]
    NotUnit,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hermitian form is degenerate")]
    DegenerateForm,
    #[error("matrix is not hermitian")]
    NotHermitian,
    #[error("subspace is not in {0}")]
    NotInVariety(&'static str),
    #[error("lattice is not a vertex lattice: {0}")]
    NotVertexLattice(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
