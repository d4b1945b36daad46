//! Error type shared by all modules of the crate.

use thiserror::Error;

use crate::product::ObservableId;

/// Everything that can go wrong while validating inputs, constructing
/// measures, or evaluating them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:.6e})")]
    NegativeEigenvalue(f64),

    #[error("trace is numerically zero; cannot normalize")]
    ZeroTrace,

    #[error("trace {0} is too far from one to renormalize")]
    TraceNotOne(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    ConvergenceFailure(usize),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("spectral index {index} out of range for a spectrum of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("function undefined at spectral point {0}")]
    UndefinedAt(f64),

    #[error("observable {0} listed more than once")]
    DuplicateObservable(ObservableId),

    #[error("atom does not belong to the product space")]
    InvalidAtom,

    #[error("product space has {atoms} atoms, exceeding the budget of {budget}")]
    AtomBudgetExceeded { atoms: usize, budget: usize },

    #[error("subset of observables must not be empty")]
    EmptySubset,

    #[error("unknown observable {0}")]
    UnknownId(ObservableId),

    #[error("not a valid permutation")]
    InvalidPermutation,

    #[error("trace has imaginary residue {0:.3e} beyond tolerance")]
    ComplexResidue(f64),

    #[error("observables {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("signed measures live on different product spaces")]
    SpaceMismatch,

    #[error("invalid mixture weights: {0}")]
    BadWeights(String),

    #[error("observable {0} is not registered")]
    UnregisteredId(ObservableId),

    #[error("cylinder sets are not disjoint")]
    NotDisjoint,

    #[error("consistency breach: equal events valued apart by {0:.3e}")]
    ConsistencyViolation(f64),

    #[error("scenario parse error: {0}")]
    ParseError(String),

    #[error("validation of '{name}' failed: {cause}")]
    ValidationError {
        name: String,
        #[source]
        cause: Box<Error>,
    },

    #[error("request references unknown name '{0}'")]
    DanglingReference(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
