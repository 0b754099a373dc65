use thiserror::Error;

/// Domain errors raised by the core operations.
///
/// The CLI maps every variant to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("determinant must be 1, got {0}")]
    Determinant(i64),
    #[error("matrix is not Anosov (|trace| = {0} <= 2)")]
    NotAnosov(i64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("malformed permutation: {0}")]
    Permutation(String),
    #[error("malformed cycle notation: {0}")]
    CycleNotation(String),
    #[error("disconnected origami, orbits: {0:?}")]
    Disconnected(Vec<Vec<usize>>),
    #[error("malformed ramification profile: {0}")]
    Profile(String),
    #[error("pillowcase parameters violate: {}", .0.join("; "))]
    Pillowcase(Vec<String>),
    #[error("parity: the double cover needs an even number of punctures, got {0}")]
    Parity(usize),
    #[error("invalid cover: {0}")]
    Cover(String),
    #[error("invalid branch data: {0}")]
    Branching(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("witness does not verify against the origami")]
    WitnessMismatch,
    #[error("homology: {0}")]
    Homology(String),
    #[error("genus must be at least {min}, got {got}")]
    Genus { min: u32, got: u32 },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid generator: {0}")]
    Generator(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
