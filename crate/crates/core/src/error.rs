use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("cochains live over different operads")]
    MismatchedHandles,
    #[error("insertion slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("arity {0} is not carried by this operad")]
    ArityOutOfRange(usize),
    #[error("entry {entry} is not homogeneous of the declared degree")]
    Inhomogeneous { entry: String },
    #[error("slot signature {0} is not allowed in this operad")]
    BadSignature(String),
    #[error("operad axiom fails: {0}")]
    OperadAxiom(String),
    #[error("not associative: {0}")]
    NotAssociative(String),
    #[error("bimodule axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("m2 is not a multiplication: m2{{m2}} != 0")]
    NotMultiplication,
    #[error("Gerstenhaber square needs even total degree outside characteristic 2, got {0}")]
    OddSquare(i64),
    #[error("cochain does not lie in the ideal")]
    NotInIdeal,
    #[error("bidegree ({0}, {1}) is not interior to the window")]
    Partial(i64, i64),
    #[error("bidegree ({0}, {1}) lies outside the assembled window")]
    OutsideWindow(i64, i64),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("A_k structure needs k >= {needed}, got {k}")]
    KTooSmall { needed: usize, k: usize },
    #[error("structure equation fails at n = {0}")]
    ResidualNonzero(usize),
    #[error("operation m_{arity} has bidegree ({p}, {q}), expected ({arity}, {expected_q})")]
    BadOperation { arity: usize, p: usize, q: i64, expected_q: i64 },
    #[error("algebra data missing arity {0}")]
    MissingArity(usize),
    #[error("obstruction class does not vanish")]
    NonVanishing,
    #[error("Sq of the Massey class is not zero in cohomology (witness in H^({0}, {1}))")]
    SquareNonzero(i64, i64, String),
    #[error("{0}")]
    Unsupported(String),
    #[error("extension failed to re-verify at arity {0}")]
    ExtensionDefect(usize),
}
