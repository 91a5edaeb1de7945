use thiserror::Error;

/// Errors produced by the core toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity must be at least 1 (factor {factor})")]
    InvalidArity { factor: usize },

    #[error("letter {letter} out of range for arity {arity}")]
    LetterOutOfRange { letter: usize, arity: usize },

    #[error("basis size {size} exceeds the configured cap {cap}")]
    BasisCap { size: usize, cap: usize },

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("factor index {factor} out of range (k = {k})")]
    FactorOutOfRange { factor: usize, k: usize },

    #[error("slot {slot} out of range for factor {factor} (n = {arity})")]
    SlotOutOfRange { slot: usize, factor: usize, arity: usize },

    #[error("arity mismatch: {left:?} vs {right:?}")]
    ArityMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("twist entry at block ({i},{j}) position ({s},{t}) has modulus {modulus}, not unimodular")]
    NotUnimodular { i: usize, j: usize, s: usize, t: usize, modulus: f64 },

    #[error("twist blocks ({i},{j}) and ({j},{i}) violate the adjoint symmetry")]
    TwistSymmetry { i: usize, j: usize },

    #[error("matrix is not Hermitian: anti-Hermitian part has norm {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is indefinite: least eigenvalue {least:.3e} below tolerance {tol:.3e}")]
    Indefinite { least: f64, tol: f64 },

    #[error("tuple is not a member of the polyball: {reason}")]
    NotMember { reason: String },

    #[error("tuple is not in the polyball interior (margin {margin:.3e})")]
    NotInterior { margin: f64 },

    #[error("truncation must be at least 1 for this operation")]
    TruncationTooSmall,

    #[error("factorization precondition failed: least eigenvalue {least:.3e}")]
    FactorizationPrecondition { least: f64 },

    #[error("model space dimension {rank} exceeds the configured cap {cap}")]
    RankCap { rank: usize, cap: usize },

    #[error("subspace solve residual {residual:.3e} above tolerance {tol:.3e} (condition {cond:.3e})")]
    SolveResidual { residual: f64, cond: f64, tol: f64 },

    #[error("columns leave the given range: leakage {leakage:.3e}")]
    RangeLeakage { leakage: f64 },

    #[error("input is not unitary: defect {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("subspace is not jointly invariant: defect {defect:.3e}")]
    NotInvariant { defect: f64 },

    #[error("tail bound {achieved:.3e} not below {requested:.3e} within grade cap {cap}")]
    TailNotCertifiable { requested: f64, achieved: f64, cap: usize },

    #[error("multi-analyticity residual {residual:.3e} above tolerance {tol:.3e}")]
    NotMultiAnalytic { residual: f64, tol: f64 },

    #[error("projection onto the analytic part is not injective (least singular value {sigma:.3e})")]
    NotInjective { sigma: f64 },

    #[error("defect ranks differ beyond tolerance: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("unknown tolerance name `{0}`")]
    UnknownTolerance(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
