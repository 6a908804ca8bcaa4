use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n_qubits must be at least {min}, got {got}")]
    TooFewQubits { min: usize, got: usize },

    #[error("full-space oracle is capped at {cap} qubits (got {got}); use the symmetric sector instead")]
    DimensionCap { cap: usize, got: usize },

    #[error("closed-form control propagator is only available for 3 or 4 qubits, got {0}")]
    UnsupportedQubitCount(usize),

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("xi must be nonnegative, got {0}")]
    NegativeDuration(f64),

    #[error("target excitation {target} out of range 0..={n_qubits}")]
    TargetOutOfRange { target: usize, n_qubits: usize },

    #[error("excitation {a} out of range 0..={n_qubits}")]
    ExcitationOutOfRange { a: usize, n_qubits: usize },

    #[error("qubit index {index} out of range 1..={n_qubits}")]
    QubitIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("order m={m} out of range 0..={n_qubits}")]
    OrderOutOfRange { m: usize, n_qubits: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("unknown parameter `{0}`; valid names: xi1, xi2, alpha1, alpha2, alpha3, phi1, phi2, phi3")]
    UnknownParameter(String),

    #[error("sweep needs at least 3 steps per axis, got {0}")]
    TooFewSteps(usize),

    #[error("sweep axes must be distinct parameters, got `{0}` twice")]
    DuplicateAxis(String),

    #[error("invalid sweep range [{min}, {max}]")]
    InvalidRange { min: f64, max: f64 },

    #[error("block vectors are not orthonormal (defect {0:e})")]
    NonOrthonormalBlock(f64),

    #[error("expected a 2x2 Hermitian matrix")]
    NotHermitian2x2,

    #[error("quadratic fit failed: linear coefficient {linear:e} exceeds {limit:e}; base sequence is not a local optimum in `{param}`")]
    FitFailure { param: String, linear: f64, limit: f64 },

    #[error("trajectory not confined to −1 block: stage {stage} leaks {leakage:e}")]
    ParityLeakage { stage: String, leakage: f64 },

    #[error("bloch trajectory requires a 3-qubit sequence, got n={0}")]
    BlochRequiresThreeQubits(usize),

    #[error("samples per stage must be positive")]
    ZeroSamples,

    #[error("invalid platform parameters: {0}")]
    InvalidPlatform(&'static str),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(&'static str),
}
