use thiserror::Error;

/// Errors produced by the numerical routines and the job runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice basis is (numerically) degenerate")]
    DegenerateLattice,
    #[error("{what} did not converge after {iterations} iterations")]
    ConvergenceFailure { what: &'static str, iterations: usize },
    #[error("argument lies on (or within the guard radius of) a lattice point")]
    PoleAtLatticePoint,
    #[error("value is not a lattice point")]
    NotALatticePoint,
    #[error("curve is singular (discriminant vanishes)")]
    SingularCurve,
    #[error("point is not on the curve (relative residual {residual:e})")]
    NotOnCurve { residual: f64 },
    #[error("z is congruent to -q: the section f_q vanishes there")]
    ZeroOfSection,
    #[error("fiber coordinate is zero")]
    FiberZero,
    #[error("point is not N-torsion for the given N")]
    NotTorsion,
    #[error("declared CM discriminant {declared} contradicts detected {detected}")]
    InconsistentOverride { declared: i64, detected: i64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("curve given both by invariants and by an explicit lattice")]
    ConflictingCurveSpec,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
