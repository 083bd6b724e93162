use thiserror::Error;

pub type Result<T, E = MildError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MildError {
    #[error("ring error: {0}")]
    Ring(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("degree {degree} is beyond the degree cap {cap}")]
    BeyondCap { degree: usize, cap: usize },

    #[error("elements live in different algebras")]
    MixedAmbients,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("ideal is not d-stable: d({generator}) leaves the ideal in degree {degree}")]
    NotDStable { generator: String, degree: usize },

    #[error("hypothesis ({condition}) violated in degree {degree}: {detail}")]
    HypothesisViolated { condition: String, degree: usize, detail: String },

    #[error("construction incomplete: certified only up to degree {certified}")]
    WindowExhausted { certified: usize },

    #[error("map is not surjective in degree {degree}")]
    NotSurjective { degree: usize },

    #[error("map is not a quasi-isomorphism in degree {degree}")]
    NotQuasiIso { degree: usize },

    #[error("lifting failed at generator {generator}")]
    LiftFailed { generator: String },

    #[error("not mild: {0}")]
    NotMild(String),

    #[error("invalid request: {0}")]
    Invalid(String),
}

impl MildError {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            MildError::Parse { .. }
            | MildError::UnknownName(_)
            | MildError::Degree(_)
            | MildError::Ring(_)
            | MildError::Invalid(_) => 2,
            MildError::HypothesisViolated { .. }
            | MildError::NotDStable { .. }
            | MildError::NotSurjective { .. }
            | MildError::NotQuasiIso { .. }
            | MildError::NotMild(_)
            | MildError::NotChainMap(_)
            | MildError::InvalidAlgebra(_) => 3,
            MildError::WindowExhausted { .. } => 4,
            _ => 1,
        }
    }
}
