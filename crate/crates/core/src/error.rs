use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("representations are defined over different Lie algebras")]
    AlgebraMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("restricted Killing form is degenerate (smallest singular value ratio {rcond:.3e})")]
    SingularMetric { rcond: f64 },

    #[error("not quasi-classical: leading coefficient is singular (rcond {rcond:.3e})")]
    NotQuasiClassical { rcond: f64 },

    #[error("function is unbounded at infinity (numerator degree {num} > denominator degree {den}); normalize first")]
    NormalizationRequired { num: usize, den: usize },

    #[error("pole hit while evaluating {factor} at u = {u}")]
    Pole {
        factor: String,
        u: num_complex::Complex64,
    },

    #[error("subspace is not closed under the bracket (residual {residual:.3e})")]
    NotClosed { residual: f64 },

    #[error("no crossing parameter found in the scan window\n{landscape}")]
    CrossingNotFound { landscape: String },

    #[error("invalid seed: kappa does not solve the constant classical reflection equation (defect {defect:.3e})")]
    InvalidSeed { defect: f64 },

    #[error("kappa violates the classical reflection equation: complement defect {defect:.3e}")]
    CbybeViolation { defect: f64 },

    #[error("kernel dimension changed from {coarse} to {fine} when adding spectral samples")]
    SamplingInsufficient { coarse: usize, fine: usize },

    #[error("unsupported representation pair: {0}")]
    UnsupportedRepPair(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("boundary matrices do not form a representation (residual {residual:.3e})")]
    NotHomomorphism { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, looking through stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
