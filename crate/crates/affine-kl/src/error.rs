//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by the root-system, Coxeter and character machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The weight sits at the critical level `(delta, lambda + rho) = 0`.
    #[error("critical level: (delta, lambda+rho) = 0")]
    CriticalLevel,

    /// A coroot was requested for an imaginary root.
    #[error("imaginary root has no coroot")]
    ImaginaryCoroot,

    /// The self-verified height cap for the simple-root search was exhausted.
    #[error("height bound exceeded while verifying simple roots (cap {0})")]
    BoundExceeded(i64),

    /// A finite-subsystem operation was applied to an infinite system.
    #[error("integral root system is infinite")]
    NotFinite,

    /// Rationalization requested where it does not apply.
    #[error("rationalization not applicable: {0}")]
    NotApplicable(String),

    /// Coxeter elements from two different integral systems were mixed.
    #[error("elements belong to different Coxeter systems")]
    MixedSystems,

    /// Inverse Kazhdan-Lusztig polynomial requested for incomparable elements.
    #[error("elements are not comparable in Bruhat order")]
    NotComparable,

    /// Enumeration above requires a dominant anchor.
    #[error("anchor weight is not dominant for the enumeration: {0}")]
    NotDominant(String),

    /// Weyl-Kac evaluation requires a dominant integral regular weight.
    #[error("weight is not dominant integral regular: {0}")]
    NotDominantIntegral(String),

    /// Coefficient transport between weights in different chambers.
    #[error("weights lie in different chambers")]
    ChambersDiffer,

    /// Coefficient transport between weights with different integral systems.
    #[error("integral root systems differ: {0}")]
    IntegralityMismatch(String),

    /// A stated precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The enumeration budget certificate failed.
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The Shapovalov oracle guardrail on the weight-space depth.
    #[error("oracle depth exceeded: height {0} > cap {1}")]
    DepthExceeded(i64, i64),

    /// The brute-force oracle only supports specific Cartan data.
    #[error("unsupported for this operation: {0}")]
    Unsupported(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Cartan data failed validation.
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),

    /// Unknown type string.
    #[error("unknown Cartan type: {0}")]
    UnknownType(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable tag, used by the CLI error JSON.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::CriticalLevel => "CriticalLevel",
            Error::ImaginaryCoroot => "ImaginaryCoroot",
            Error::BoundExceeded(_) => "BoundExceeded",
            Error::NotFinite => "NotFinite",
            Error::NotApplicable(_) => "NotApplicable",
            Error::MixedSystems => "MixedSystems",
            Error::NotComparable => "NotComparable",
            Error::NotDominant(_) => "NotDominant",
            Error::NotDominantIntegral(_) => "NotDominantIntegral",
            Error::ChambersDiffer => "ChambersDiffer",
            Error::IntegralityMismatch(_) => "IntegralityMismatch",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::DepthExceeded(_, _) => "DepthExceeded",
            Error::Unsupported(_) => "Unsupported",
            Error::Parse(_) => "ParseError",
            Error::InvalidCartan(_) => "InvalidCartan",
            Error::UnknownType(_) => "UnknownType",
        }
    }
}
