use thiserror::Error;

/// Every failure the library reports. Variants carry enough context to
/// print a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("frame columns are not in general position")]
    FrameDegenerate,
    #[error("first 3x3 block is singular")]
    SingularBlock,
    #[error("bad labels: {0}")]
    BadLabels(String),
    #[error("degenerate quadratic: {0}")]
    DegenerateQuadratic(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("normal-form coordinates out of the series domain: {0}")]
    CoordsOutOfDomain(String),
    #[error("bracket ratio depends on the partition: {0}")]
    InconsistentRatio(String),
    #[error("no admissible sign vector")]
    NoAdmissibleSigns,
    #[error("not in the domain: {0}")]
    NotInDomain(String),
    #[error("matrix does not preserve the hermitian form: {0}")]
    NotUnitary(String),
    #[error("singular denominator in the group action")]
    SingularDenominator,
    #[error("lattice radius {needed} exceeds the cap {cap}")]
    RadiusExceeded { needed: usize, cap: usize },
    #[error("not in the Siegel upper half space")]
    NotInSiegel,
    #[error("mean state is not ordered: {0}")]
    OrderViolation(String),
    #[error("pre-iteration exhausted after {0} steps")]
    PreIterationExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
