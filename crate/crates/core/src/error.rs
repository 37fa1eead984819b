use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid vertex set: {0}")]
    InvalidVertexSet(String),
    #[error("not a diagram automorphism: {0}")]
    NotAutomorphism(String),
    #[error("unsupported star-action: {0}")]
    UnsupportedAction(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid rational: {0}")]
    InvalidRational(String),
    #[error("integer {0} is too large to factor")]
    TooLarge(String),
    #[error("invalid quadratic form: {0}")]
    InvalidForm(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("inconsistent index data: {0}")]
    Inconsistent(String),
    #[error("no {0}-index data for abstract descriptor")]
    MissingPrimeData(u64),
    #[error("registry entry `{label}` does not apply: {reason}")]
    InapplicableExtension { label: String, reason: String },
    #[error("descriptor kinds differ: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),
    #[error("vertex set {0} is not distinguished")]
    NotDistinguished(String),
    #[error("extension model has no image for class `{0}`")]
    MissingClass(String),
    #[error("ill-formed extension model: {0}")]
    IllFormedModel(String),
    #[error("polynomial division is inexact (internal error)")]
    InexactDivision,
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDiagram(_) => "invalid_diagram",
            Error::InvalidVertexSet(_) => "invalid_vertex_set",
            Error::NotAutomorphism(_) => "not_automorphism",
            Error::UnsupportedAction(_) => "unsupported_action",
            Error::NotPrime(_) => "not_prime",
            Error::InvalidRational(_) => "invalid_rational",
            Error::TooLarge(_) => "too_large",
            Error::InvalidForm(_) => "invalid_form",
            Error::InvalidAlgebra(_) => "invalid_algebra",
            Error::InvalidExtension(_) => "invalid_extension",
            Error::InvalidDescriptor(_) => "invalid_descriptor",
            Error::Inconsistent(_) => "inconsistent",
            Error::MissingPrimeData(_) => "missing_prime_data",
            Error::InapplicableExtension { .. } => "inapplicable_extension",
            Error::KindMismatch(..) => "kind_mismatch",
            Error::NotDistinguished(_) => "not_distinguished",
            Error::MissingClass(_) => "missing_class",
            Error::IllFormedModel(_) => "ill_formed_model",
            Error::InexactDivision => "inexact_division",
            Error::Parse(_) => "parse",
        }
    }
}
