use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("pole at s = {s}: denominator {denominator} vanishes")]
    Pole { s: String, denominator: String },
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("work limit exceeded: {required} evaluations required, limit {limit}")]
    WorkLimit { required: u128, limit: u128 },
    #[error("singular base solution {tuple:?}: gradient vanishes mod p")]
    SingularPoint { tuple: Vec<u64> },
    #[error("arity error: expected {expected} variables, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("unsupported element: {0}")]
    UnsupportedElement(String),
    #[error("prime {0} is excluded from theorem mode (p = 2 or 3)")]
    SmallPrime(u64),
    #[error("prime {0} is 1 mod 6; theorem mode needs p = 5 mod 6")]
    PrimeOneModSix(u64),
    #[error("g(u) = -u^3 + {b}u + {c} is reducible mod {p}")]
    ReducibleCubic { b: i64, c: i64, p: u64 },
}

impl Error {
    /// Stable short code for reports and exit-code mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::NotPrime(_) => "not_prime",
            Error::Arithmetic(_) => "arithmetic",
            Error::Pole { .. } => "pole",
            Error::UnsupportedDomain(_) => "unsupported_domain",
            Error::WorkLimit { .. } => "work_limit",
            Error::SingularPoint { .. } => "singular_point",
            Error::Arity { .. } => "arity",
            Error::Precondition(_) => "precondition",
            Error::UnsupportedRegime(_) => "unsupported_regime",
            Error::UnsupportedElement(_) => "unsupported_element",
            Error::SmallPrime(_) => "small_prime",
            Error::PrimeOneModSix(_) => "prime_one_mod_six",
            Error::ReducibleCubic { .. } => "reducible_cubic",
        }
    }
}
