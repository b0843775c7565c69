use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("undefined gcd: both inputs are zero")]
    UndefinedGcd,

    #[error("zero polynomial not allowed in {0}")]
    ZeroPolynomial(&'static str),

    #[error("non-coprime inputs: common factor {common}")]
    NonCoprime { common: String },

    #[error("input has w-degree 0")]
    ZeroWDegree,

    #[error("reversal bidegree ({against_z},{against_w}) is smaller than the polynomial bidegree ({z},{w})")]
    BidegreeTooSmall { against_z: usize, against_w: usize, z: usize, w: usize },

    #[error("vertical line factor: fiber at z = {re}{im:+}i vanishes identically")]
    VerticalLine { re: f64, im: f64 },

    #[error("ill-conditioned monodromy: {0}")]
    IllConditionedMonodromy(String),

    #[error("polynomial is not self-inversive")]
    NotSelfInversive,

    #[error("invalid matrix function: {0}")]
    InvalidMatrixFunction(String),

    #[error("cutoff M = {cutoff} too small for buffer {buffer}")]
    CutoffTooSmall { cutoff: usize, buffer: usize },

    #[error("no relation found up to bidegree ({0},{1})")]
    NoRelation(usize, usize),

    #[error("point evaluation probe must lie in the open bidisk")]
    ProbeOutsideBidisk,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid input at {path}: {message}")]
    Input { path: String, message: String },

    #[error("not inner: {0}")]
    NotInner(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input { path: path.into(), message: message.into() }
    }
}
