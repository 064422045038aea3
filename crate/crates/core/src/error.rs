use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("derivative order exhausted")]
    DerivativeExhausted,
    #[error("top degree")]
    TopDegree,
    #[error("degree overflow: {0} + {1} > 4")]
    DegreeOverflow(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate frame")]
    DegenerateFrame,
    #[error("singular matrix")]
    Singular,
    #[error("domain violation in {func} at value {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("domain violation in {func} at point ({}, {}, {}, {})", point[0], point[1], point[2], point[3])]
    DomainAt { func: &'static str, point: [f64; 4] },
    #[error("determinant is not 1 (det = {0})")]
    NotUnimodular(f64),
    #[error("not a member of {0}")]
    NotInAlgebra(&'static str),
    #[error("ghost degree overflow")]
    GhostOverflow,
    #[error("connection is not dressed: a-block residual {0}")]
    NotDressed(f64),
    #[error("connection is not normal: residual {0}")]
    NotNormal(f64),
    #[error("non-antisymmetric f input")]
    NotAntisymmetric,
    #[error("non-(1,3) signature")]
    Signature,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("invalid scene: {0}")]
    Scene(String),
}

pub type Result<T> = std::result::Result<T, Error>;
