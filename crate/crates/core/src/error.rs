use thiserror::Error;

use crate::halfint::HalfInt;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not full-dimensional: degree vectors are collinear")]
    NotFullDimensional,
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("genus {genus} exceeds the number of interior lattice points ({max})")]
    GenusTooLarge { genus: u32, max: u64 },
    #[error("quantum integer [m]_y requires m >= 1")]
    ZeroQuantumInteger,
    #[error("half-integer powers: evaluation at -1 undefined")]
    HalfIntegerEvaluation,
    #[error("evaluation is only defined at y = 1 and y = -1, got {0}")]
    UnsupportedEvaluationPoint(i64),
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("degenerate vertex: outgoing vectors are collinear")]
    DegenerateVertex,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("lattice-path engine requires primitive degree")]
    NonPrimitiveDegree,
    #[error("alpha = {alpha} violates the bound alpha <= delta = {delta}")]
    AboveDeltaBound { alpha: HalfInt, delta: HalfInt },
    #[error("{0}")]
    OutOfRange(String),
    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },
    #[error("floor-diagram engine supports only P2 and P1xP1 degrees")]
    UnsupportedShape,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
