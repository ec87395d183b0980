use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("assignment a={a}, b={b}, c={c} violates a + b + c = tau/{denominator}")]
    ConstraintViolation { a: f64, b: f64, c: f64, denominator: u64 },

    #[error("angle {value} is within tolerance of 0 or tau/2")]
    DegenerateAngle { value: f64 },

    #[error("triangle {id} has an angle {value} outside (0, tau/2)")]
    UnrealizableShape { id: String, value: f64 },

    #[error("gluing graph is disconnected: {unreached} triangle(s) unreachable from the seed")]
    DisconnectedSpec { unreached: usize },

    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),

    #[error("fan triangles {first} and {second} overlap (area {area:e})")]
    OverlappingFans { first: String, second: String, area: f64 },

    #[error("isosceles fill triangles collide: {0}")]
    ApexCollision(String),

    #[error("segment {index} crosses the branch cut of the power map")]
    BranchCutCrossing { index: usize },

    #[error("radius ratios ({s}, {t}) do not give a realizable packing triangle")]
    NotRealizable { s: f64, t: f64 },

    #[error("the {n}-doughnut has no hole to fill")]
    HoleAbsent { n: u32 },

    #[error("nothing to render")]
    EmptyScene,

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid diagram: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::InvalidSpec(err.to_string())
    }
}
