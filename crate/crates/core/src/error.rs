use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    /// The inverse action is only defined for `0 <= s <= r`.
    #[error("inverse action undefined: s = {s} exceeds r = {r}")]
    Domain { r: f64, s: f64 },

    #[error("action `{action}`: {value} is not in the image (supremum {supremum:?})")]
    NotInImage {
        action: String,
        value: f64,
        supremum: Option<f64>,
    },

    #[error("action `{action}`: no t in [0, r] solves θ(t, {s}) = {r}")]
    StrictRange { action: String, r: f64, s: f64 },

    #[error("action `{action}`: no t >= 0 solves θ(t, {s}) = {r}")]
    NoRoot { action: String, r: f64, s: f64 },

    #[error("action `{action}`: bisection for θ(t, {s}) = {r} stalled with residual {residual}")]
    NotConverged {
        action: String,
        r: f64,
        s: f64,
        residual: f64,
    },

    #[error("action `{action}`: closed-form inverse {closed} disagrees with bisection {bisected} at (r, s) = ({r}, {s})")]
    InverseMismatch {
        action: String,
        r: f64,
        s: f64,
        closed: f64,
        bisected: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
