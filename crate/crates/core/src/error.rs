use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {arg} is outside the domain")]
    Domain { func: &'static str, arg: f64 },

    /// A complex-valued kernel was evaluated on (or within the exclusion
    /// radius of) one of its singular points.
    #[error("{func}: singular argument {re} + {im}j")]
    SingularArgument { func: &'static str, re: f64, im: f64 },

    #[error("singular point at (x={x}, y={y}, t={t})")]
    Singular { x: f64, y: f64, t: f64 },

    #[error(
        "stencil footprint {footprint} at (x={x}, y={y}, t={t}) reaches the singular set (clearance {clearance})"
    )]
    StencilPlacement {
        x: f64,
        y: f64,
        t: f64,
        footprint: f64,
        clearance: f64,
    },

    #[error("{count} sample point(s) lack stencil clearance, first at {first:?}")]
    Clearance {
        count: usize,
        first: (f64, f64, f64),
        points: Vec<(f64, f64, f64)>,
    },

    #[error("degenerate wave vector: k1 = k2 = 0")]
    DegenerateWave,

    #[error("wave number k = 0: the pattern does not propagate")]
    NoPropagation,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pressure path from the reference node to node ({ix}, {iy}) is blocked by masked nodes")]
    PathFailure { ix: usize, iy: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
