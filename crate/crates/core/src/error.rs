use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain is not strictly mean convex: min sampled boundary H = {min_h:.6e} near {point:?}")]
    NotMeanConvex { min_h: f64, point: Vec<f64> },

    #[error("epsilon ladder must be strictly decreasing within (0, 1), got {0:?}")]
    BadLadder(Vec<f64>),

    #[error("nonlinear solve stalled at rung {rung} (eps = {eps:.3e}); residual history {history:?}")]
    SolverStall {
        rung: usize,
        eps: f64,
        history: Vec<f64>,
    },

    #[error("linear solve failed at rung {rung} (eps = {eps:.3e}): {msg}")]
    LinearSolve { rung: usize, eps: f64, msg: String },

    #[error(
        "solution lost positivity at eps = {eps:.3e}: min interior value {min:.3e} at {point:?}"
    )]
    NegativeInterior { eps: f64, min: f64, point: Vec<f64> },

    #[error(
        "time window [{t1}, {t2}] invalid or too close to extinction (T = {t_max}); \
         pass force = true to evaluate anyway"
    )]
    WindowNearExtinction { t1: f64, t2: f64, t_max: f64 },

    #[error("implicit expression: {0}")]
    Expr(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
