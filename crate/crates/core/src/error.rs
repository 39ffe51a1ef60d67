use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}:{line}: {msg}")]
    MeshParse { path: PathBuf, line: usize, msg: String },

    #[error("invalid mesh: {0}")]
    MeshTopology(String),

    #[error("unsupported quadrature degree {0} (supported: 2, 4, 6)")]
    Quadrature(usize),

    #[error("point ({x}, {y}) lies outside the mesh")]
    PointOutside { x: f64, y: f64 },

    #[error(
        "step {step}: fixed-point iteration did not converge in {iters} iterations \
         (last update norm {last_update_norm:.3e})"
    )]
    NonConvergence { step: usize, iters: usize, last_update_norm: f64 },

    #[error("step {step}: fixed-point iterate diverged (norm {norm:.3e} at iteration {iter})")]
    Divergence { step: usize, iter: usize, norm: f64 },

    #[error("run aborted after {completed} completed steps: {source}")]
    RunAborted {
        completed: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("time-step bracket [{lo:e}, {hi:e}] does not straddle the threshold ({detail}); widen it")]
    Bracket { lo: f64, hi: f64, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
