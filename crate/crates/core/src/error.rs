use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration for `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("grid mismatch: {0}")]
    Shape(String),

    #[error("singular parameter `{field}`: {reason}")]
    SingularParameter { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    /// Clausius-Mossotti denominator within the resonance threshold.
    #[error(
        "Mossotti resonance at {} grid point(s) (first index {}); min |denominator| = {min_denominator:e}",
        points.len(),
        points.first().copied().unwrap_or_default()
    )]
    MossottiResonance {
        points: Vec<usize>,
        min_denominator: f64,
    },

    /// Local detuning too close to zero for the adiabatic elimination.
    #[error(
        "singular local detuning at {} grid point(s) (first index {}); min |Δ_l| = {min_abs:e} < {threshold:e}",
        points.len(),
        points.first().copied().unwrap_or_default()
    )]
    SingularDetuning {
        points: Vec<usize>,
        min_abs: f64,
        threshold: f64,
    },

    #[error("ill-conditioned transfer matrix at cell {cell} (x = {position}): {reason}")]
    Conditioning {
        cell: usize,
        position: f64,
        reason: String,
    },

    #[error("numerical blowup after step at t = {time}: {reason}")]
    NumericalBlowup { time: f64, reason: String },

    #[error("no convergence after {} iteration(s); residual history {history:?}", history.len())]
    Convergence { history: Vec<f64> },
}

impl Error {
    /// True for the physics-singularity family (Mossotti resonance, vanishing
    /// local detuning, singular parameters).
    pub fn is_singularity(&self) -> bool {
        matches!(
            self,
            Error::MossottiResonance { .. }
                | Error::SingularDetuning { .. }
                | Error::SingularParameter { .. }
        )
    }
}
