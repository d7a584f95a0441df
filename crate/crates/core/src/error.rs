use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every precondition violation raised by the library.
///
/// Each variant belongs to exactly one module; [`Error::module`] reports
/// which, so a front end can say who rejected the input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count N must be even and at least 2, got {0}")]
    InvalidModeCount(i64),
    #[error("mode index {index} outside [-{half}, {half}]")]
    ModeOutOfRange { index: i64, half: i64 },
    #[error("quadruple ({0}, {1}, {2}, {3}) is not resonant: n1 + n2 != n3 + n4")]
    NonResonant(i64, i64, i64, i64),
    #[error("norm exponent must be >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("vector length {got} does not match grid with {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("viscosity must be positive and finite, got {0}")]
    InvalidViscosity(f64),
    #[error("time must be nonnegative and finite, got {0}")]
    NegativeTime(f64),
    #[error("grid mismatch: data has N = {data}, scheme has N = {scheme}")]
    GridMismatch { data: usize, scheme: usize },
    #[error("time step must be positive and finite, got {0}")]
    NonPositiveStep(f64),
    #[error("time step {dt} violates the stability bound dt * 4 / h^2 <= 0.5 (value {ratio})")]
    UnstableStep { dt: f64, ratio: f64 },
    #[error("cutoff {cutoff} outside [0, {half}]")]
    CutoffOutOfRange { cutoff: i64, half: i64 },

    #[error("time horizon must be positive and finite, got {0}")]
    NonPositiveHorizon(f64),
    #[error("panel count must be even and at least 2, got {0}")]
    InvalidPanels(usize),
    #[error("quadrature did not reach relative tolerance {tol} within {panels} panels")]
    QuadratureNotConverged { tol: f64, panels: usize },

    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("alpha = {0} is not below 1/3: the q_h(n) ~ N^(3 alpha - 1) estimate only decays for alpha < 1/3")]
    AlphaTooLarge(f64),
    #[error("lambda must lie in (0, 1/4), got {0}")]
    InvalidLambda(f64),
    #[error("band half-width epsilon must lie in (0, 1/4], got {0}")]
    InvalidBand(f64),
    #[error("experiment mode count N must be even and at least {min}, got {got}")]
    ExperimentGrid { min: usize, got: usize },
    #[error("mode counts must be strictly increasing")]
    UnsortedGrid,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("viscosity constant must be positive and finite, got {0}")]
    InvalidViscosityRule(f64),
    #[error("resonance level r = {r} outside [0, {max}]")]
    LevelOutOfRange { r: i64, max: i64 },
    #[error("power-law fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("power-law fit needs positive data, got ({0}, {1})")]
    NonPositiveData(f64, f64),
}

impl Error {
    /// Name of the module whose precondition was violated.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            InvalidModeCount(_)
            | ModeOutOfRange { .. }
            | NonResonant(..)
            | InvalidExponent(_)
            | LengthMismatch { .. } => "spectral_core",
            InvalidViscosity(_)
            | NegativeTime(_)
            | GridMismatch { .. }
            | NonPositiveStep(_)
            | UnstableStep { .. }
            | CutoffOutOfRange { .. } => "schemes",
            NonPositiveHorizon(_) | InvalidPanels(_) | QuadratureNotConverged { .. } => {
                "spacetime_norms"
            }
            InvalidAlpha(_)
            | AlphaTooLarge(_)
            | InvalidLambda(_)
            | InvalidBand(_)
            | ExperimentGrid { .. }
            | UnsortedGrid
            | NoTrials
            | InvalidViscosityRule(_)
            | LevelOutOfRange { .. }
            | TooFewPoints(_)
            | NonPositiveData(..) => "experiments",
        }
    }
}
