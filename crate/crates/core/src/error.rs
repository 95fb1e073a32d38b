//! Error type shared by all pipeline stages.

use std::fmt;

/// Everything that can go wrong while building skeletons, crease patterns,
/// fold maps or wrap plans.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input failed structural validation (syntax, open chains, crossings...).
    InvalidDrawing(String),
    /// A vertex cycle is not a simple polygon.
    InvalidPolygon(String),
    /// Two distinct vertices are closer than the coincidence threshold.
    DegenerateInput(String),
    /// Generic bad parameter (non-positive dimension, out-of-range index...).
    InvalidInput(String),
    /// The wavefront simulation lost time monotonicity or failed to settle.
    /// Carries the trace of events processed so far.
    NumericalBreakdown { message: String, trace: Vec<String> },
    /// Perpendicular propagation was still active when it reached the
    /// generation budget. `live` is the number of still-propagating rays.
    CreaseBudgetExceeded { generation: u32, live: usize },
    /// The crease pattern is not flat-foldable; reflection products around
    /// `vertex` do not close up (defect is the matrix distance to identity).
    NotFlatFoldable { vertex: usize, defect: f64 },
    /// Cut-edge images are not collinear in the folded state.
    NotAligned { max_deviation: f64, worst_segment: usize },
    /// A strip band degenerated (piece thinner than the strip width, or no
    /// feasible crease placement).
    DegenerateBand(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDrawing(m) => write!(f, "invalid drawing: {m}"),
            Error::InvalidPolygon(m) => write!(f, "invalid polygon: {m}"),
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::NumericalBreakdown { message, trace } => {
                write!(f, "numerical breakdown: {message} ({} events processed)", trace.len())
            }
            Error::CreaseBudgetExceeded { generation, live } => write!(
                f,
                "crease budget exceeded: {live} perpendiculars still propagating at generation {generation}"
            ),
            Error::NotFlatFoldable { vertex, defect } => {
                write!(f, "not flat-foldable: vertex {vertex} closes with defect {defect:.3e}")
            }
            Error::NotAligned { max_deviation, worst_segment } => write!(
                f,
                "cut edges not aligned: max deviation {max_deviation:.3e} at segment {worst_segment}"
            ),
            Error::DegenerateBand(m) => write!(f, "degenerate band: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
