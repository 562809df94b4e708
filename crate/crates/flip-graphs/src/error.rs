use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point configuration: {0}")]
    InvalidConfig(String),

    #[error("arc {0}-{1} is not a valid arc of this configuration")]
    InvalidArc(usize, usize),

    #[error("arc set is not a triangulation: {0}")]
    NotATriangulation(String),

    #[error("flip of arc {0}-{1} rejected: {2}")]
    BadFlip(usize, usize, String),

    #[error("an arc pulled to vertex {apex} would contain the flat vertex {flat}")]
    FlatObstruction { apex: usize, flat: usize },

    #[error("projection produced an invalid triangulation: {0}")]
    InvalidProjection(String),

    #[error("invalid flip path: {0}")]
    InvalidPath(String),

    #[error("resource limit exceeded: {what} past {limit}")]
    ResourceExceeded { what: &'static str, limit: usize },

    #[error("path is not a geodesic: length {len} but endpoint distance is {dist}")]
    NotGeodesic { len: usize, dist: usize },

    #[error("no strictly decreasing flip from the current triangulation")]
    NoDecreasingFlip,

    #[error("greedy walk exceeded its step budget of {0}")]
    GreedyBudget(usize),

    #[error("invalid construction parameters: {0}")]
    BadParameters(String),

    #[error("no integral perturbation preserved the configuration within the search budget")]
    PerturbationFailed,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
