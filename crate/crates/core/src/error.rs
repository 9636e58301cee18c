use thiserror::Error;

use crate::grammar::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is not in the open unit ball: |z|^2 = {norm_sqr}")]
    NotInterior { norm_sqr: f64 },

    #[error("point is not on the unit sphere: |z|^2 = {norm_sqr}")]
    NotOnBoundary { norm_sqr: f64 },

    #[error("|z| = {norm} exceeds the admissible radius {limit}")]
    PointOutOfRange { norm: f64, limit: f64 },

    #[error("kernel is near-singular: |1 - z.conj(zeta)| = {distance}")]
    NearSingular { distance: f64 },

    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    #[error("quadrature mass {mass} differs from domain measure {expected}")]
    MassCheck { mass: f64, expected: f64 },

    #[error("non-finite integrand value {value} at node {index}")]
    NonFinite { index: usize, value: String },

    #[error("exact terms carry different powers of pi ({0} vs {1})")]
    MixedPiPowers(i32, i32),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
