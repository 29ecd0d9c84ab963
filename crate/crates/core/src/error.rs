use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A closed range of attainable first-tangent lengths. `max` may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthRange {
    pub min: f64,
    /// Written as `null` when unbounded.
    #[serde(with = "unbounded_as_null")]
    pub max: f64,
}

mod unbounded_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

impl LengthRange {
    /// True when `len` lies strictly inside the range.
    pub fn contains_open(&self, len: f64) -> bool {
        len > self.min && len < self.max
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("parameter {value} outside the representable domain: {reason}")]
    Domain { value: f64, reason: &'static str },

    #[error("quadrature did not reach tolerance {tol:e} within {subdivisions} subdivisions (estimate {estimate:e})")]
    Quadrature {
        tol: f64,
        estimate: f64,
        subdivisions: usize,
    },

    #[error("curvature is unbounded at a cusp")]
    SingularCurvature,

    #[error("tangent length is unbounded at an inflection point")]
    UnboundedTangent,

    #[error("tangent at the first point is parallel to the tangent line at the last point")]
    ParallelTangents,

    #[error("degenerate control triangle: {0}")]
    DegenerateTriangle(&'static str),

    #[error("no solution found ({reason}); last bracket [{lo}, {hi}]")]
    NotFound {
        lo: f64,
        hi: f64,
        reason: &'static str,
    },

    #[error("standard triangle is not similar to the control triangle (angle mismatch {mismatch:e} rad)")]
    NotSimilar { mismatch: f64 },

    #[error("touching-circle system has no positive root")]
    NoPositiveRoot,

    #[error("tangent length {target} is not attainable; attainable range is ({}, {})", range.min, range.max)]
    Unreachable { target: f64, range: LengthRange },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short stable identifier used in structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DomainError",
            Error::Quadrature { .. } => "QuadratureError",
            Error::SingularCurvature => "SingularCurvature",
            Error::UnboundedTangent => "UnboundedTangent",
            Error::ParallelTangents => "ParallelTangents",
            Error::DegenerateTriangle(_) => "DegenerateTriangle",
            Error::NotFound { .. } => "NotFound",
            Error::NotSimilar { .. } => "NotSimilar",
            Error::NoPositiveRoot => "NoPositiveRoot",
            Error::Unreachable { .. } => "Unreachable",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Solver failures that a caller may resolve by changing the requested
    /// geometry, as opposed to malformed input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NotFound { .. } | Error::Unreachable { .. } | Error::NotSimilar { .. }
        )
    }
}
