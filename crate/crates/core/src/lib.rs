//! G¹/G² Hermite interpolation with extended log-aesthetic curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`curve`] evaluates standard-form curves (radius of curvature, angle and
//!   arc-length conversions, points by quadrature), including the cusp and
//!   inflection extensions.
//! * [`hermite`] fits a curve of fixed shape parameter `alpha` to two points,
//!   a first tangent direction and a last tangent line.
//! * [`alpha`] additionally searches `alpha` so that the first tangent length
//!   matches a requested value.
//! * [`chain`] joins segments with curvature continuity.
//! * [`io`] holds documents, sampling, SVG export, the CLI and the HTTP service.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha;
pub mod chain;
pub mod curve;
pub mod error;
pub mod geom;
pub mod hermite;
pub mod io;
pub mod quadrature;

pub use alpha::{
    alpha_bisection, first_tangent_length, select_instance, solve_for_length,
    tangent_length_limits, tangent_length_limits_with, AlphaConfig, AlphaResult, Instance,
    TangentLimits,
};
pub use chain::{
    append_g2, append_g2_step, end_tangent, verify_continuity, Chain, ContinuityReport,
    ContinuityTolerances, Joint, JointReport,
};
pub use curve::{ArcBranch, At, Bound, BoundKind, Bounds, CurveParams, SignedRadius, ALPHA_BAND};
pub use error::{Error, LengthRange, Result};
pub use geom::{Point, Vec2};
pub use hermite::{
    build_triangle, evaluate_segment, fit_transform, lambda_bisection, solve_g1, solve_g1_full,
    standard_triangle, G1Solution, HermiteProblem, LambdaConfig, LambdaResult, Segment,
    SegmentSample, SimilarityTransform, StandardTriangle, Start, TriangleData,
};
pub use quadrature::QuadratureConfig;
