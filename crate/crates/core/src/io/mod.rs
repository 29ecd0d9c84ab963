//! Documents, sampling, SVG export, the command line and the HTTP service.

pub mod cli;
pub mod document;
pub mod sample;
pub mod service;
pub mod solve;
pub mod svg;

pub use document::{
    parse_problem, parse_solution, serialize_problem, serialize_solution, ProblemDocument,
    SchemaError, SolutionDocument,
};
pub use sample::{sample_chain, sample_segment, SampleMode};
pub use solve::{solve_document, Solved, StepFailure};
pub use svg::{export_svg, SvgStyle};
