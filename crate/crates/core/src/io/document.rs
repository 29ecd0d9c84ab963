//! Versioned JSON documents for problems and solutions.
//!
//! A problem document is a list of steps. A step with its own first point
//! `a` and first tangent `v_a` starts a new chain; a step without them
//! continues the chain of the previous step from its last point and end
//! tangent.
//!
//! ```json
//! {
//!   "version": 1,
//!   "config": { "tol_length": 1e-6 },
//!   "steps": [
//!     { "a": [0, 0], "c": [4, 0], "v_a": [1, 1], "v_c_dir": [1, -1], "target_length": 2.0 },
//!     { "c": [8, 2], "v_c_dir": [0, 1] }
//!   ]
//! }
//! ```
//!
//! A starting step sets exactly one of `alpha` (fixed shape) and
//! `target_length` (length of `v_a` to match; only the direction of `v_a` is
//! used). A continuation step either sets `alpha`, which gives a joint with a
//! shared tangent direction only, or sets neither, which matches the incoming
//! tangent length and gives a joint with shared curvature.

use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::alpha::{AlphaConfig, Instance, TangentLimits};
use crate::chain::ContinuityReport;
use crate::error::{Error, Result};
use crate::geom::{Point, Vec2};
use crate::hermite::{Segment, SimilarityTransform};

pub const VERSION: u32 = 1;

/// Solver settings that a document or the command line may override.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    /// Angle tolerance of the `lambda` search, radians.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_angle: Option<f64>,
    /// Relative tolerance on the first tangent length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Absolute tolerance of the adaptive quadrature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
}

impl SolverOverrides {
    /// Fields set in `over` win.
    pub fn merge(self, over: SolverOverrides) -> SolverOverrides {
        SolverOverrides {
            tol_angle: over.tol_angle.or(self.tol_angle),
            tol_length: over.tol_length.or(self.tol_length),
            max_iter: over.max_iter.or(self.max_iter),
            quad_tol: over.quad_tol.or(self.quad_tol),
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == SolverOverrides::default()
    }

    pub fn alpha_config(&self) -> Result<AlphaConfig> {
        let mut cfg = AlphaConfig::default();
        if let Some(v) = self.tol_angle {
            cfg.lambda.eps = v;
        }
        if let Some(v) = self.tol_length {
            cfg.length_tol = v;
        }
        if let Some(v) = self.max_iter {
            cfg.max_iteration = v;
            cfg.lambda.max_iteration = v;
        }
        if let Some(v) = self.quad_tol {
            cfg.lambda.quadrature.abs_tol = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// First point and first tangent of a step that starts a chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepStart {
    pub a: Point,
    pub v_a: Vec2,
}

/// What fixes the shape of a step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Goal {
    Alpha(f64),
    TargetLength(f64),
    /// Continuation that matches the incoming tangent length.
    Matched,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct Step {
    /// `None` for a continuation of the previous step.
    pub start: Option<StepStart>,
    pub c: Point,
    pub v_c_dir: Vec2,
    pub goal: Goal,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<[f64; 2]>,
    c: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_a: Option<[f64; 2]>,
    v_c_dir: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_length: Option<f64>,
}

impl TryFrom<RawStep> for Step {
    type Error = String;
    fn try_from(raw: RawStep) -> std::result::Result<Step, String> {
        let pt = |p: [f64; 2]| Point::new(p[0], p[1]);
        let v = |p: [f64; 2]| Vec2::new(p[0], p[1]);
        let start = match (raw.a, raw.v_a) {
            (Some(a), Some(v_a)) => Some(StepStart {
                a: pt(a),
                v_a: v(v_a),
            }),
            (None, None) => None,
            _ => return Err("`a` and `v_a` must be given together".into()),
        };
        let goal = match (raw.alpha, raw.target_length, start.is_some()) {
            (Some(_), Some(_), _) => return Err("set exactly one of `alpha` and `target_length`".into()),
            (Some(a), None, _) => Goal::Alpha(a),
            (None, Some(l), true) => Goal::TargetLength(l),
            (None, Some(_), false) => {
                return Err("a continuation step takes its tangent length from the previous step; drop `target_length`".into())
            }
            (None, None, true) => return Err("set exactly one of `alpha` and `target_length`".into()),
            (None, None, false) => Goal::Matched,
        };
        Ok(Step {
            start,
            c: pt(raw.c),
            v_c_dir: v(raw.v_c_dir),
            goal,
        })
    }
}

impl From<Step> for RawStep {
    fn from(s: Step) -> RawStep {
        let (alpha, target_length) = match s.goal {
            Goal::Alpha(a) => (Some(a), None),
            Goal::TargetLength(l) => (None, Some(l)),
            Goal::Matched => (None, None),
        };
        RawStep {
            a: s.start.map(|st| [st.a.x, st.a.y]),
            c: [s.c.x, s.c.y],
            v_a: s.start.map(|st| [st.v_a.x, st.v_a.y]),
            v_c_dir: [s.v_c_dir.x, s.v_c_dir.y],
            alpha,
            target_length,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(deserialize_with = "version_one")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "SolverOverrides::is_empty")]
    pub config: SolverOverrides,
    #[serde(deserialize_with = "steps_with_start")]
    pub steps: Vec<Step>,
}

impl ProblemDocument {
    pub fn new(steps: Vec<Step>) -> ProblemDocument {
        ProblemDocument {
            version: VERSION,
            config: SolverOverrides::default(),
            steps,
        }
    }
}

fn version_one<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u32, D::Error> {
    let v = u32::deserialize(d)?;
    if v != VERSION {
        return Err(de::Error::custom(format!(
            "unsupported version {v}, expected {VERSION}"
        )));
    }
    Ok(v)
}

fn steps_with_start<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Step>, D::Error> {
    struct StepsVisitor;
    impl<'de> Visitor<'de> for StepsVisitor {
        type Value = Vec<Step>;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a list of steps")
        }
        fn visit_seq<A: SeqAccess<'de>>(
            self,
            mut seq: A,
        ) -> std::result::Result<Vec<Step>, A::Error> {
            let mut steps = Vec::new();
            while let Some(step) = seq.next_element::<Step>()? {
                if steps.is_empty() && step.start.is_none() {
                    return Err(de::Error::custom("the first step needs `a` and `v_a`"));
                }
                steps.push(step);
            }
            Ok(steps)
        }
    }
    d.deserialize_seq(StepsVisitor)
}

/// Residuals of one solved step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Final residual of the `lambda` search, radians.
    pub angle: f64,
    /// Achieved minus requested first tangent length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    /// Distance of the evaluated last point from `c`, relative to `|AC|`.
    pub endpoint: f64,
    /// Angle between the evaluated first tangent and `v_a`.
    pub tangent_a: f64,
    /// Angle between the evaluated last tangent and the line along `v_c_dir`.
    pub tangent_c: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Iterations {
    pub lambda: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSolution {
    /// Index of the chain this step belongs to.
    pub chain: usize,
    /// Absent for plain circular arcs, whose shape does not depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub lambda: f64,
    pub swap_flag: bool,
    pub instance: Instance,
    pub transform: SimilarityTransform,
    pub residuals: Residuals,
    pub iterations: Iterations,
    /// Limits of the first tangent length, for length-driven steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<TangentLimits>,
    pub segment: Segment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub first_step: usize,
    pub steps: usize,
    pub arc_length: f64,
    pub continuity: ContinuityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDocument {
    #[serde(deserialize_with = "version_one")]
    pub version: u32,
    pub steps: Vec<StepSolution>,
    pub chains: Vec<ChainReport>,
}

/// Parse failure with the position and the field path of the offending
/// value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub line: usize,
    pub column: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)?;
        if !self.field.is_empty() && self.field != "." {
            write!(f, ", field `{}`", self.field)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

impl From<SchemaError> for Error {
    fn from(e: SchemaError) -> Error {
        Error::InvalidInput(e.to_string())
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> std::result::Result<T, SchemaError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        schema_error(e.into_inner(), field)
    })?;
    de.end().map_err(|e| schema_error(e, String::new()))?;
    Ok(value)
}

fn schema_error(e: serde_json::Error, field: String) -> SchemaError {
    let text = e.to_string();
    // serde_json appends the position, which is reported separately.
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    SchemaError {
        line: e.line(),
        column: e.column(),
        field,
        message,
    }
}

pub fn parse_problem(text: &str) -> std::result::Result<ProblemDocument, SchemaError> {
    parse(text)
}

pub fn parse_solution(text: &str) -> std::result::Result<SolutionDocument, SchemaError> {
    parse(text)
}

fn to_text<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let fmt = serde_json::ser::PrettyFormatter::with_indent(b"  ");
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value
        .serialize(&mut ser)
        .expect("documents hold only finite numbers");
    out.push(b'\n');
    inline_number_arrays(&String::from_utf8(out).expect("serde_json writes UTF-8"))
}

// Puts arrays that hold only numbers on one line, so points read as `[x, y]`.
fn inline_number_arrays(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut copied = 0;
    let mut in_string = false;
    let mut escaped = false;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
        } else if b == b'"' {
            in_string = true;
        } else if b == b'[' {
            if let Some(len) = text[i + 1..].find(']') {
                let body = &text[i + 1..i + 1 + len];
                let numeric = !body.trim().is_empty()
                    && body
                        .bytes()
                        .all(|c| c.is_ascii_digit() || b"-+.eE,null \n".contains(&c));
                if numeric {
                    let items: Vec<&str> = body.split(',').map(str::trim).collect();
                    out.push_str(&text[copied..i]);
                    out.push('[');
                    out.push_str(&items.join(", "));
                    out.push(']');
                    i += len + 2;
                    copied = i;
                    continue;
                }
            }
        }
        i += 1;
    }
    out.push_str(&text[copied..]);
    out
}

pub fn serialize_problem(doc: &ProblemDocument) -> String {
    to_text(doc)
}

pub fn serialize_solution(doc: &SolutionDocument) -> String {
    to_text(doc)
}
