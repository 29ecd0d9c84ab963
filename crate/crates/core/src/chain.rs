//! Curvature-continuous chains of segments.
//!
//! The derivative of a curve with respect to its tangential angle has length
//! equal to the radius of curvature. Two segments that meet with the same
//! tangent direction and the same `dP/dtheta` length therefore share their
//! curvature at the joint. [`append_g2`] carries the end tangent of the last
//! segment over as the first tangent of the next one and lets the
//! `alpha` search match its length.

use serde::{Deserialize, Serialize};

use crate::alpha::{alpha_bisection, AlphaConfig, AlphaResult};
use crate::error::{Error, Result};
use crate::geom::{Point, Vec2};
use crate::hermite::{evaluate_segment, HermiteProblem, Segment};
use crate::quadrature::QuadratureConfig;

/// Junction between two consecutive segments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub point: Point,
    /// End tangent of the incoming segment, `dP/dtheta` in world units.
    pub tangent: Vec2,
    /// Signed curvature of the incoming segment at the joint.
    pub curvature: f64,
}

/// An ordered run of segments. Appending returns a new chain.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub segments: Vec<Segment>,
    pub joints: Vec<Joint>,
}

impl Chain {
    pub fn new(first: Segment) -> Chain {
        Chain {
            segments: vec![first],
            joints: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn last(&self) -> Option<&Segment> {
        self.segments.last()
    }

    /// Sum of the segment arc lengths.
    pub fn arc_length(&self) -> f64 {
        self.segments.iter().map(Segment::arc_length).sum()
    }

    /// Appends `segment` without any continuity check. Mostly for tests and
    /// for chains read back from documents.
    pub fn push_unchecked(&self, segment: Segment) -> Result<Chain> {
        let mut next = self.clone();
        if let Some(prev) = self.segments.last() {
            let sample = evaluate_segment(prev, 1.0, &QuadratureConfig::default())?;
            next.joints.push(Joint {
                point: prev.control[2],
                tangent: end_tangent(prev).unwrap_or(sample.tangent),
                curvature: sample.curvature,
            });
        }
        next.segments.push(segment);
        Ok(next)
    }
}

/// World tangent vector at the last point of `segment`, pointing along the
/// travel direction with length `scale * |rho|` there.
pub fn end_tangent(segment: &Segment) -> Result<Vec2> {
    let rho = segment.params.rho_of_s(segment.s_domain[1])?;
    if rho.is_cusp() {
        return Err(Error::SingularCurvature);
    }
    if rho.is_inflection() {
        return Err(Error::UnboundedTangent);
    }
    let dir = segment.std_direction(1.0)? * segment.travel_factor();
    let dir = segment.transform.apply_vec(dir).normalize();
    Ok(dir * (segment.transform.scale * rho.value().abs()))
}

/// Solves the next segment from the end of `chain` to `c_next` with the last
/// tangent direction `v_c_dir_next`, matching the incoming tangent length.
pub fn append_g2(
    chain: &Chain,
    c_next: Point,
    v_c_dir_next: Vec2,
    cfg: &AlphaConfig,
) -> Result<Chain> {
    append_g2_step(chain, c_next, v_c_dir_next, cfg).map(|(c, _)| c)
}

/// Like [`append_g2`], also returning the solver record of the new segment.
pub fn append_g2_step(
    chain: &Chain,
    c_next: Point,
    v_c_dir_next: Vec2,
    cfg: &AlphaConfig,
) -> Result<(Chain, AlphaResult)> {
    let prev = chain
        .last()
        .ok_or_else(|| Error::InvalidInput("cannot append to an empty chain".into()))?;
    let v_a = end_tangent(prev)?;
    let problem = HermiteProblem::new(prev.control[2], c_next, v_a, v_c_dir_next)?;
    let result = alpha_bisection(&problem, v_a.length(), cfg)?;
    let incoming = evaluate_segment(prev, 1.0, &cfg.lambda.quadrature)?;
    let outgoing = evaluate_segment(&result.segment, 0.0, &cfg.lambda.quadrature)?;
    // Equal tangent lengths give equal curvature magnitudes only.
    if incoming.curvature * outgoing.curvature < 0.0 {
        return Err(Error::NotFound {
            lo: result.alpha,
            hi: result.alpha,
            reason: "the next segment leaves the joint turning the other way",
        });
    }
    let mut next = chain.clone();
    next.joints.push(Joint {
        point: prev.control[2],
        tangent: v_a,
        curvature: incoming.curvature,
    });
    next.segments.push(result.segment);
    Ok((next, result))
}

/// Acceptance thresholds for [`verify_continuity`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityTolerances {
    /// Position gap relative to the longer of the two segments.
    pub position: f64,
    /// Tangent direction gap in radians.
    pub angle: f64,
    /// Curvature gap relative to the larger magnitude.
    pub curvature: f64,
}

impl Default for ContinuityTolerances {
    fn default() -> Self {
        ContinuityTolerances {
            position: 1e-9,
            angle: 1e-6,
            curvature: 1e-4,
        }
    }
}

/// Measured gaps at one joint. When the joint cannot be measured the gaps
/// are `f64::MAX` and `error` says why.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointReport {
    pub index: usize,
    pub position_gap: f64,
    pub angle_gap: f64,
    pub curvature_left: f64,
    pub curvature_right: f64,
    pub curvature_gap: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub joints: Vec<JointReport>,
    pub pass: bool,
}

// Finite-difference window relative to the segment arc length.
const FD_STEP: f64 = 1e-5;

// Parameter distance from `joint_t` to the cusp or inflection point of the
// whole curve, inside the segment or not. Curvature is not Lipschitz there,
// so finite-difference windows stay well short of it.
fn room(seg: &Segment, joint_t: f64) -> f64 {
    let [s0, s1] = seg.s_domain;
    let span = (s1 - s0).abs();
    match seg.params.special_s() {
        Some(b) if span > 0.0 => (b - seg.std_s(joint_t)).abs() / span,
        _ => f64::INFINITY,
    }
}

// Unwrapped tangent angles at three parameters, turned into a one-sided
// second-order derivative with respect to world arc length.
fn fd_curvature(seg: &Segment, ts: [f64; 3], h: f64, q: &QuadratureConfig) -> Result<f64> {
    let mut angles = [0.0; 3];
    for (i, &t) in ts.iter().enumerate() {
        angles[i] = evaluate_segment(seg, t, q)?.tangent.angle();
    }
    for i in 1..3 {
        let d = angles[i] - angles[0];
        angles[i] -= (d / std::f64::consts::TAU).round() * std::f64::consts::TAU;
    }
    Ok((-3.0 * angles[0] + 4.0 * angles[1] - angles[2]) / (2.0 * h))
}

// Second-order one-sided tangent from chord increments starting at `t0`.
fn fd_tangent(seg: &Segment, t0: f64, h: f64, q: &QuadratureConfig) -> Result<Vec2> {
    let d1 = seg.displacement(t0, t0 + h, q)?;
    let d2 = seg.displacement(t0, t0 + 2.0 * h, q)?;
    Ok((d1 * 4.0 - d2).normalize())
}

/// Measures every joint of `chain` numerically: positions by evaluation,
/// tangents and curvatures by one-sided finite differences with a window of
/// `1e-5` of each segment's arc length, narrowed next to a cusp or an
/// inflection point.
pub fn verify_continuity(chain: &Chain, tols: &ContinuityTolerances) -> ContinuityReport {
    let q = QuadratureConfig::default();
    let joints: Vec<JointReport> = chain
        .segments
        .windows(2)
        .enumerate()
        .map(|(index, w)| measure_joint(index, &w[0], &w[1], tols, &q))
        .collect();
    let pass = joints.iter().all(|j| j.pass);
    ContinuityReport { joints, pass }
}

fn measure_joint(
    index: usize,
    left: &Segment,
    right: &Segment,
    tols: &ContinuityTolerances,
    q: &QuadratureConfig,
) -> JointReport {
    let measure = || -> Result<JointReport> {
        let p_l = evaluate_segment(left, 1.0, q)?.point;
        let p_r = evaluate_segment(right, 0.0, q)?.point;
        let size = left.arc_length().max(right.arc_length());
        let position_gap = p_l.distance(p_r) / size;

        let (room_l, room_r) = (room(left, 1.0), room(right, 0.0));
        // Tangents point along travel on both sides.
        let t_l = -fd_tangent(left, 1.0, -FD_STEP.min(room_l / 10.0), q)?;
        let t_r = fd_tangent(right, 0.0, FD_STEP.min(room_r / 10.0), q)?;
        let (hl, hr) = (FD_STEP.min(room_l / 100.0), FD_STEP.min(room_r / 100.0));
        let angle_gap = t_l.angle_between(t_r);

        let k_l = -fd_curvature(
            left,
            [1.0, 1.0 - hl, 1.0 - 2.0 * hl],
            hl * left.arc_length(),
            q,
        )?;
        let k_r = fd_curvature(right, [0.0, hr, 2.0 * hr], hr * right.arc_length(), q)?;
        let scale = k_l.abs().max(k_r.abs());
        let curvature_gap = if scale == 0.0 {
            0.0
        } else {
            (k_l - k_r).abs() / scale
        };
        let pass = position_gap < tols.position
            && angle_gap < tols.angle
            && curvature_gap < tols.curvature;
        Ok(JointReport {
            index,
            position_gap,
            angle_gap,
            curvature_left: k_l,
            curvature_right: k_r,
            curvature_gap,
            pass,
            error: None,
        })
    };
    measure().unwrap_or_else(|e| JointReport {
        index,
        position_gap: f64::MAX,
        angle_gap: f64::MAX,
        curvature_left: 0.0,
        curvature_right: 0.0,
        curvature_gap: f64::MAX,
        pass: false,
        error: Some(e.to_string()),
    })
}
