//! G¹ Hermite interpolation for a fixed shape parameter `alpha`.
//!
//! The user triangle `A B C` (with `B` the intersection of the two tangent
//! lines) is brought into a canonical frame: endpoints are swapped so that the
//! first point `F` is the one closer to `B`, and the frame is mirrored so that
//! `F -> B -> E` turns counterclockwise. A bisection on `lambda` then makes the
//! standard triangle `A' B' C'` similar to `F B E`, and a similarity transform
//! maps the standard curve onto the user geometry.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{snap_alpha, ArcBranch, CurveParams};
use crate::error::{Error, Result};
use crate::geom::{line_intersection, Point, Vec2};
use crate::quadrature::QuadratureConfig;

/// Relative tolerance under which `|AB| = |BC|` counts as isosceles.
pub const ISOSCELES_TOL: f64 = 1e-12;
/// Largest angle mismatch accepted by [`fit_transform`], in radians.
pub const SIMILARITY_TOL: f64 = 1e-6;
// Relative bracket width required, together with the angle residual, to stop.
const LAMBDA_REL_WIDTH: f64 = 1e-11;

/// User data for one segment: endpoints, first tangent vector (its length is
/// only used by the length-driven solver) and last tangent direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteProblem {
    pub a: Point,
    pub c: Point,
    pub v_a: Vec2,
    pub v_c_dir: Vec2,
}

impl HermiteProblem {
    pub fn new(a: Point, c: Point, v_a: Vec2, v_c_dir: Vec2) -> Result<HermiteProblem> {
        let p = HermiteProblem { a, c, v_a, v_c_dir };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite()
            && self.c.is_finite()
            && self.v_a.is_finite()
            && self.v_c_dir.is_finite())
        {
            return Err(Error::InvalidInput("coordinates must be finite".into()));
        }
        if self.v_a.length() == 0.0 || self.v_c_dir.length() == 0.0 {
            return Err(Error::InvalidInput(
                "tangent vectors must be non-zero".into(),
            ));
        }
        if self.a == self.c {
            return Err(Error::DegenerateTriangle("endpoints coincide"));
        }
        Ok(())
    }

    /// Same geometry with the first tangent rescaled to `length`.
    pub fn with_length(&self, length: f64) -> HermiteProblem {
        HermiteProblem {
            v_a: self.v_a.normalize() * length,
            ..*self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Travel direction at the first canonical point relative to `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Toward,
    Away,
    /// Only the tangent line is prescribed (the first canonical point is the
    /// user's last point).
    Free,
}

/// Control triangle of a problem plus its canonical-frame description.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleData {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    /// Exterior angle at `B`: the total turn of the tangent from `A` to `C`.
    pub theta_delta: f64,
    /// Interior angle at `A`.
    pub theta_a: f64,
    /// Interior angle at `C`.
    pub theta_c: f64,
    pub swap_flag: bool,
    /// Turning sense of `A -> B -> C`.
    pub orientation: Orientation,
    /// Whether the canonical frame is mirrored.
    pub reflect: bool,
    pub a_toward_b: bool,
    pub c_toward_b: bool,
    pub isosceles: bool,
}

impl TriangleData {
    /// First canonical point.
    pub fn first(&self) -> Point {
        if self.swap_flag {
            self.c
        } else {
            self.a
        }
    }

    /// Last canonical point.
    pub fn end(&self) -> Point {
        if self.swap_flag {
            self.a
        } else {
            self.c
        }
    }

    /// Interior angle at the first canonical point.
    pub fn theta_first(&self) -> f64 {
        if self.swap_flag {
            self.theta_c
        } else {
            self.theta_a
        }
    }

    pub fn theta_end(&self) -> f64 {
        if self.swap_flag {
            self.theta_a
        } else {
            self.theta_c
        }
    }

    /// Start condition at the first canonical point. `None` when the
    /// endpoints are swapped and `v_A` points away from `B`, which no
    /// extended curve realises.
    pub fn start(&self) -> Option<Start> {
        match (self.swap_flag, self.a_toward_b) {
            (false, true) => Some(Start::Toward),
            (false, false) => Some(Start::Away),
            (true, true) => Some(Start::Free),
            (true, false) => None,
        }
    }
}

/// Builds the control triangle and its canonical frame.
pub fn build_triangle(problem: &HermiteProblem) -> Result<TriangleData> {
    problem.validate()?;
    let (a, c) = (problem.a, problem.c);
    let d_a = problem.v_a.normalize();
    let d_c = problem.v_c_dir.normalize();
    if d_a.cross(d_c).abs() < 1e-12 {
        return Err(Error::ParallelTangents);
    }
    let (t, u) = line_intersection(a, d_a, c, d_c).ok_or(Error::ParallelTangents)?;
    let b = a + d_a * t;
    let ac = a.distance(c);
    let (ab, bc) = (a.distance(b), b.distance(c));
    if ab <= 1e-12 * ac {
        return Err(Error::DegenerateTriangle("B coincides with A"));
    }
    if bc <= 1e-12 * ac {
        return Err(Error::DegenerateTriangle("B coincides with C"));
    }
    let beta = (a - b).angle_between(c - b);
    let turn = (b - a).cross(c - b);
    if turn == 0.0 || beta == 0.0 {
        return Err(Error::DegenerateTriangle("A, B and C are collinear"));
    }
    let orientation = if turn > 0.0 {
        Orientation::Ccw
    } else {
        Orientation::Cw
    };
    let isosceles = (ab - bc).abs() <= ISOSCELES_TOL * ab.max(bc);
    let swap_flag = !isosceles && ab > bc;
    // Swapping reverses the turning sense.
    let reflect = (orientation == Orientation::Cw) != swap_flag;
    Ok(TriangleData {
        a,
        b,
        c,
        theta_delta: PI - beta,
        theta_a: (b - a).angle_between(c - a),
        theta_c: (b - c).angle_between(a - c),
        swap_flag,
        orientation,
        reflect,
        a_toward_b: t > 0.0,
        c_toward_b: u > 0.0,
        isosceles,
    })
}

/// Standard-frame triangle of a curve: `A'` and `C'` with their unit travel
/// directions and the tangent intersection `B'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardTriangle {
    pub params: CurveParams,
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub t_a: Vec2,
    pub t_c: Vec2,
    /// Arc-length positions of `A'` and `C'`.
    pub s_a: f64,
    pub s_c: f64,
    /// Tangential angles at `A'` and `C'`.
    pub angle_a: f64,
    pub angle_c: f64,
    /// Interior angles at `A'` and `C'`.
    pub theta_a: f64,
    pub theta_c: f64,
    /// `B' = A' + a_param t_a = C' + c_param t_c`.
    pub a_param: f64,
    pub c_param: f64,
    pub beyond_inf_point: bool,
}

impl StandardTriangle {
    /// Signed angle from the travel direction at `A'` to the chord.
    pub fn phi(&self) -> f64 {
        self.t_a.signed_angle_to(self.c - self.a)
    }

    /// Signed angle from the chord to the travel direction at `C'`.
    pub fn psi(&self) -> f64 {
        (self.c - self.a).signed_angle_to(self.t_c)
    }
}

/// Endpoints of the standard curve turning by `theta_delta`. For
/// `alpha <= 1` the curve runs from the reference point to angle
/// `theta_delta`; `branch` selects the point past the inflection for
/// `alpha < 0`. For `alpha > 1` it runs from angle `-theta_delta` to the
/// reference point, possibly through the cusp.
pub fn standard_triangle(
    params: CurveParams,
    theta_delta: f64,
    branch: ArcBranch,
    q: &QuadratureConfig,
) -> Result<StandardTriangle> {
    if !(theta_delta > 0.0 && theta_delta < PI) {
        return Err(Error::Domain {
            value: theta_delta,
            reason: "turning angle must lie in (0, pi)",
        });
    }
    let alpha = params.alpha();
    let beyond = alpha < 0.0 && params.lambda() > 0.0 && branch == ArcBranch::Beyond;
    // Directions come from the known angles: near a cusp the angle is badly
    // conditioned as a function of arc length.
    let (a, s_a, t_a, c, s_c, t_c) = if alpha > 1.0 {
        let s_a = params.s_of_theta(-theta_delta, ArcBranch::Within)?;
        let a = Point::from_complex(params.point_by_theta_c(-theta_delta, q)?);
        let past_cusp = (alpha - 1.0) * params.lambda() * theta_delta > 1.0;
        let t_a = Vec2::from_angle(-theta_delta) * if past_cusp { -1.0 } else { 1.0 };
        (a, s_a, t_a, Point::ORIGIN, 0.0, Vec2::new(1.0, 0.0))
    } else {
        let s_c = params.s_of_theta(
            theta_delta,
            if beyond {
                ArcBranch::Beyond
            } else {
                ArcBranch::Within
            },
        )?;
        let c = Point::from_complex(params.arc_increment_c(0.0, s_c, q)?);
        (
            Point::ORIGIN,
            0.0,
            Vec2::new(1.0, 0.0),
            c,
            s_c,
            Vec2::from_angle(theta_delta),
        )
    };
    let (angle_a, angle_c) = if alpha > 1.0 {
        (-theta_delta, 0.0)
    } else {
        (0.0, theta_delta)
    };
    let (a_param, c_param) = line_intersection(a, t_a, c, t_c).ok_or(Error::Domain {
        value: params.lambda(),
        reason: "standard tangent lines are parallel",
    })?;
    let b = a + t_a * a_param;
    Ok(StandardTriangle {
        params,
        a,
        b,
        c,
        t_a,
        t_c,
        s_a,
        s_c,
        angle_a,
        angle_c,
        theta_a: interior_angle(a, b, c),
        theta_c: interior_angle(c, b, a),
        a_param,
        c_param,
        beyond_inf_point: beyond,
    })
}

// Angle at `p` between the rays towards `b` and `o`, from the dot product.
fn interior_angle(p: Point, b: Point, o: Point) -> f64 {
    let (u, v) = (b - p, o - p);
    (u.dot(v) / (u.length() * v.length()))
        .clamp(-1.0, 1.0)
        .acos()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaConfig {
    /// Angle residual at which the bisection stops, in radians.
    pub eps: f64,
    pub max_iteration: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig {
            eps: 1e-12,
            max_iteration: 100,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl LambdaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(Error::InvalidInput(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if self.max_iteration == 0 {
            return Err(Error::InvalidInput(
                "max_iteration must be at least 1".into(),
            ));
        }
        self.quadrature.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaResult {
    pub lambda: f64,
    pub iterations: usize,
    /// Angle residual at `lambda`, in radians.
    pub residual: f64,
    pub beyond_inf_point: bool,
    pub converged: bool,
    /// Bracket when the search stopped.
    pub bracket: (f64, f64),
}

enum Probe {
    Residual(f64),
    // The configuration is not a proper triangle; lambda must grow.
    TooSmall,
}

fn bisect<F>(
    mut lo: f64,
    mut hi: f64,
    increasing: bool,
    cfg: &LambdaConfig,
    mut f: F,
) -> Result<LambdaResult>
where
    F: FnMut(f64) -> Result<Probe>,
{
    let mut best = (f64::NAN, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iteration {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        iterations += 1;
        let probe = match f(mid) {
            Ok(p) => p,
            Err(Error::Quadrature { .. }) => {
                return Err(Error::NotFound {
                    lo,
                    hi,
                    reason: "curve could not be integrated in the remaining bracket",
                })
            }
            Err(e) => return Err(e),
        };
        match probe {
            Probe::TooSmall => lo = mid,
            Probe::Residual(r) => {
                if r.abs() <= best.1.abs() {
                    best = (mid, r);
                }
                if (r > 0.0) == increasing {
                    hi = mid;
                } else {
                    lo = mid;
                }
                // Near lambda = 0 the angle is flat in lambda, so also ask
                // for a narrow bracket before stopping.
                if r.abs() < cfg.eps && hi - lo <= LAMBDA_REL_WIDTH * mid {
                    converged = true;
                    break;
                }
            }
        }
    }
    if best.0.is_nan() {
        return Err(Error::NotFound {
            lo,
            hi,
            reason: "no admissible configuration in the bracket",
        });
    }
    Ok(LambdaResult {
        lambda: best.0,
        iterations,
        residual: best.1,
        beyond_inf_point: false,
        converged: converged || best.1.abs() < cfg.eps,
        bracket: (lo, hi),
    })
}

/// Finds `lambda` such that the standard triangle for `alpha` is similar to
/// the canonical triangle of `tri`.
///
/// The residual is a signed angle, which keeps it monotone in `lambda` on
/// each branch:
/// * `alpha <= 1`: angle at `A'` from the travel direction to the chord,
///   increasing in `lambda`; for `alpha < 0` points past the inflection are
///   searched with `B_theta < 2 pi` when the target exceeds the angle reached
///   at the inflection;
/// * `alpha > 1`: angle at `C'` from the chord to the travel direction,
///   decreasing over `(0, 2 lambda_c)` where `lambda_c` puts `A'` on the cusp.
///
/// Returns `converged = false` when the iteration budget ran out or the
/// bracket collapsed before the residual dropped below `eps`.
pub fn lambda_bisection(
    alpha: f64,
    tri: &TriangleData,
    cfg: &LambdaConfig,
) -> Result<LambdaResult> {
    cfg.validate()?;
    let alpha = snap_alpha(alpha);
    if !alpha.is_finite() {
        return Err(Error::Domain {
            value: alpha,
            reason: "alpha must be finite",
        });
    }
    let start = tri.start().ok_or(Error::NotFound {
        lo: 0.0,
        hi: 0.0,
        reason: "with |AB| > |BC| the first tangent must point toward B",
    })?;
    let td = tri.theta_delta;
    let tf = tri.theta_first();
    let te = tri.theta_end();
    let q = &cfg.quadrature;
    let tri_at = |lambda: f64, branch: ArcBranch| -> Result<StandardTriangle> {
        standard_triangle(CurveParams::new(alpha, lambda)?, td, branch, q)
    };

    if tri.isosceles && start != Start::Away {
        return Ok(LambdaResult {
            lambda: 0.0,
            iterations: 0,
            residual: 0.0,
            beyond_inf_point: false,
            converged: true,
            bracket: (0.0, 0.0),
        });
    }

    if alpha > 1.0 {
        let lc = 1.0 / (td * (alpha - 1.0));
        let (lo, hi) = match start {
            Start::Toward => (0.0, lc),
            Start::Away => (lc, 2.0 * lc),
            Start::Free => (0.0, 2.0 * lc),
        };
        return bisect(lo, hi, false, cfg, |l| {
            Ok(Probe::Residual(tri_at(l, ArcBranch::Within)?.psi() - te))
        });
    }

    if start == Start::Away {
        return Err(Error::NotFound {
            lo: 0.0,
            hi: 0.0,
            reason: "a first tangent pointing away from B needs alpha > 1",
        });
    }

    // For 0 <= alpha <= 1 the end point runs off to infinity as lambda
    // approaches its upper limit, where the chord angle is largest. Points
    // too far out to evaluate count as past the target.
    let far = |r: Result<StandardTriangle>| -> Result<Option<StandardTriangle>> {
        match r {
            Ok(st) => Ok(Some(st)),
            Err(Error::Domain { .. } | Error::Quadrature { .. }) if alpha >= 0.0 => Ok(None),
            Err(e) => Err(e),
        }
    };

    let within = |l: f64| {
        Ok(Probe::Residual(match far(tri_at(l, ArcBranch::Within))? {
            Some(st) => st.phi() - tf,
            None => f64::INFINITY,
        }))
    };

    if alpha == 1.0 {
        let mut hi = 1.0 / td;
        let mut grow = 0;
        while far(tri_at(hi, ArcBranch::Within))?.is_some_and(|st| st.phi() <= tf) {
            hi *= 10.0;
            grow += 1;
            if grow > 30 {
                return Err(Error::NotFound {
                    lo: 0.0,
                    hi,
                    reason: "angle not reached for any lambda",
                });
            }
        }
        return bisect(0.0, hi, true, cfg, within);
    }

    let lmax = 1.0 / (td * (1.0 - alpha));
    if alpha >= 0.0 {
        return bisect(0.0, lmax, true, cfg, within);
    }

    // alpha < 0: at lmax the end point sits on the inflection.
    let phi_max = tri_at(lmax, ArcBranch::Within)?.phi();
    if tf <= phi_max {
        return bisect(0.0, lmax, true, cfg, within);
    }
    let mut res = bisect(lmax * td / TAU, lmax, false, cfg, |l| {
        let st = tri_at(l, ArcBranch::Beyond)?;
        if st.a_param <= 0.0 || st.c_param >= 0.0 {
            return Ok(Probe::TooSmall);
        }
        Ok(Probe::Residual(st.phi().rem_euclid(TAU) - tf))
    })?;
    res.beyond_inf_point = true;
    Ok(res)
}

/// Scale, rotation, optional mirror about the x axis, then translation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityTransform {
    pub scale: f64,
    pub rotation: f64,
    pub translation: Vec2,
    pub reflect: bool,
}

impl SimilarityTransform {
    pub const IDENTITY: SimilarityTransform = SimilarityTransform {
        scale: 1.0,
        rotation: 0.0,
        translation: Vec2::ZERO,
        reflect: false,
    };

    pub fn apply_vec(&self, v: Vec2) -> Vec2 {
        let z = if self.reflect {
            v.to_complex().conj()
        } else {
            v.to_complex()
        };
        Vec2::from_complex(z * Complex64::from_polar(self.scale, self.rotation))
    }

    pub fn apply(&self, p: Point) -> Point {
        (self.apply_vec(p.to_vec2()) + self.translation).to_point()
    }
}

fn line_gap(u: Vec2, v: Vec2) -> f64 {
    let g = u.angle_between(v);
    g.min(PI - g)
}

/// Similarity that maps `A'` and `C'` onto the canonical endpoints of `tri`.
/// The translation is anchored at the user's first point, which is therefore
/// reproduced exactly.
pub fn fit_transform(tri: &TriangleData, std: &StandardTriangle) -> Result<SimilarityTransform> {
    let refl = |v: Vec2| if tri.reflect { Vec2::new(v.x, -v.y) } else { v };
    let (f, e) = (tri.first(), tri.end());
    let std_chord = refl(std.c - std.a);
    let chord = e - f;
    let mut t = SimilarityTransform {
        scale: chord.length() / std_chord.length(),
        rotation: std_chord.signed_angle_to(chord),
        translation: Vec2::ZERO,
        reflect: tri.reflect,
    };
    let (anchor_std, anchor) = if tri.swap_flag {
        (std.c, tri.a)
    } else {
        (std.a, tri.a)
    };
    t.translation = anchor.to_vec2() - t.apply_vec(anchor_std.to_vec2());

    let d_a = (tri.b - tri.a) * if tri.a_toward_b { 1.0 } else { -1.0 };
    let line_c = tri.b - tri.c;
    let mismatch = if tri.swap_flag {
        // Standard travel runs from C to A.
        t.apply_vec(std.t_c)
            .angle_between(-d_a)
            .max(line_gap(t.apply_vec(std.t_a), line_c))
    } else {
        t.apply_vec(std.t_a)
            .angle_between(d_a)
            .max(line_gap(t.apply_vec(std.t_c), line_c))
    };
    if !(mismatch <= SIMILARITY_TOL) {
        return Err(Error::NotSimilar { mismatch });
    }
    Ok(t)
}

/// A solved curve piece. It is parameterised by standard arc length running
/// from `s_domain[0]` (the user's first point) to `s_domain[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub params: CurveParams,
    /// Tangential angle at the first and the last user point.
    pub theta_domain: [f64; 2],
    /// Standard arc length at the first and the last user point.
    pub s_domain: [f64; 2],
    /// Standard-frame position of the first user point.
    pub std_anchor: Point,
    pub transform: SimilarityTransform,
    pub swap_flag: bool,
    pub contains_cusp: bool,
    pub contains_inflection: bool,
    /// World control points `A`, `B`, `C`.
    pub control: [Point; 3],
}

/// World-frame evaluation of a segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSample {
    pub point: Point,
    /// Unit travel direction.
    pub tangent: Vec2,
    /// Signed curvature along the travel direction; infinite at a cusp.
    pub curvature: f64,
}

impl Segment {
    fn from_solution(
        tri: &TriangleData,
        std: &StandardTriangle,
        transform: SimilarityTransform,
    ) -> Segment {
        let params = std.params;
        let (s0, s1) = if tri.swap_flag {
            (std.s_c, std.s_a)
        } else {
            (std.s_a, std.s_c)
        };
        let (t0, t1) = if tri.swap_flag {
            (std.angle_c, std.angle_a)
        } else {
            (std.angle_a, std.angle_c)
        };
        let inside = |x: f64| x >= s0.min(s1) && x <= s0.max(s1);
        let special = params.special_s().filter(|&b| inside(b));
        Segment {
            params,
            theta_domain: [t0, t1],
            s_domain: [s0, s1],
            std_anchor: if tri.swap_flag { std.c } else { std.a },
            transform,
            swap_flag: tri.swap_flag,
            contains_cusp: special.is_some() && params.alpha() > 1.0,
            contains_inflection: special.is_some() && params.alpha() < 0.0,
            control: [tri.a, tri.b, tri.c],
        }
    }

    /// Standard arc length at normalized parameter `t`.
    pub fn std_s(&self, t: f64) -> f64 {
        let [s0, s1] = self.s_domain;
        s0 + t * (s1 - s0)
    }

    /// Normalized parameter of the cusp or inflection point, if inside.
    pub fn special_t(&self) -> Option<f64> {
        let [s0, s1] = self.s_domain;
        if !(self.contains_cusp || self.contains_inflection) || s0 == s1 {
            return None;
        }
        self.params.special_s().map(|b| (b - s0) / (s1 - s0))
    }

    pub fn arc_length(&self) -> f64 {
        self.transform.scale * (self.s_domain[1] - self.s_domain[0]).abs()
    }

    /// Direction factor between standard arc length and user travel.
    pub(crate) fn travel_factor(&self) -> f64 {
        if self.s_domain[1] >= self.s_domain[0] {
            1.0
        } else {
            -1.0
        }
    }

    /// World displacement between two normalized parameters.
    pub fn displacement(&self, t0: f64, t1: f64, q: &QuadratureConfig) -> Result<Vec2> {
        let d = self
            .params
            .arc_increment(self.std_s(t0), self.std_s(t1), q)?;
        Ok(self.transform.apply_vec(d))
    }

    pub fn first_point(&self) -> Point {
        self.control[0]
    }

    /// Unit derivative of the standard curve with respect to arc length at
    /// parameter `t`. The end angles are taken from `theta_domain`.
    pub fn std_direction(&self, t: f64) -> Result<Vec2> {
        let s = self.std_s(t);
        let theta = if t == 0.0 {
            self.theta_domain[0]
        } else if t == 1.0 {
            self.theta_domain[1]
        } else {
            self.params.theta_of_s(s)?
        };
        Ok(Vec2::from_angle(theta) * self.params.travel_sign(s))
    }

    /// Signed radius of curvature of the standard curve at parameter `t`.
    pub fn std_rho(&self, t: f64) -> Result<f64> {
        Ok(self.params.rho_of_s(self.std_s(t))?.value())
    }
}

/// Point, unit travel direction and curvature at normalized parameter `t`.
pub fn evaluate_segment(seg: &Segment, t: f64, q: &QuadratureConfig) -> Result<SegmentSample> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!(
            "segment parameter {t} outside [0, 1]"
        )));
    }
    let s = seg.std_s(t);
    let point = seg.first_point() + seg.displacement(0.0, t, q)?;
    let dir = seg.std_direction(t)? * seg.travel_factor();
    let tangent = seg.transform.apply_vec(dir).normalize();
    let rho = seg.params.rho_of_s(s)?.value();
    // d theta / d s along the standard curve; past a cusp theta still grows.
    let k_std = if seg.params.alpha() > 1.0 {
        1.0 / rho.abs()
    } else {
        1.0 / rho
    };
    let mut curvature = k_std / seg.transform.scale;
    if seg.transform.reflect {
        curvature = -curvature;
    }
    curvature *= seg.travel_factor();
    Ok(SegmentSample {
        point,
        tangent,
        curvature,
    })
}

/// Full output of a fixed-`alpha` solve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct G1Solution {
    pub segment: Segment,
    pub lambda: LambdaResult,
    pub triangle: TriangleData,
}

/// Solves the G¹ problem for a fixed `alpha`.
pub fn solve_g1(problem: &HermiteProblem, alpha: f64, cfg: &LambdaConfig) -> Result<Segment> {
    solve_g1_full(problem, alpha, cfg).map(|s| s.segment)
}

pub fn solve_g1_full(
    problem: &HermiteProblem,
    alpha: f64,
    cfg: &LambdaConfig,
) -> Result<G1Solution> {
    let tri = build_triangle(problem)?;
    solve_on_triangle(&tri, alpha, cfg)
}

pub(crate) fn solve_on_triangle(
    tri: &TriangleData,
    alpha: f64,
    cfg: &LambdaConfig,
) -> Result<G1Solution> {
    let lr = lambda_bisection(alpha, tri, cfg)?;
    if !lr.converged {
        return Err(Error::NotFound {
            lo: lr.bracket.0,
            hi: lr.bracket.1,
            reason: "lambda bisection did not reach the angle tolerance",
        });
    }
    let branch = if lr.beyond_inf_point {
        ArcBranch::Beyond
    } else {
        ArcBranch::Within
    };
    let params = CurveParams::new(alpha, lr.lambda)?;
    let std = standard_triangle(params, tri.theta_delta, branch, &cfg.quadrature)?;
    let transform = fit_transform(tri, &std)?;
    Ok(G1Solution {
        segment: Segment::from_solution(tri, &std, transform),
        lambda: lr,
        triangle: *tri,
    })
}
