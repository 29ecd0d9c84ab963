//! Length-driven solving: choose `alpha` so that the first tangent of the
//! solved segment has a requested length.
//!
//! The first-tangent length is monotone in `alpha` on each instance:
//!
//! | endpoints | instance   | lengths          | length as `alpha` grows |
//! |-----------|------------|------------------|-------------------------|
//! | kept      | inflection | `(0, r_neg_inf)` | decreasing              |
//! | kept      | cusp       | `(0, r_pos_inf)` | increasing              |
//! | swapped   | inflection | `(r_neg_inf, inf)` | increasing            |
//! | swapped   | cusp       | `(r_pos_inf, inf)` | decreasing            |
//!
//! `r_neg_inf` and `r_pos_inf` are the radii of the two touching circles the
//! curve degenerates to as `alpha` goes to minus or plus infinity.

use serde::{Deserialize, Serialize};

use crate::curve::{snap_alpha, ALPHA_BAND};
use crate::error::{Error, LengthRange, Result};
use crate::geom::Vec2;
use crate::hermite::{
    build_triangle, solve_on_triangle, G1Solution, HermiteProblem, LambdaConfig, LambdaResult,
    Segment, TriangleData,
};

/// Which family of curves the length-driven solver searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    /// May contain an inflection point.
    Inflection,
    /// May contain a cusp.
    Cusp,
    /// Circular arc of an isosceles control triangle; `alpha` is arbitrary.
    Plain,
}

/// Limits of the first-tangent length of a problem. Neither limit is
/// attained by a finite `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentLimits {
    /// Length approached as `alpha -> -inf`.
    pub r_neg_inf: f64,
    /// Length approached as `alpha -> +inf`.
    pub r_pos_inf: f64,
    pub instance: Instance,
    /// Open range of lengths the instance can reach. For a plain arc both
    /// ends equal the arc radius.
    pub attainable: LengthRange,
    /// For strongly obtuse control triangles the length of some instances
    /// turns back towards the limit before `alpha` reaches the end of the
    /// search interval. This is the `alpha` of that extremum; the solver
    /// only searches the monotone side between it and the singular end.
    pub turning_alpha: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaConfig {
    pub lambda: LambdaConfig,
    /// Relative length mismatch accepted as a solution.
    pub length_tol: f64,
    pub max_iteration: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl Default for AlphaConfig {
    fn default() -> Self {
        AlphaConfig {
            lambda: LambdaConfig::default(),
            length_tol: 1e-4,
            max_iteration: 200,
            alpha_min: -999.0,
            alpha_max: 999.0,
        }
    }
}

impl AlphaConfig {
    pub fn validate(&self) -> Result<()> {
        self.lambda.validate()?;
        if !(self.length_tol > 0.0 && self.length_tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "length_tol must be positive, got {}",
                self.length_tol
            )));
        }
        if self.max_iteration == 0 {
            return Err(Error::InvalidInput(
                "max_iteration must be at least 1".into(),
            ));
        }
        if !(self.alpha_min < self.alpha_max
            && self.alpha_min.is_finite()
            && self.alpha_max.is_finite())
        {
            return Err(Error::InvalidInput(
                "alpha interval must be finite and non-empty".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaResult {
    /// Shape parameter; zero for a plain arc.
    pub alpha: f64,
    pub lambda: f64,
    pub segment: Segment,
    pub iterations: usize,
    /// Achieved minus requested first-tangent length.
    pub length_residual: f64,
    pub instance: Instance,
    pub lambda_result: LambdaResult,
}

// Touching-circle radius: |E - F + r m| = 2 r with m = n_E - n_F.
fn touching_radius(d: Vec2, m: Vec2) -> Result<f64> {
    let qa = m.dot(m) - 4.0;
    let qb = 2.0 * d.dot(m);
    let qc = d.dot(d);
    // |m| < 2 unless the tangents are parallel, so the roots have opposite signs.
    if !(qa < 0.0) {
        return Err(Error::NoPositiveRoot);
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if !(disc >= 0.0) {
        return Err(Error::NoPositiveRoot);
    }
    // Positive root, written to avoid cancellation.
    let r = if qb <= 0.0 {
        (-qb + disc.sqrt()) / (2.0 * qa)
    } else {
        2.0 * qc / (-qb - disc.sqrt())
    };
    let r = if r > 0.0 {
        r
    } else {
        (-qb - disc.sqrt()) / (2.0 * qa)
    };
    if r > 0.0 && r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NoPositiveRoot)
    }
}

/// Instance searched by [`alpha_bisection`]. With kept endpoints the sense
/// of `v_A` decides; with swapped endpoints the sense of `v_C_dir`.
pub fn select_instance(problem: &HermiteProblem) -> Result<Instance> {
    Ok(instance_of(&build_triangle(problem)?))
}

fn instance_of(tri: &TriangleData) -> Instance {
    if tri.swap_flag {
        if tri.c_toward_b {
            Instance::Cusp
        } else {
            Instance::Inflection
        }
    } else if !tri.a_toward_b {
        Instance::Cusp
    } else if tri.isosceles {
        Instance::Plain
    } else {
        Instance::Inflection
    }
}

/// Limits of the first-tangent length from the touching-circle system,
/// with default solver settings.
pub fn tangent_length_limits(problem: &HermiteProblem) -> Result<TangentLimits> {
    tangent_length_limits_with(problem, &AlphaConfig::default())
}

/// Limits of the first-tangent length. The attainable range is exact from
/// the touching-circle system when the length is monotone over the search
/// interval, otherwise its far end is the numerically located extremum.
pub fn tangent_length_limits_with(
    problem: &HermiteProblem,
    cfg: &AlphaConfig,
) -> Result<TangentLimits> {
    cfg.validate()?;
    let tri = build_triangle(problem)?;
    limits_of(&tri, cfg)
}

fn limits_of(tri: &TriangleData, cfg: &AlphaConfig) -> Result<TangentLimits> {
    let mut limits = circle_limits(tri)?;
    if let Some((alpha, len)) = turning_point(tri, &limits, cfg)? {
        limits.turning_alpha = Some(alpha);
        if tri.swap_flag {
            limits.attainable.min = len;
        } else {
            limits.attainable.max = len;
        }
    }
    Ok(limits)
}

fn circle_limits(tri: &TriangleData) -> Result<TangentLimits> {
    let (f, e) = (tri.first(), tri.end());
    // Normals of the alpha -> -inf circles in the counterclockwise canonical
    // frame, mapped back to the user frame.
    let sigma = if tri.reflect { -1.0 } else { 1.0 };
    let n_f = (tri.b - f).normalize().turn_left() * sigma;
    let n_e = (e - tri.b).normalize().turn_right() * sigma;
    let d = e - f;
    let m = n_e - n_f;
    let r_neg_inf = touching_radius(d, m)?;
    let r_pos_inf = touching_radius(d, -m)?;
    let instance = instance_of(tri);
    let attainable = match (tri.swap_flag, instance) {
        (_, Instance::Plain) => LengthRange {
            min: r_neg_inf,
            max: r_neg_inf,
        },
        (false, Instance::Inflection) => LengthRange {
            min: 0.0,
            max: r_neg_inf,
        },
        (false, Instance::Cusp) => LengthRange {
            min: 0.0,
            max: r_pos_inf,
        },
        (true, Instance::Inflection) => LengthRange {
            min: r_neg_inf,
            max: f64::INFINITY,
        },
        (true, Instance::Cusp) => LengthRange {
            min: r_pos_inf,
            max: f64::INFINITY,
        },
    };
    Ok(TangentLimits {
        r_neg_inf,
        r_pos_inf,
        instance,
        attainable,
        turning_alpha: None,
    })
}

// Golden-section steps used to locate a turning point.
const GOLDEN_STEPS: usize = 36;

// Kept-endpoint cusp lengths rise from zero and tend to `r_pos_inf`;
// swapped inflection lengths fall from infinity and tend to `r_neg_inf`.
// When the length at the far end of the interval sits on the wrong side of
// its limit, the length has an interior extremum which is located here by
// golden-section search in `log |alpha - pivot|`.
fn turning_point(
    tri: &TriangleData,
    limits: &TangentLimits,
    cfg: &AlphaConfig,
) -> Result<Option<(f64, f64)>> {
    let (pivot, far, sign, limit) = match (tri.swap_flag, limits.instance) {
        (false, Instance::Cusp) => (1.0, cfg.alpha_max, 1.0, limits.r_pos_inf),
        (true, Instance::Inflection) => (0.0, cfg.alpha_min, -1.0, limits.r_neg_inf),
        _ => return Ok(None),
    };
    if (far - pivot) * sign <= ALPHA_BAND {
        return Ok(None);
    }
    // Objective to maximise; leaving the instance scores worst.
    let score = |alpha: f64| -> Result<f64> {
        Ok(match probe(tri, limits.instance, alpha, &cfg.lambda)? {
            Probe::Length(len, _) => sign * len,
            _ => f64::NEG_INFINITY,
        })
    };
    let far_score = score(far)?;
    if !(far_score > sign * limit) {
        return Ok(None);
    }
    let to_alpha = |u: f64| pivot + sign * u.exp();
    let (mut a, mut b) = (ALPHA_BAND.ln(), ((far - pivot) * sign).ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = score(to_alpha(x1))?;
    let mut f2 = score(to_alpha(x2))?;
    for _ in 0..GOLDEN_STEPS {
        // Ties only happen outside the instance, which lies towards `a`.
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = score(to_alpha(x1))?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = score(to_alpha(x2))?;
        }
    }
    let (u, f) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    if !f.is_finite() || f <= far_score {
        return Ok(None);
    }
    Ok(Some((to_alpha(u), sign * f)))
}

/// Length of the world tangent vector `dP/dtheta` at the user's first point:
/// the transform scale times the standard radius of curvature there.
/// Infinite when the first point is an inflection.
pub fn first_tangent_length(segment: &Segment) -> f64 {
    match segment.params.rho_of_s(segment.s_domain[0]) {
        Ok(r) => segment.transform.scale * r.value().abs(),
        Err(_) => f64::INFINITY,
    }
}

// Relative width of the alpha bracket at which the bisection stops.
const ALPHA_REL_WIDTH: f64 = 1e-10;

enum Probe {
    Length(f64, Box<G1Solution>),
    TooSmall,
    TooLarge,
    // The lambda solve failed without saying on which side the root lies.
    Failed,
}

// A failed solve means alpha left the instance on this side.
fn skip(tri: &TriangleData, instance: Instance) -> Probe {
    match (tri.swap_flag, instance) {
        (false, Instance::Cusp) | (true, Instance::Cusp) => Probe::TooSmall,
        _ => Probe::TooLarge,
    }
}

fn probe(tri: &TriangleData, instance: Instance, alpha: f64, cfg: &LambdaConfig) -> Result<Probe> {
    match (tri.swap_flag, instance) {
        (false, Instance::Cusp) if alpha <= 1.0 => return Ok(Probe::TooSmall),
        (true, Instance::Inflection) if alpha >= 1.0 => return Ok(Probe::TooLarge),
        _ => {}
    }
    let sol = match solve_on_triangle(tri, alpha, cfg) {
        Ok(s) => s,
        Err(
            Error::NotFound { .. }
            | Error::NotSimilar { .. }
            | Error::Quadrature { .. }
            | Error::Domain { .. },
        ) => return Ok(Probe::Failed),
        Err(e) => return Err(e),
    };
    if tri.swap_flag {
        // The first user point lies past the inflection exactly for alphas
        // below the one that puts it on the inflection.
        let beyond = sol.lambda.beyond_inf_point;
        match instance {
            Instance::Inflection if !beyond => return Ok(Probe::TooLarge),
            Instance::Cusp if beyond => return Ok(Probe::TooSmall),
            _ => {}
        }
    }
    Ok(Probe::Length(
        first_tangent_length(&sol.segment),
        Box::new(sol),
    ))
}

// Probes `mid`; when the lambda solve fails there, tries a few other points
// of the bracket before falling back to the side a failure usually means.
// Lambda solves can fail on a thin band of alpha for very elongated
// triangles without alpha having left the instance.
fn probe_near(
    tri: &TriangleData,
    instance: Instance,
    mid: f64,
    bracket: (f64, f64),
    cfg: &LambdaConfig,
) -> Result<(f64, Probe)> {
    let first = probe(tri, instance, mid, cfg)?;
    if !matches!(first, Probe::Failed) {
        return Ok((mid, first));
    }
    let w = bracket.1 - bracket.0;
    for k in [1.0, -1.0, 2.0, -2.0, 3.0, -3.0] {
        let at = snap_alpha(mid + k * w / 8.0);
        if !(at > bracket.0 && at < bracket.1) {
            continue;
        }
        match probe(tri, instance, at, cfg)? {
            Probe::Failed => {}
            p => return Ok((at, p)),
        }
    }
    Ok((mid, skip(tri, instance)))
}

/// Finds `alpha` whose segment has first-tangent length `target_length`.
///
/// Bisects over `[alpha_min, alpha_max]` (cut at the turning point, if any),
/// probing each candidate with a `lambda` solve. The search runs until the
/// `alpha` bracket is narrow so that `alpha` itself is accurate; the result
/// is accepted when the relative length mismatch is below `length_tol`.
pub fn alpha_bisection(
    problem: &HermiteProblem,
    target_length: f64,
    cfg: &AlphaConfig,
) -> Result<AlphaResult> {
    cfg.validate()?;
    if !(target_length > 0.0 && target_length.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "target length must be positive, got {target_length}"
        )));
    }
    let tri = build_triangle(problem)?;
    let limits = limits_of(&tri, cfg)?;
    let instance = limits.instance;

    if instance == Instance::Plain {
        let sol = solve_on_triangle(&tri, 0.0, &cfg.lambda)?;
        let len = first_tangent_length(&sol.segment);
        if (len - target_length).abs() > cfg.length_tol * target_length {
            return Err(Error::Unreachable {
                target: target_length,
                range: LengthRange { min: len, max: len },
            });
        }
        return Ok(AlphaResult {
            alpha: 0.0,
            lambda: 0.0,
            segment: sol.segment,
            iterations: 0,
            length_residual: len - target_length,
            instance,
            lambda_result: sol.lambda,
        });
    }

    if !limits.attainable.contains_open(target_length) {
        return Err(Error::Unreachable {
            target: target_length,
            range: limits.attainable,
        });
    }
    let increasing = matches!(
        (tri.swap_flag, instance),
        (false, Instance::Cusp) | (true, Instance::Inflection)
    );

    let (mut lo, mut hi) = (cfg.alpha_min, cfg.alpha_max);
    match (tri.swap_flag, limits.turning_alpha) {
        (false, Some(t)) => hi = t,
        (true, Some(t)) => lo = t,
        _ => {}
    }
    let mut best: Option<(f64, f64, Box<G1Solution>)> = None;
    let mut iterations = 0;
    while iterations < cfg.max_iteration {
        let mid = snap_alpha(0.5 * (lo + hi));
        if !(mid > lo && mid < hi) {
            break;
        }
        iterations += 1;
        let (at, outcome) = probe_near(&tri, instance, mid, (lo, hi), &cfg.lambda)?;
        match outcome {
            Probe::TooSmall => lo = at,
            Probe::TooLarge => hi = at,
            Probe::Failed => unreachable!("probe_near resolves failures"),
            Probe::Length(len, sol) => {
                let diff = len - target_length;
                if best.as_ref().is_none_or(|b| diff.abs() <= b.1.abs()) {
                    best = Some((at, diff, sol));
                }
                if diff == 0.0 {
                    break;
                }
                if (diff > 0.0) == increasing {
                    hi = at;
                } else {
                    lo = at;
                }
            }
        }
        if hi - lo <= ALPHA_REL_WIDTH * mid.abs().max(1.0) {
            break;
        }
    }
    match best {
        Some((alpha, diff, sol)) if diff.abs() <= cfg.length_tol * target_length => {
            Ok(AlphaResult {
                alpha,
                lambda: sol.lambda.lambda,
                segment: sol.segment,
                iterations,
                length_residual: diff,
                instance,
                lambda_result: sol.lambda,
            })
        }
        _ => Err(Error::NotFound {
            lo,
            hi,
            reason: "no alpha in the search interval reaches the requested length",
        }),
    }
}

/// Segment for the problem's own first-tangent length.
pub fn solve_for_length(problem: &HermiteProblem, cfg: &AlphaConfig) -> Result<AlphaResult> {
    alpha_bisection(problem, problem.v_a.length(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::hermite::solve_g1;

    fn sixty_thirty() -> HermiteProblem {
        HermiteProblem::new(
            Point::ORIGIN,
            Point::new(3.0, 0.0),
            Vec2::from_angle(60f64.to_radians()),
            Vec2::from_angle(-30f64.to_radians()),
        )
        .unwrap()
    }

    #[test]
    fn limits_sixty_thirty() {
        let l = tangent_length_limits(&sixty_thirty()).unwrap();
        // roots of 2 r^2 -+ b r - 9 = 0 with b = 3 (sqrt 3 - 1)
        let b = 3.0 * (3f64.sqrt() - 1.0);
        let small = (-b + (b * b + 72.0).sqrt()) / 4.0;
        let large = (b + (b * b + 72.0).sqrt()) / 4.0;
        assert!((l.r_neg_inf - small).abs() < 1e-14, "{}", l.r_neg_inf);
        assert!((l.r_pos_inf - large).abs() < 1e-14);
        assert_eq!(l.instance, Instance::Inflection);
        let away = HermiteProblem {
            v_a: -sixty_thirty().v_a,
            ..sixty_thirty()
        };
        assert_eq!(select_instance(&away).unwrap(), Instance::Cusp);
    }

    #[test]
    fn limits_symmetric() {
        let p = HermiteProblem::new(
            Point::ORIGIN,
            Point::new(2.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, -1.0),
        )
        .unwrap();
        let l = tangent_length_limits(&p).unwrap();
        assert!((l.r_neg_inf - 2f64.sqrt()).abs() < 1e-15);
        assert!((l.r_pos_inf - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l.instance, Instance::Plain);
    }

    #[test]
    fn length_approaches_limits() {
        let cfg = LambdaConfig::default();
        let p = sixty_thirty();
        let l = tangent_length_limits(&p).unwrap();
        let len = first_tangent_length(&solve_g1(&p, -999.0, &cfg).unwrap());
        assert!(len < l.r_neg_inf && l.r_neg_inf - len < 2e-3);
        let away = HermiteProblem { v_a: -p.v_a, ..p };
        let len = first_tangent_length(&solve_g1(&away, 999.0, &cfg).unwrap());
        assert!(len < l.r_pos_inf && l.r_pos_inf - len < 1e-2);
    }

    #[test]
    fn round_trip_each_instance() {
        let cfg = AlphaConfig::default();
        let p = sixty_thirty();
        let away = HermiteProblem { v_a: -p.v_a, ..p };
        let swapped = HermiteProblem::new(
            p.c,
            p.a,
            Vec2::from_angle(150f64.to_radians()),
            Vec2::from_angle(-120f64.to_radians()),
        )
        .unwrap();
        let swapped_cusp = HermiteProblem {
            v_c_dir: -swapped.v_c_dir,
            ..swapped
        };
        for (prob, alpha) in [
            (p, -2.0),
            (p, 0.5),
            (p, 1.5),
            (away, 2.5),
            (away, 7.0),
            (swapped, -3.0),
            (swapped_cusp, 2.5),
            (swapped_cusp, -0.5),
        ] {
            let seg = solve_g1(&prob, alpha, &cfg.lambda).unwrap();
            let len = first_tangent_length(&seg);
            let r =
                alpha_bisection(&prob, len, &cfg).unwrap_or_else(|e| panic!("alpha {alpha}: {e}"));
            assert!(
                (r.alpha - alpha).abs() < 1e-6,
                "alpha {alpha} got {}",
                r.alpha
            );
        }
    }

    #[test]
    fn unreachable_at_limit() {
        let p = sixty_thirty();
        let l = tangent_length_limits(&p).unwrap();
        let e = alpha_bisection(&p, l.r_neg_inf, &AlphaConfig::default()).unwrap_err();
        assert!(matches!(e, Error::Unreachable { .. }));
    }

    #[test]
    fn isosceles_is_plain() {
        let p = HermiteProblem::new(
            Point::ORIGIN,
            Point::new(2.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, -1.0),
        )
        .unwrap();
        let r = alpha_bisection(&p, 2f64.sqrt(), &AlphaConfig::default()).unwrap();
        assert_eq!(r.instance, Instance::Plain);
        assert_eq!(r.lambda, 0.0);
        assert!(matches!(
            alpha_bisection(&p, 1.0, &AlphaConfig::default()),
            Err(Error::Unreachable { .. })
        ));
    }
}
