// Reference computations shared by the integration tests. Everything here is
// written from the closed forms of the curve family and does not call the
// library's evaluation code, so it can serve as an oracle.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use log_aesthetic::{HermiteProblem, Point, Vec2};
use num_complex::Complex64;
use rand::Rng;

/// Double exponential quadrature of `f` over `[a, b]`. Copes with bounded
/// integrands whose derivatives blow up at the ends.
pub fn tanh_sinh<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let sum_at = |h: f64| {
        let mut total = f(mid) * FRAC_PI_2;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let e = (-2.0 * u).exp();
            // 1 - tanh(u) and sech(u)^2, both without cancellation.
            let gap = 2.0 * e / (1.0 + e);
            let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            if w < 1e-300 || half * gap == 0.0 {
                break;
            }
            total += (f(b - half * gap) + f(a + half * gap)) * w;
            k += 1;
        }
        total * (h * half)
    };
    let mut h = 0.5;
    let mut prev = sum_at(h);
    for _ in 0..10 {
        h *= 0.5;
        let next = sum_at(h);
        if (next - prev).norm() <= 1e-15 * next.norm().max(half.abs()) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Standard curve with `rho(0) = 1`, `theta(0) = 0`, starting at the origin
/// along the x axis.
#[derive(Clone, Copy, Debug)]
pub struct RefCurve {
    pub alpha: f64,
    pub lambda: f64,
}

impl RefCurve {
    pub fn new(alpha: f64, lambda: f64) -> RefCurve {
        RefCurve { alpha, lambda }
    }

    /// Arc length of the inflection (`alpha < 0`) or the cusp (`alpha > 1`).
    pub fn b_s(&self) -> f64 {
        -1.0 / (self.lambda * self.alpha)
    }

    /// Tangential angle of the inflection or the cusp.
    pub fn b_theta(&self) -> f64 {
        1.0 / (self.lambda * (1.0 - self.alpha))
    }

    /// Tangential angle at arc length `s`, mirrored past the inflection.
    pub fn theta_of_s(&self, s: f64) -> f64 {
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            s
        } else if a == 0.0 {
            (1.0 - (-l * s).exp()) / l
        } else if a == 1.0 {
            (l * s).ln_1p() / l
        } else {
            let u = (1.0 + l * a * s).abs();
            (u.powf((a - 1.0) / a) - 1.0) / (l * (a - 1.0))
        }
    }

    /// Arc length at angle `theta` before the inflection, or past it when
    /// `beyond` is set.
    pub fn s_of_theta(&self, theta: f64, beyond: bool) -> f64 {
        let (a, l) = (self.alpha, self.lambda);
        let within = if l == 0.0 {
            theta
        } else if a == 0.0 {
            -(-l * theta).ln_1p() / l
        } else if a == 1.0 {
            (l * theta).exp_m1() / l
        } else {
            let u = (1.0 + l * (a - 1.0) * theta).powf(a / (a - 1.0));
            (u - 1.0) / (l * a)
        };
        if beyond {
            2.0 * self.b_s() - within
        } else {
            within
        }
    }

    /// `lambda` that puts the inflection (or, for `alpha > 1`, the cusp) at
    /// angle `theta_delta` from the reference point.
    pub fn lambda_at_bound(alpha: f64, theta_delta: f64) -> f64 {
        1.0 / (theta_delta * (1.0 - alpha).abs())
    }

    /// Signed radius of curvature by angle, negative past a cusp.
    pub fn rho_of_theta(&self, theta: f64) -> f64 {
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            1.0
        } else if a == 1.0 {
            (l * theta).exp()
        } else {
            let base = 1.0 + l * (a - 1.0) * theta;
            base.signum() * base.abs().powf(1.0 / (a - 1.0))
        }
    }

    /// Point at arc length `s >= 0`, crossing the inflection if needed.
    pub fn point_by_arc(&self, s: f64) -> Complex64 {
        let f = |x: f64| Complex64::from_polar(1.0, self.theta_of_s(x));
        if self.alpha < 0.0 && self.lambda > 0.0 && s > self.b_s() {
            tanh_sinh(f, 0.0, self.b_s()) + tanh_sinh(f, self.b_s(), s)
        } else {
            tanh_sinh(f, 0.0, s)
        }
    }

    /// Point at angle `theta` by integrating `rho e^{i theta}`, crossing the
    /// cusp if needed.
    pub fn point_by_theta(&self, theta: f64) -> Complex64 {
        let f = |x: f64| Complex64::from_polar(1.0, x) * self.rho_of_theta(x);
        let b = self.b_theta();
        if self.alpha > 1.0 && self.lambda > 0.0 && theta < b {
            -(tanh_sinh(f, b, 0.0) + tanh_sinh(f, theta, b))
        } else if theta < 0.0 {
            -tanh_sinh(f, theta, 0.0)
        } else {
            tanh_sinh(f, 0.0, theta)
        }
    }
}

pub fn to_point(z: Complex64) -> Point {
    Point::new(z.re, z.im)
}

/// Standard-frame endpoints of a curve turning by `theta_delta`, with unit
/// travel directions. `rho_a` is the signed radius at the first point.
#[derive(Clone, Copy, Debug)]
pub struct Synth {
    pub curve: RefCurve,
    pub theta_delta: f64,
    pub a: Point,
    pub c: Point,
    pub t_a: Vec2,
    pub t_c: Vec2,
    pub rho_a: f64,
    pub beyond: bool,
}

/// For `alpha <= 1` the curve runs from the origin to angle `theta_delta`,
/// past the inflection if `beyond`; for `alpha > 1` it runs from angle
/// `-theta_delta` to the origin, possibly through the cusp.
pub fn synthesize(alpha: f64, lambda: f64, theta_delta: f64, beyond: bool) -> Synth {
    let curve = RefCurve::new(alpha, lambda);
    if alpha > 1.0 {
        let rho_a = curve.rho_of_theta(-theta_delta);
        Synth {
            curve,
            theta_delta,
            a: to_point(curve.point_by_theta(-theta_delta)),
            c: Point::ORIGIN,
            t_a: Vec2::from_angle(-theta_delta) * rho_a.signum(),
            t_c: Vec2::new(1.0, 0.0),
            rho_a,
            beyond: false,
        }
    } else {
        let s_c = curve.s_of_theta(theta_delta, beyond);
        Synth {
            curve,
            theta_delta,
            a: Point::ORIGIN,
            c: to_point(curve.point_by_arc(s_c)),
            t_a: Vec2::new(1.0, 0.0),
            t_c: Vec2::from_angle(theta_delta),
            rho_a: 1.0,
            beyond,
        }
    }
}

/// Parameters of the tangent line intersection `a + p t_a = c + q t_c`.
pub fn intersection(s: &Synth) -> (f64, f64) {
    let d = s.c - s.a;
    let den = s.t_a.cross(s.t_c);
    (d.cross(s.t_c) / den, d.cross(s.t_a) / den)
}

fn interior(p: Point, b: Point, o: Point) -> f64 {
    let (u, v) = (b - p, o - p);
    (u.dot(v) / (u.length() * v.length()))
        .clamp(-1.0, 1.0)
        .acos()
}

/// Signed angle from the travel direction at the first point to the chord.
pub fn chord_angle(s: &Synth) -> f64 {
    s.t_a.signed_angle_to(s.c - s.a)
}

/// Whether the synthesized endpoints form a control triangle of the kind
/// the solver handles: the tangent lines meet behind `C`, the curve turns
/// counterclockwise around the apex and the turning matches the triangle.
/// Curves past the inflection are kept only when no curve short of the
/// inflection fits the same triangle, otherwise the answer is not unique.
pub fn drawable(s: &Synth) -> bool {
    let (p, q) = intersection(s);
    if !(p.is_finite() && q < 0.0 && p != 0.0) {
        return false;
    }
    let b = s.a + s.t_a * p;
    if (b - s.a).cross(s.c - b) <= 0.0 {
        return false;
    }
    if (interior(s.a, b, s.c) + interior(s.c, b, s.a) - s.theta_delta).abs() > 1e-9 {
        return false;
    }
    if s.beyond {
        let at_inflection = synthesize(
            s.curve.alpha,
            RefCurve::lambda_at_bound(s.curve.alpha, s.theta_delta),
            s.theta_delta,
            false,
        );
        if chord_angle(s).rem_euclid(2.0 * PI) <= chord_angle(&at_inflection) {
            return false;
        }
    }
    true
}

/// Random similarity applied to synthesized problems.
#[derive(Clone, Copy, Debug)]
pub struct Placement {
    pub scale: f64,
    pub rotation: f64,
    pub reflect: bool,
    pub shift: Vec2,
}

impl Placement {
    pub fn random<R: Rng>(rng: &mut R) -> Placement {
        Placement {
            scale: 10f64.powf(rng.gen_range(-2.0..2.0)),
            rotation: rng.gen_range(0.0..2.0 * PI),
            reflect: rng.gen_bool(0.5),
            shift: Vec2::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0)),
        }
    }

    pub fn vec(&self, v: Vec2) -> Vec2 {
        let v = if self.reflect {
            Vec2::new(v.x, -v.y)
        } else {
            v
        };
        let (s, c) = self.rotation.sin_cos();
        Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y) * self.scale
    }

    pub fn point(&self, p: Point) -> Point {
        Point::ORIGIN + self.vec(p.to_vec2()) + self.shift
    }
}

/// World problem of a synthesized curve. The first tangent carries the
/// curve's own tangent length.
pub fn world_problem(s: &Synth, place: &Placement) -> HermiteProblem {
    let v_a = place.vec(s.t_a) * s.rho_a.abs();
    let v_c = place.vec(s.t_c).normalize();
    HermiteProblem::new(place.point(s.a), place.point(s.c), v_a, v_c)
        .expect("synthesized problem is valid")
}

/// Circle through three points: centre and radius.
pub fn circle_through(p: Point, q: Point, r: Point) -> (Point, f64) {
    let (b, c) = (q - p, r - p);
    let d = 2.0 * b.cross(c);
    let (b2, c2) = (b.dot(b), c.dot(c));
    let centre = Vec2::new(c.y * b2 - b.y * c2, b.x * c2 - c.x * b2) * (1.0 / d);
    (p + centre, centre.length())
}

/// Positive roots of the touching circle system `|C - A + r m| = 2 r`. The
/// circles touch the triangle edges `AB` and `BC` at `A` and `C` from
/// opposite sides, which gives the quadratic
/// `(|m|^2 - 4) r^2 + 2 (d.m) r + |d|^2 = 0` with `d = C - A`.
pub fn touching_roots(problem: &HermiteProblem) -> [f64; 2] {
    let (u, w) = (problem.v_a.normalize(), problem.v_c_dir.normalize());
    let d = problem.c - problem.a;
    let p = d.cross(w) / u.cross(w);
    let b = problem.a + u * p;
    let n_a = (b - problem.a).normalize().turn_left();
    let n_c = (problem.c - b).normalize().turn_left();
    [1.0, -1.0].map(|side| {
        let m = (n_c + n_a) * side;
        let (qa, qb, qc) = (m.dot(m) - 4.0, 2.0 * d.dot(m), d.dot(d));
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let roots = [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)];
        roots
            .into_iter()
            .filter(|r| *r > 0.0)
            .fold(f64::NAN, f64::max)
    })
}

/// Curvature of the circle through three points, signed by turning sense.
pub fn menger(p: Point, q: Point, r: Point) -> f64 {
    let cross = (q - p).cross(r - q);
    2.0 * cross / (p.distance(q) * q.distance(r) * p.distance(r))
}
