//! Standard-form log-aesthetic curves and their cusp/inflection extensions.
//!
//! A curve is fixed by the shape parameter `alpha` and the scale parameter
//! `lambda`. It passes through the origin at `theta = 0` with unit tangent
//! `(1, 0)` and unit radius of curvature.
//!
//! For `alpha > 1` the curve is continued through its cusp at `theta = b_theta`
//! by mirroring about the cusp tangent; for `alpha < 0` it is continued through
//! its inflection point at `s = b_s` by a point reflection. In both cases the
//! continuation is addressed by arc length `s`, which stays a geometric
//! (unit-speed, monotone) parameter across the special point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, Vec2};
use crate::quadrature::{integrate, integrate_about, QuadratureConfig};

/// Half-width of the excluded `alpha` bands around 0 and 1.
pub const ALPHA_BAND: f64 = 1e-4;

/// Intrinsic parameters of a standard-form curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct CurveParams {
    alpha: f64,
    lambda: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    lambda: f64,
}

impl TryFrom<RawParams> for CurveParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        CurveParams::new(raw.alpha, raw.lambda)
    }
}

/// Moves `alpha` out of the excluded bands to the nearest admissible value
/// (the band centre itself or the band edge).
pub fn snap_alpha(alpha: f64) -> f64 {
    for centre in [0.0, 1.0] {
        let d = alpha - centre;
        if d != 0.0 && d.abs() < ALPHA_BAND {
            return if d.abs() < 0.5 * ALPHA_BAND {
                centre
            } else {
                centre + ALPHA_BAND.copysign(d)
            };
        }
    }
    alpha
}

/// Whether a bound limits the parameter from above or below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
    pub kind: BoundKind,
}

/// Bounds of the tangential angle and of the arc length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub b_theta: Option<Bound>,
    pub b_s: Option<Bound>,
}

/// Signed radius of curvature. Negative past a cusp (`alpha > 1`) or past an
/// inflection point (`alpha < 0`); zero at a cusp, infinite at an inflection.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SignedRadius(pub f64);

impl SignedRadius {
    pub fn value(self) -> f64 {
        self.0
    }
    pub fn is_cusp(self) -> bool {
        self.0 == 0.0
    }
    pub fn is_inflection(self) -> bool {
        self.0.is_infinite()
    }
}

/// Which pre-image of a tangential angle to take when `alpha < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcBranch {
    Within,
    Beyond,
}

/// Curve parameter for [`CurveParams::curvature_at`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum At {
    Theta(f64),
    Arc(f64),
}

fn domain(value: f64, reason: &'static str) -> Error {
    Error::Domain { value, reason }
}

impl CurveParams {
    /// Validates the parameters. `alpha` inside an excluded band is snapped
    /// with [`snap_alpha`].
    pub fn new(alpha: f64, lambda: f64) -> Result<CurveParams> {
        if !alpha.is_finite() {
            return Err(domain(alpha, "alpha must be finite"));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(domain(lambda, "lambda must be finite and non-negative"));
        }
        Ok(CurveParams {
            alpha: snap_alpha(alpha),
            lambda,
        })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            b_theta: self.b_theta().map(|value| Bound {
                value,
                kind: if self.alpha < 1.0 {
                    BoundKind::Upper
                } else {
                    BoundKind::Lower
                },
            }),
            b_s: self.b_s().map(|value| Bound {
                value,
                kind: if self.alpha < 0.0 {
                    BoundKind::Upper
                } else {
                    BoundKind::Lower
                },
            }),
        }
    }

    /// `1 / (lambda (1 - alpha))`, absent for `alpha = 1` or `lambda = 0`.
    pub fn b_theta(&self) -> Option<f64> {
        (self.lambda > 0.0 && self.alpha != 1.0).then(|| 1.0 / (self.lambda * (1.0 - self.alpha)))
    }

    /// `-1 / (alpha lambda)`, absent for `alpha = 0` or `lambda = 0`.
    pub fn b_s(&self) -> Option<f64> {
        (self.lambda > 0.0 && self.alpha != 0.0).then(|| -1.0 / (self.alpha * self.lambda))
    }

    /// Arc-length position of the cusp or inflection point, if the curve has one.
    pub fn special_s(&self) -> Option<f64> {
        if self.alpha < 0.0 || self.alpha > 1.0 {
            self.b_s()
        } else {
            None
        }
    }

    fn rho_theta_raw(&self, theta: f64) -> f64 {
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            return 1.0;
        }
        if a == 1.0 {
            return (l * theta).exp();
        }
        let x = (a - 1.0) * l * theta;
        if x > -1.0 {
            (x.ln_1p() / (a - 1.0)).exp()
        } else if x == -1.0 {
            if a > 1.0 {
                0.0
            } else if a < 0.0 {
                f64::INFINITY
            } else {
                f64::NAN
            }
        } else if a > 1.0 {
            -((-1.0 - x).ln() / (a - 1.0)).exp()
        } else {
            f64::NAN
        }
    }

    /// Signed radius of curvature at tangential angle `theta`. For `alpha > 1`
    /// every angle is accepted and angles below the cusp give negative radii.
    pub fn rho_of_theta(&self, theta: f64) -> Result<SignedRadius> {
        if !theta.is_finite() {
            return Err(domain(theta, "theta must be finite"));
        }
        let r = self.rho_theta_raw(theta);
        if r.is_nan() {
            return Err(domain(
                theta,
                "theta lies beyond the bound of the tangential angle",
            ));
        }
        Ok(SignedRadius(r))
    }

    fn rho_s_raw(&self, s: f64) -> f64 {
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            return 1.0;
        }
        if a == 0.0 {
            return (l * s).exp();
        }
        let y = a * l * s;
        if y > -1.0 {
            (y.ln_1p() / a).exp()
        } else if y == -1.0 {
            if a > 1.0 {
                0.0
            } else if a < 0.0 {
                f64::INFINITY
            } else {
                f64::NAN
            }
        } else if !(0.0..=1.0).contains(&a) {
            -((-1.0 - y).ln() / a).exp()
        } else {
            f64::NAN
        }
    }

    /// Signed radius of curvature at arc length `s`. The branch follows from
    /// `s`: past `b_s` the radius is negative for `alpha < 0` and `alpha > 1`.
    pub fn rho_of_s(&self, s: f64) -> Result<SignedRadius> {
        if !s.is_finite() {
            return Err(domain(s, "s must be finite"));
        }
        let r = self.rho_s_raw(s);
        if r.is_nan() {
            return Err(domain(s, "s lies beyond the bound of the arc length"));
        }
        Ok(SignedRadius(r))
    }

    fn theta_s_raw(&self, s: f64) -> f64 {
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            return s;
        }
        if a == 0.0 {
            return -(-l * s).exp_m1() / l;
        }
        let y = a * l * s;
        if a == 1.0 {
            return if y > -1.0 { y.ln_1p() / l } else { f64::NAN };
        }
        let p = (a - 1.0) / a;
        let k = l * (a - 1.0);
        if y > -1.0 {
            (p * y.ln_1p()).exp_m1() / k
        } else if y == -1.0 {
            if !(0.0..=1.0).contains(&a) {
                -1.0 / k
            } else {
                f64::NAN
            }
        } else {
            let m = (p * (-1.0 - y).ln()).exp();
            if a < 0.0 {
                (m - 1.0) / k
            } else if a > 1.0 {
                (-m - 1.0) / k
            } else {
                f64::NAN
            }
        }
    }

    /// Tangential angle at arc length `s`. For `alpha < 0` the angle turns back
    /// after the inflection point (even about `b_s`); for `alpha > 1` it keeps
    /// decreasing past the cusp (odd about `b_s`).
    pub fn theta_of_s(&self, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(domain(s, "s must be finite"));
        }
        let t = self.theta_s_raw(s);
        if t.is_nan() {
            return Err(domain(s, "s lies beyond the bound of the arc length"));
        }
        Ok(t)
    }

    /// Arc length at tangential angle `theta`. `branch` picks the pre-image
    /// for `alpha < 0` and is ignored otherwise. For `alpha > 1`, angles below
    /// the cusp map to arc lengths below `b_s`.
    pub fn s_of_theta(&self, theta: f64, branch: ArcBranch) -> Result<f64> {
        if !theta.is_finite() {
            return Err(domain(theta, "theta must be finite"));
        }
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            return Ok(theta);
        }
        let beyond_bound = || domain(theta, "theta lies beyond the bound of the tangential angle");
        if a == 0.0 {
            if theta * l >= 1.0 {
                return Err(beyond_bound());
            }
            return Ok(-(-theta * l).ln_1p() / l);
        }
        if a == 1.0 {
            return Ok((theta * l).exp_m1() / l);
        }
        let x = (a - 1.0) * theta * l;
        let q = a / (a - 1.0);
        let m = a * l;
        if a > 1.0 {
            if x >= -1.0 {
                return Ok((q * x.ln_1p()).exp_m1() / m);
            }
            // Mirror through the cusp: s = 2 b_s - S(2 b_theta - theta).
            let bs = -1.0 / m;
            let mirrored = (q * (-1.0 - x).ln()).exp_m1() / m;
            return Ok(2.0 * bs - mirrored);
        }
        // alpha < 1
        if x < -1.0 || (a > 0.0 && x == -1.0) {
            return Err(beyond_bound());
        }
        match (branch, a < 0.0) {
            (ArcBranch::Beyond, true) => Ok(-((q * x.ln_1p()).exp() + 1.0) / m),
            _ => Ok((q * x.ln_1p()).exp_m1() / m),
        }
    }

    /// Unit travel direction sign at arc length `s`: -1 past the cusp.
    pub(crate) fn travel_sign(&self, s: f64) -> f64 {
        if self.alpha > 1.0 && self.lambda > 0.0 && self.alpha * self.lambda * s < -1.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Integral of the travel direction over `[s0, s1]`, i.e. the chord from
    /// the point at `s0` to the point at `s1`.
    pub fn arc_increment(&self, s0: f64, s1: f64, q: &QuadratureConfig) -> Result<Vec2> {
        self.arc_increment_c(s0, s1, q).map(Vec2::from_complex)
    }

    pub(crate) fn arc_increment_c(
        &self,
        s0: f64,
        s1: f64,
        q: &QuadratureConfig,
    ) -> Result<Complex64> {
        self.theta_of_s(s0)?;
        self.theta_of_s(s1)?;
        if self.lambda == 0.0 {
            let c = |s: f64| Complex64::new(s.sin(), 1.0 - s.cos());
            return Ok(c(s1) - c(s0));
        }
        let mut f = |s: f64| {
            let t = self.theta_s_raw(s);
            Complex64::from_polar(self.travel_sign(s), t)
        };
        match self.special_s() {
            // The angle behaves like |s - b_s|^p with p = (alpha - 1) / alpha.
            Some(bs) => {
                let p = (self.alpha - 1.0) / self.alpha;
                let k = if self.alpha < 0.0 {
                    if p >= 2.0 {
                        1
                    } else {
                        4
                    }
                } else {
                    ((2.0 / p).ceil() as i32).clamp(1, 8)
                };
                integrate_about(&mut f, s0, s1, bs, k, q)
            }
            None => integrate(&mut f, s0, s1, q),
        }
    }

    /// Point at arc length `s`.
    pub fn point_by_arc(&self, s: f64, q: &QuadratureConfig) -> Result<Point> {
        self.arc_increment_c(0.0, s, q).map(Point::from_complex)
    }

    /// Point at tangential angle `theta`. For `alpha < 0` this is the
    /// pre-image before the inflection point; points beyond it are addressed
    /// by arc length. For `alpha > 1` angles below the cusp are accepted.
    pub fn point_by_theta(&self, theta: f64, q: &QuadratureConfig) -> Result<Point> {
        self.point_by_theta_c(theta, q).map(Point::from_complex)
    }

    pub(crate) fn point_by_theta_c(&self, theta: f64, q: &QuadratureConfig) -> Result<Complex64> {
        self.rho_of_theta(theta)?;
        let (a, l) = (self.alpha, self.lambda);
        if l == 0.0 {
            return Ok(Complex64::new(theta.sin(), 1.0 - theta.cos()));
        }
        if a > 1.0 || (theta <= 0.0 && a >= 0.0) {
            // Radius stays bounded on this range, so integrate over the angle.
            let mut f = |psi: f64| Complex64::from_polar(self.rho_theta_raw(psi), psi);
            return match self.b_theta().filter(|_| a > 1.0) {
                // The radius behaves like |theta - b_theta|^(1 / (alpha - 1)).
                Some(bt) => {
                    let g = 1.0 / (a - 1.0);
                    let k = ((9.0 / (1.0 + g)).ceil() as i32).clamp(1, 9);
                    integrate_about(&mut f, 0.0, theta, bt, k, q)
                }
                None => integrate(&mut f, 0.0, theta, q),
            };
        }
        let s = self.s_of_theta(theta, ArcBranch::Within)?;
        self.arc_increment_c(0.0, s, q)
    }

    /// `rho_ext(theta) * (cos theta, sin theta)`: the derivative of the point
    /// with respect to the tangential angle.
    pub fn tangent_by_theta(&self, theta: f64) -> Result<Vec2> {
        let r = self.rho_of_theta(theta)?.0;
        if r.is_infinite() {
            return Err(Error::UnboundedTangent);
        }
        Ok(Vec2::from_angle(theta) * r)
    }

    /// Unit derivative of the point with respect to arc length. Past the cusp
    /// of an `alpha > 1` curve it points opposite to `(cos theta, sin theta)`.
    pub fn tangent_by_arc(&self, s: f64) -> Result<Vec2> {
        let t = self.theta_of_s(s)?;
        Ok(Vec2::from_angle(t) * self.travel_sign(s))
    }

    /// `1 / rho_ext`, zero at an inflection point.
    pub fn curvature_at(&self, at: At) -> Result<f64> {
        let r = match at {
            At::Theta(t) => self.rho_of_theta(t)?,
            At::Arc(s) => self.rho_of_s(s)?,
        };
        if r.is_cusp() {
            return Err(Error::SingularCurvature);
        }
        Ok(1.0 / r.0)
    }
}
