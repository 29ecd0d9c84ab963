//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature for complex
//! integrands of a real variable.
//!
//! The integrand is the unit tangent or `rho * e^{i psi}` of a log-aesthetic
//! curve, so it is smooth on each panel as long as callers split the range at
//! cusp and inflection parameters.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Error control for the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidInput(format!(
                "quadrature abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidInput(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

// Requests below this fraction of the integral of |f| are roundoff noise.
const ROUNDOFF_FLOOR: f64 = 1e-13;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980759769,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651146,
];

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut abs_sum = fc.norm() * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        asc += ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * WGK[j];
    }
    let scale = half.abs();
    let value = kronrod * half;
    let abs_value = abs_sum * scale;
    let asc = asc * scale;
    let mut error = ((kronrod - gauss) * half).norm();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_value);
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        error = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error,
        abs_value,
    }
}

/// Integrates `f` over `[a, b]`. A reversed range yields the negated integral.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_split(&mut f, a, b, &[], cfg)
}

/// Integrates `f` over `[a, b]` when `f` may behave like a fractional power
/// of `|x - pivot|`. Near the pivot each side is mapped by
/// `x = pivot +- t^k`, which turns such behaviour into a high power of `t`.
/// Far from the pivot (farther than the range is long) plain integration is
/// used, since there the substitution would only lose digits.
pub fn integrate_about<F>(
    f: &mut F,
    a: f64,
    b: f64,
    pivot: f64,
    k: i32,
    cfg: &QuadratureConfig,
) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let (lo, hi) = (a.min(b), a.max(b));
    let gap = if pivot < lo {
        lo - pivot
    } else if pivot > hi {
        pivot - hi
    } else {
        0.0
    };
    if k <= 1 || gap > hi - lo || a == b || !pivot.is_finite() {
        return integrate_split(f, a, b, &[pivot], cfg);
    }
    let kf = f64::from(k);
    let mut piece = |x0: f64, x1: f64| -> Result<Complex64> {
        let side = if x0 + x1 >= 2.0 * pivot { 1.0 } else { -1.0 };
        let t = |x: f64| ((x - pivot) * side).max(0.0).powf(1.0 / kf);
        let mut g = |t: f64| f(pivot + side * t.powi(k)) * (side * kf * t.powi(k - 1));
        integrate(&mut g, t(x0), t(x1), cfg)
    };
    if pivot > lo && pivot < hi {
        Ok(piece(a, pivot)? + piece(pivot, b)?)
    } else {
        piece(a, b)
    }
}

/// Integrates `f` over `[a, b]`, starting with panels split at every
/// breakpoint that lies strictly inside the range.
pub fn integrate_split<F>(
    f: &mut F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain {
            value: if a.is_finite() { b } else { a },
            reason: "integration limit is not finite",
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);

    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    let mut total_abs = 0.0;
    for w in cuts.windows(2) {
        let p = gk21(f, w[0], w[1]);
        total_err += p.error;
        total_abs += p.abs_value;
        heap.push(p);
    }

    let mut frozen: Vec<Panel> = Vec::new();
    let mut subdivisions = heap.len();
    loop {
        let tol = cfg.abs_tol.max(ROUNDOFF_FLOOR * total_abs);
        if total_err <= tol {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                tol: cfg.abs_tol,
                estimate: total_err,
                subdivisions,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel at floating-point resolution; freeze it.
            total_err -= worst.error;
            frozen.push(worst);
            continue;
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        total_err += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    let result: Complex64 = heap.iter().chain(frozen.iter()).map(|p| p.value).sum();
    if !result.re.is_finite() || !result.im.is_finite() {
        return Err(Error::Quadrature {
            tol: cfg.abs_tol,
            estimate: f64::INFINITY,
            subdivisions,
        });
    }
    Ok(result * sign)
}
