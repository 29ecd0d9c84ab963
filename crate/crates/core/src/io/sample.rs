//! Polylines through solved segments.

use serde::{Deserialize, Serialize};

use crate::chain::Chain;
use crate::error::Result;
use crate::geom::Point;
use crate::hermite::Segment;
use crate::quadrature::QuadratureConfig;

/// How densely to sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// `n` equal steps of the normalized parameter, `n + 1` points.
    Count(usize),
    /// Split until the curve midpoint of every piece lies within this
    /// distance of the chord.
    ChordTol(f64),
}

// Pieces a segment starts with in chord mode, so that short wiggles are not
// skipped by a lucky midpoint.
const MIN_PIECES: usize = 8;
const MAX_DEPTH: u32 = 40;

/// Points along `seg` from its first to its last point. A cusp or
/// inflection inside the segment is always one of the samples.
pub fn sample_segment(seg: &Segment, mode: SampleMode, q: &QuadratureConfig) -> Result<Vec<Point>> {
    let mut ts: Vec<f64> = match mode {
        SampleMode::Count(n) => {
            let n = n.max(1);
            (0..=n).map(|i| i as f64 / n as f64).collect()
        }
        SampleMode::ChordTol(_) => (0..=MIN_PIECES)
            .map(|i| i as f64 / MIN_PIECES as f64)
            .collect(),
    };
    if let Some(ts_special) = seg.special_t().filter(|t| *t > 0.0 && *t < 1.0) {
        if !ts.contains(&ts_special) {
            ts.push(ts_special);
            ts.sort_by(f64::total_cmp);
        }
    }
    let mut points = Vec::with_capacity(ts.len());
    let mut p = seg.first_point();
    points.push(p);
    for w in ts.windows(2) {
        let next = p + seg.displacement(w[0], w[1], q)?;
        if let SampleMode::ChordTol(tol) = mode {
            refine(seg, (w[0], p), (w[1], next), tol, q, MAX_DEPTH, &mut points)?;
        }
        points.push(next);
        p = next;
    }
    Ok(points)
}

// Pushes the interior points of the piece between `a` and `b`.
fn refine(
    seg: &Segment,
    a: (f64, Point),
    b: (f64, Point),
    tol: f64,
    q: &QuadratureConfig,
    depth: u32,
    out: &mut Vec<Point>,
) -> Result<()> {
    let tm = 0.5 * (a.0 + b.0);
    if depth == 0 || !(tm > a.0 && tm < b.0) {
        return Ok(());
    }
    let m = a.1 + seg.displacement(a.0, tm, q)?;
    if chord_distance(m, a.1, b.1) < tol {
        return Ok(());
    }
    refine(seg, a, (tm, m), tol, q, depth - 1, out)?;
    out.push(m);
    refine(seg, (tm, m), b, tol, q, depth - 1, out)
}

/// Distance of `p` from the segment `a`-`b`.
pub fn chord_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Points along the whole chain; joint points appear once.
pub fn sample_chain(chain: &Chain, mode: SampleMode, q: &QuadratureConfig) -> Result<Vec<Point>> {
    let mut out: Vec<Point> = Vec::new();
    for seg in &chain.segments {
        let pts = sample_segment(seg, mode, q)?;
        let skip = usize::from(!out.is_empty());
        out.extend(pts.into_iter().skip(skip));
    }
    Ok(out)
}
