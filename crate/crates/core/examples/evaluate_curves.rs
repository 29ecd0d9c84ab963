// Points, tangents and curvature of standard curves: a clothoid, a circle
// involute and a curve with a cusp.

use log_aesthetic::{At, CurveParams, QuadratureConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureConfig::default();
    for (name, alpha) in [("clothoid", -1.0), ("involute", 2.0), ("alpha = 3", 3.0)] {
        let curve = CurveParams::new(alpha, 1.0)?;
        println!("{name}: special arc length {:?}", curve.special_s());
        for s in [0.0, 0.5, 1.5] {
            let p = curve.point_by_arc(s, &q)?;
            let t = curve.tangent_by_arc(s)?;
            let k = curve.curvature_at(At::Arc(s))?;
            println!(
                "  s {s:5.2}  point ({:.6}, {:.6})  tangent ({:.4}, {:.4})  curvature {k:.6}",
                p.x, p.y, t.x, t.y
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
