// Builds a chain with matched curvature at every joint and checks it.

use log_aesthetic::{
    append_g2, solve_g1, verify_continuity, AlphaConfig, Chain, ContinuityTolerances,
    HermiteProblem, LambdaConfig, Point, Vec2,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let first = HermiteProblem::new(
        Point::new(0.0, 0.0),
        Point::new(4.0, 1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(1.0, -0.3),
    )?;
    let mut chain = Chain::new(solve_g1(&first, -0.7, &LambdaConfig::default())?);
    chain = append_g2(
        &chain,
        Point::new(7.0, -1.0),
        Vec2::new(1.0, 0.3),
        &AlphaConfig::default(),
    )?;
    for (i, seg) in chain.segments.iter().enumerate() {
        println!(
            "segment {i}: alpha {:.6}  lambda {:.6}  length {:.6}",
            seg.params.alpha(),
            seg.params.lambda(),
            seg.arc_length()
        );
    }
    let report = verify_continuity(&chain, &ContinuityTolerances::default());
    for j in &report.joints {
        println!(
            "joint {}: position {:.2e}  angle {:.2e}  curvature {:.6} / {:.6}",
            j.index, j.position_gap, j.angle_gap, j.curvature_left, j.curvature_right
        );
    }
    if !report.pass {
        return Err("continuity check failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
