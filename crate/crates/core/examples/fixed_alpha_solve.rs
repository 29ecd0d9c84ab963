// Fits curves of several shape parameters to one pair of points and tangents.

use log_aesthetic::{
    evaluate_segment, solve_g1_full, HermiteProblem, LambdaConfig, Point, QuadratureConfig, Vec2,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let problem = HermiteProblem::new(
        Point::new(0.0, 0.0),
        Point::new(4.0, 1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(1.0, -0.3),
    )?;
    let q = QuadratureConfig::default();
    for alpha in [-2.0, -1.0, -0.5, 0.5, 2.0] {
        let sol = solve_g1_full(&problem, alpha, &LambdaConfig::default())?;
        let seg = sol.segment;
        let mid = evaluate_segment(&seg, 0.5, &q)?;
        println!(
            "alpha {alpha:5.2}  lambda {:.9}  iterations {:2}  length {:.6}  midpoint ({:.5}, {:.5})",
            seg.params.lambda(),
            sol.lambda.iterations,
            seg.arc_length(),
            mid.point.x,
            mid.point.y
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
