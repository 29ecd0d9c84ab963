// Finds the shape parameter from the length of the first tangent.

use log_aesthetic::{
    alpha_bisection, first_tangent_length, AlphaConfig, HermiteProblem, Point, Vec2,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let deg = |d: f64| Vec2::from_angle(d.to_radians());
    let problem = HermiteProblem::new(
        Point::new(0.0, 0.0),
        Point::new(3.0, 0.0),
        deg(60.0),
        deg(-30.0),
    )?;
    let cfg = AlphaConfig::default();
    for target in [0.4, 0.8, 1.2, 1.6] {
        let res = alpha_bisection(&problem, target, &cfg)?;
        println!(
            "target {target:.2}  alpha {:9.5}  lambda {:.6}  achieved {:.6}  iterations {}",
            res.alpha,
            res.lambda,
            first_tangent_length(&res.segment),
            res.iterations
        );
    }
    match alpha_bisection(&problem, 2.0, &cfg) {
        Err(e) => println!("target 2.00  {e}"),
        Ok(res) => println!("target 2.00  unexpectedly reached with alpha {}", res.alpha),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
