// Range of first tangent lengths a problem can reach.

use log_aesthetic::{tangent_length_limits, HermiteProblem, Point, Vec2};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let deg = |d: f64| Vec2::from_angle(d.to_radians());
    let cases = [
        ("60 / -30", deg(60.0), deg(-30.0)),
        ("25 / -60", deg(25.0), deg(-60.0)),
        ("45 / -45", deg(45.0), deg(-45.0)),
    ];
    for (name, v_a, v_c) in cases {
        let problem = HermiteProblem::new(Point::new(0.0, 0.0), Point::new(3.0, 0.0), v_a, v_c)?;
        let l = tangent_length_limits(&problem)?;
        println!(
            "{name}: r_neg_inf {:.6}  r_pos_inf {:.6}  instance {:?}  attainable ({:.6}, {:.6})",
            l.r_neg_inf, l.r_pos_inf, l.instance, l.attainable.min, l.attainable.max
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
