// Solves the bundled violin clef document and reports every joint.

use log_aesthetic::io::{parse_problem, solve_document};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/violin_clef.json");
    let doc = parse_problem(&std::fs::read_to_string(path)?)?;
    let solved = solve_document(&doc, &Default::default())?;
    for (i, step) in solved.document.steps.iter().enumerate() {
        println!(
            "step {i}: alpha {:>10.5}  lambda {:.6}  instance {:?}",
            step.alpha.unwrap_or(f64::NAN),
            step.lambda,
            step.instance
        );
    }
    let report = &solved.document.chains[0];
    let worst = report
        .continuity
        .joints
        .iter()
        .map(|j| j.curvature_gap)
        .fold(0.0, f64::max);
    println!(
        "arc length {:.3}  worst relative curvature gap {worst:.2e}",
        report.arc_length
    );
    if !report.continuity.pass {
        return Err("continuity check failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
