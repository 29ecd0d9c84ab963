// Writes the violin clef as SVG with its control polygons and tangents.

use log_aesthetic::io::{export_svg, parse_problem, solve_document, SvgStyle};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/violin_clef.json");
    let doc = parse_problem(&std::fs::read_to_string(path)?)?;
    let solved = solve_document(&doc, &Default::default())?;
    let svg = export_svg(&solved.chains[0], &SvgStyle::annotated())?;
    let out = std::env::temp_dir().join("violin_clef.svg");
    std::fs::write(&out, &svg)?;
    println!("wrote {} ({} bytes)", out.display(), svg.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
