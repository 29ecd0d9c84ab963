//! The `lac` command line.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when the solver finds no
//! solution or a continuity check fails. Errors are also written to stderr
//! as one JSON line of the same shape the service uses.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::chain::{verify_continuity, Chain, ContinuityReport, ContinuityTolerances};
use crate::error::Error;
use crate::hermite::evaluate_segment;
use crate::io::document::{
    parse_problem, parse_solution, serialize_solution, SolutionDocument, SolverOverrides,
};
use crate::io::sample::{sample_chain, SampleMode};
use crate::io::service::{port_from_env, serve, ErrorBody, ErrorResponse, ServiceConfig};
use crate::io::solve::{chains_of, limits_document, solve_document, StepFailure};
use crate::io::svg::{export_svg, SvgStyle};
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Parser)]
#[command(
    name = "lac",
    version,
    about = "Hermite interpolation with extended log-aesthetic curves"
)]
pub struct Cli {
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for the randomized probes of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SolverFlags {
    /// Angle tolerance of the lambda search, radians.
    #[arg(long, global = true)]
    pub tol_angle: Option<f64>,
    /// Relative tolerance on the first tangent length.
    #[arg(long, global = true)]
    pub tol_length: Option<f64>,
    /// Iteration cap of both searches.
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Absolute tolerance of the quadrature.
    #[arg(long, global = true)]
    pub quad_tol: Option<f64>,
}

impl SolverFlags {
    fn overrides(&self) -> SolverOverrides {
        SolverOverrides {
            tol_angle: self.tol_angle,
            tol_length: self.tol_length,
            max_iter: self.max_iter,
            quad_tol: self.quad_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// JSON document.
    Document,
    Svg,
    /// Plain text summary.
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem document and write the solution document.
    Solve {
        /// Problem document, or `-` for stdin.
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a problem document and summarize its chains and joints.
    Chain {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print polyline points of a problem or solution document.
    Sample {
        input: PathBuf,
        /// Equal parameter steps per segment.
        #[arg(long, conflicts_with = "chord_tol")]
        count: Option<usize>,
        /// Maximum distance of the curve from each polyline chord.
        #[arg(long)]
        chord_tol: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the attainable first tangent lengths of every step.
    Limits { input: PathBuf },
    /// Check joint continuity of a problem or solution document.
    Verify {
        input: PathBuf,
        /// Randomized interior probes per segment.
        #[arg(long, default_value_t = 16)]
        probes: usize,
    },
    /// Run the HTTP service on 127.0.0.1.
    Serve {
        /// Port; defaults to `LAC_PORT` or 7878.
        #[arg(long)]
        port: Option<u16>,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    body: ErrorBody,
}

impl Failure {
    fn input(kind: &str, message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            body: ErrorBody {
                kind: kind.into(),
                message: message.into(),
                step: None,
                target: None,
                attainable: None,
            },
        }
    }
}

/// Exit code for a solver or input error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::ParallelTangents | Error::DegenerateTriangle(_) => 1,
        _ => 2,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let mut f = Failure::input(e.kind(), e.to_string());
        f.code = exit_code(&e);
        if let Error::Unreachable { target, range } = e {
            f.body.target = Some(target);
            f.body.attainable = Some(range);
        }
        f
    }
}

impl From<StepFailure> for Failure {
    fn from(s: StepFailure) -> Failure {
        let mut f = Failure::from(s.error);
        f.body.step = s.step;
        f
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::input("Io", format!("{}: {e}", path.display())))?;
    Ok(text)
}

/// Parses either document kind; problem documents are solved.
fn load(
    path: &PathBuf,
    overrides: &SolverOverrides,
) -> Result<(SolutionDocument, Vec<Chain>), Failure> {
    let text = read_input(path)?;
    match parse_problem(&text) {
        Ok(doc) => {
            let solved = solve_document(&doc, overrides)?;
            Ok((solved.document, solved.chains))
        }
        Err(problem_err) => match parse_solution(&text) {
            Ok(sol) => {
                let chains = chains_of(&sol)?;
                Ok((sol, chains))
            }
            Err(_) => Err(Failure::input("SchemaError", problem_err.to_string())),
        },
    }
}

fn emit(text: &str, output: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::input("Io", format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input("Io", e.to_string())),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("finite numbers only");
    s.push('\n');
    s
}

fn svg_of(chains: &[Chain]) -> Result<String, Failure> {
    // All chains go into one drawing.
    let merged = Chain {
        segments: chains
            .iter()
            .flat_map(|c| c.segments.iter().copied())
            .collect(),
        joints: chains
            .iter()
            .flat_map(|c| c.joints.iter().copied())
            .collect(),
    };
    Ok(export_svg(&merged, &SvgStyle::annotated())?)
}

fn chain_text(doc: &SolutionDocument) -> String {
    let mut out = String::new();
    for (ci, report) in doc.chains.iter().enumerate() {
        out += &format!(
            "chain {ci}: {} segment(s), arc length {:.6}\n",
            report.steps, report.arc_length
        );
        for (i, s) in doc.steps.iter().enumerate().filter(|(_, s)| s.chain == ci) {
            let alpha = s.alpha.map_or("-".to_string(), |a| format!("{a:.6}"));
            out += &format!(
                "  step {i}: alpha {alpha} lambda {:.6} instance {:?} swap {} arc {:.6}\n",
                s.lambda,
                s.instance,
                s.swap_flag,
                s.segment.arc_length()
            );
        }
        out += &continuity_text(&report.continuity);
    }
    out
}

fn continuity_text(r: &ContinuityReport) -> String {
    let mut out = String::new();
    for j in &r.joints {
        out += &format!(
            "  joint {}: position {:.3e} angle {:.3e} curvature {:.6} / {:.6} gap {:.3e} {}\n",
            j.index,
            j.position_gap,
            j.angle_gap,
            j.curvature_left,
            j.curvature_right,
            j.curvature_gap,
            if j.pass { "ok" } else { "FAIL" }
        );
    }
    out
}

#[derive(Debug, Serialize)]
struct ProbeReport {
    seed: u64,
    probes: usize,
    /// Worst gap between the point reached from either end of a segment,
    /// relative to its arc length.
    position: f64,
    /// Worst angle between the evaluated tangent and a central difference.
    tangent: f64,
    pass: bool,
}

// Interior self-consistency of every segment at random parameters.
fn probe_segments(
    chains: &[Chain],
    seed: u64,
    probes: usize,
    tols: &ContinuityTolerances,
) -> Result<ProbeReport, Error> {
    let mut rng = StdRng::seed_from_u64(seed);
    let q = QuadratureConfig::default();
    let (mut position, mut tangent) = (0.0f64, 0.0f64);
    let mut count = 0;
    for seg in chains.iter().flat_map(|c| &c.segments) {
        let end = evaluate_segment(seg, 1.0, &q)?.point;
        let special = seg.special_t();
        for _ in 0..probes {
            let t: f64 = rng.gen_range(0.01..0.99);
            let h = 1e-5;
            if special.is_some_and(|s| (s - t).abs() < 10.0 * h) {
                continue;
            }
            let fwd = seg.first_point() + seg.displacement(0.0, t, &q)?;
            let back = end - seg.displacement(t, 1.0, &q)?;
            position = position.max(fwd.distance(back) / seg.arc_length());
            let d = seg.displacement(t - h, t + h, &q)?;
            let at = evaluate_segment(seg, t, &q)?.tangent;
            tangent = tangent.max(at.angle_between(d));
            count += 1;
        }
    }
    // The central difference carries an O(h^2) error of its own.
    let pass = position < tols.position && tangent < tols.angle;
    Ok(ProbeReport {
        seed,
        probes: count,
        position,
        tangent,
        pass,
    })
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let overrides = cli.solver.overrides();
    match &cli.command {
        Command::Solve { input, output } => {
            let (doc, chains) = load(input, &overrides)?;
            let text = match cli.format.unwrap_or(Format::Document) {
                Format::Document => serialize_solution(&doc),
                Format::Svg => svg_of(&chains)?,
                Format::Text => chain_text(&doc),
            };
            emit(&text, output, stdout)
        }
        Command::Chain { input, output } => {
            let (doc, chains) = load(input, &overrides)?;
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Document => json(&doc.chains),
                Format::Svg => svg_of(&chains)?,
                Format::Text => chain_text(&doc),
            };
            emit(&text, output, stdout)
        }
        Command::Sample {
            input,
            count,
            chord_tol,
            output,
        } => {
            let mode = match (count, chord_tol) {
                (Some(n), _) => SampleMode::Count(*n),
                (None, Some(t)) if *t > 0.0 => SampleMode::ChordTol(*t),
                (None, Some(_)) => {
                    return Err(Failure::input(
                        "InvalidInput",
                        "--chord-tol must be positive",
                    ))
                }
                (None, None) => SampleMode::Count(64),
            };
            let (_, chains) = load(input, &overrides)?;
            let q = QuadratureConfig::default();
            let lines = chains
                .iter()
                .map(|c| sample_chain(c, mode, &q))
                .collect::<Result<Vec<_>, _>>()?;
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Document => {
                    let pts: Vec<Vec<[f64; 2]>> = lines
                        .iter()
                        .map(|l| l.iter().map(|p| [p.x, p.y]).collect())
                        .collect();
                    json(&pts)
                }
                Format::Svg => svg_of(&chains)?,
                Format::Text => lines
                    .iter()
                    .map(|l| {
                        l.iter()
                            .map(|p| format!("{} {}\n", p.x, p.y))
                            .collect::<String>()
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(&text, output, stdout)
        }
        Command::Limits { input } => {
            let text = read_input(input)?;
            let doc =
                parse_problem(&text).map_err(|e| Failure::input("SchemaError", e.to_string()))?;
            let (limits, failure) = limits_document(&doc, &overrides);
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Document => json(&limits),
                _ => limits
                    .iter()
                    .enumerate()
                    .map(|(i, l)| {
                        let max = if l.attainable.max.is_finite() {
                            format!("{:.6}", l.attainable.max)
                        } else {
                            "inf".into()
                        };
                        format!(
                            "step {i}: r_neg_inf {:.6} r_pos_inf {:.6} instance {:?} attainable ({:.6}, {max})\n",
                            l.r_neg_inf, l.r_pos_inf, l.instance, l.attainable.min
                        )
                    })
                    .collect(),
            };
            emit(&text, &None, stdout)?;
            match failure {
                Some(f) => Err(f.into()),
                None => Ok(()),
            }
        }
        Command::Verify { input, probes } => {
            let (_, chains) = load(input, &overrides)?;
            let tols = ContinuityTolerances::default();
            let reports: Vec<ContinuityReport> =
                chains.iter().map(|c| verify_continuity(c, &tols)).collect();
            let probe = probe_segments(&chains, cli.seed, *probes, &tols)?;
            let pass = reports.iter().all(|r| r.pass) && probe.pass;
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Document => json(&serde_json::json!({
                    "chains": reports,
                    "probes": probe,
                    "pass": pass,
                })),
                _ => {
                    let mut s = String::new();
                    for (i, r) in reports.iter().enumerate() {
                        s += &format!("chain {i}: {} joint(s)\n", r.joints.len());
                        s += &continuity_text(r);
                    }
                    s += &format!(
                        "probes: {} (seed {}), position {:.3e}, tangent {:.3e}\n",
                        probe.probes, probe.seed, probe.position, probe.tangent
                    );
                    s += if pass { "pass\n" } else { "FAIL\n" };
                    s
                }
            };
            emit(&text, &None, stdout)?;
            if pass {
                Ok(())
            } else {
                Err(Failure {
                    code: 2,
                    body: ErrorBody {
                        kind: "ContinuityFailure".into(),
                        message: "continuity check failed".into(),
                        step: None,
                        target: None,
                        attainable: None,
                    },
                })
            }
        }
        Command::Serve { port } => {
            let port = match port {
                Some(p) => *p,
                None => port_from_env()?,
            };
            let rt = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|e| Failure::input("Io", e.to_string()))?;
            rt.block_on(serve(port, ServiceConfig::default()))
                .map_err(|e| Failure::input("Io", e.to_string()))
        }
    }
}

/// Runs the command line with explicit arguments and streams. Returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let line = serde_json::to_string(&ErrorResponse { error: f.body })
                .expect("finite numbers only");
            let _ = writeln!(stderr, "{line}");
            f.code
        }
    }
}

pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}
