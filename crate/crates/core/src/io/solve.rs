//! Runs problem documents through the solvers.

use std::f64::consts::PI;
use std::fmt;

use crate::alpha::{
    alpha_bisection, select_instance, tangent_length_limits_with, AlphaConfig, Instance,
    TangentLimits,
};
use crate::chain::{append_g2_step, end_tangent, verify_continuity, Chain, ContinuityTolerances};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::hermite::{evaluate_segment, solve_g1_full, HermiteProblem, LambdaResult, Segment};
use crate::io::document::{
    ChainReport, Goal, Iterations, ProblemDocument, Residuals, SolutionDocument, SolverOverrides,
    Step, StepSolution, VERSION,
};

/// A solver error together with the step that raised it.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFailure {
    /// `None` for errors before the first step, such as a bad configuration.
    pub step: Option<usize>,
    pub error: Error,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self.step {
            Some(i) => write!(f, "step {i}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for StepFailure {}

/// Solution document plus the chains it describes.
#[derive(Clone, Debug)]
pub struct Solved {
    pub document: SolutionDocument,
    pub chains: Vec<Chain>,
}

/// The problem a step poses, given the chain it continues.
pub fn step_problem(step: &Step, chain: Option<&Chain>) -> Result<HermiteProblem> {
    if let Some(st) = step.start {
        return HermiteProblem::new(st.a, step.c, st.v_a, step.v_c_dir);
    }
    let prev = chain
        .and_then(Chain::last)
        .ok_or_else(|| Error::InvalidInput("a continuation step needs a previous step".into()))?;
    let v_a = match step.goal {
        Goal::Matched => end_tangent(prev)?,
        _ => evaluate_segment(prev, 1.0, &Default::default())?.tangent,
    };
    HermiteProblem::new(prev.control[2], step.c, v_a, step.v_c_dir)
}

fn line_gap(u: Vec2, v: Vec2) -> f64 {
    let g = u.angle_between(v);
    g.min(PI - g)
}

fn residuals(
    problem: &HermiteProblem,
    seg: &Segment,
    lr: &LambdaResult,
    length: Option<f64>,
    cfg: &AlphaConfig,
) -> Result<Residuals> {
    let q = &cfg.lambda.quadrature;
    let first = evaluate_segment(seg, 0.0, q)?;
    let last = evaluate_segment(seg, 1.0, q)?;
    Ok(Residuals {
        angle: lr.residual.abs(),
        length,
        endpoint: last.point.distance(problem.c) / problem.a.distance(problem.c),
        tangent_a: first.tangent.angle_between(problem.v_a),
        tangent_c: line_gap(last.tangent, problem.v_c_dir),
    })
}

#[allow(clippy::too_many_arguments)]
fn record(
    chain: usize,
    problem: &HermiteProblem,
    seg: Segment,
    lr: &LambdaResult,
    alpha_iterations: Option<usize>,
    length: Option<f64>,
    limits: Option<TangentLimits>,
    cfg: &AlphaConfig,
) -> Result<StepSolution> {
    let instance = select_instance(problem)?;
    Ok(StepSolution {
        chain,
        alpha: (instance != Instance::Plain).then(|| seg.params.alpha()),
        lambda: seg.params.lambda(),
        swap_flag: seg.swap_flag,
        instance,
        transform: seg.transform,
        residuals: residuals(problem, &seg, lr, length, cfg)?,
        iterations: Iterations {
            lambda: lr.iterations,
            alpha: alpha_iterations,
        },
        limits,
        segment: seg,
    })
}

pub(crate) fn solve_step(
    step: &Step,
    chain: Option<&Chain>,
    index: usize,
    cfg: &AlphaConfig,
) -> Result<(Chain, StepSolution)> {
    let problem = step_problem(step, chain)?;
    match step.goal {
        Goal::Alpha(alpha) => {
            let sol = solve_g1_full(&problem, alpha, &cfg.lambda)?;
            let next = match (step.start, chain) {
                (None, Some(c)) => c.push_unchecked(sol.segment)?,
                _ => Chain::new(sol.segment),
            };
            let rec = record(
                index,
                &problem,
                sol.segment,
                &sol.lambda,
                None,
                None,
                None,
                cfg,
            )?;
            Ok((next, rec))
        }
        Goal::TargetLength(target) => {
            let limits = tangent_length_limits_with(&problem, cfg)?;
            let res = alpha_bisection(&problem, target, cfg)?;
            let rec = record(
                index,
                &problem,
                res.segment,
                &res.lambda_result,
                Some(res.iterations),
                Some(res.length_residual),
                Some(limits),
                cfg,
            )?;
            Ok((Chain::new(res.segment), rec))
        }
        Goal::Matched => {
            let chain = chain.ok_or_else(|| {
                Error::InvalidInput("a continuation step needs a previous step".into())
            })?;
            let limits = tangent_length_limits_with(&problem, cfg)?;
            let (next, res) = append_g2_step(chain, problem.c, problem.v_c_dir, cfg)?;
            let rec = record(
                index,
                &problem,
                res.segment,
                &res.lambda_result,
                Some(res.iterations),
                Some(res.length_residual),
                Some(limits),
                cfg,
            )?;
            Ok((next, rec))
        }
    }
}

/// Solves every step of `doc`. `overrides` win over the document's own
/// configuration.
pub fn solve_document(
    doc: &ProblemDocument,
    overrides: &SolverOverrides,
) -> std::result::Result<Solved, StepFailure> {
    let cfg = doc
        .config
        .merge(*overrides)
        .alpha_config()
        .map_err(|error| StepFailure { step: None, error })?;
    let mut chains: Vec<Chain> = Vec::new();
    let mut first_steps = Vec::new();
    let mut steps = Vec::with_capacity(doc.steps.len());
    for (i, step) in doc.steps.iter().enumerate() {
        let fail = |error| StepFailure {
            step: Some(i),
            error,
        };
        let current = if step.start.is_some() {
            None
        } else {
            chains.last()
        };
        let chain_index = if step.start.is_some() {
            chains.len()
        } else {
            chains.len() - 1
        };
        let (chain, rec) = solve_step(step, current, chain_index, &cfg).map_err(fail)?;
        if step.start.is_some() {
            chains.push(chain);
            first_steps.push(i);
        } else {
            *chains.last_mut().expect("first step starts a chain") = chain;
        }
        steps.push(rec);
    }
    let tols = ContinuityTolerances::default();
    let reports = chains
        .iter()
        .zip(&first_steps)
        .map(|(c, &first)| ChainReport {
            first_step: first,
            steps: c.len(),
            arc_length: c.arc_length(),
            continuity: verify_continuity(c, &tols),
        })
        .collect();
    Ok(Solved {
        document: SolutionDocument {
            version: VERSION,
            steps,
            chains: reports,
        },
        chains,
    })
}

/// Rebuilds the chains of a solution document from its segments.
pub fn chains_of(doc: &SolutionDocument) -> Result<Vec<Chain>> {
    let mut chains: Vec<Chain> = Vec::new();
    for step in &doc.steps {
        if step.chain == chains.len() {
            chains.push(Chain::new(step.segment));
        } else if step.chain + 1 == chains.len() {
            let last = chains.last_mut().expect("checked above");
            *last = last.push_unchecked(step.segment)?;
        } else {
            return Err(Error::InvalidInput(format!(
                "steps must be grouped by chain; found chain {} after chain {}",
                step.chain,
                chains.len().saturating_sub(1)
            )));
        }
    }
    Ok(chains)
}

/// Limits of the first tangent length of every step. Continuation steps
/// need the previous steps solved; a failure there ends the list and is
/// returned alongside it.
pub fn limits_document(
    doc: &ProblemDocument,
    overrides: &SolverOverrides,
) -> (Vec<TangentLimits>, Option<StepFailure>) {
    let cfg = match doc.config.merge(*overrides).alpha_config() {
        Ok(c) => c,
        Err(error) => return (Vec::new(), Some(StepFailure { step: None, error })),
    };
    let mut out = Vec::new();
    let mut chain: Option<Chain> = None;
    for (i, step) in doc.steps.iter().enumerate() {
        let fail = |error| StepFailure {
            step: Some(i),
            error,
        };
        let current = if step.start.is_some() {
            None
        } else {
            chain.as_ref()
        };
        let limits = step_problem(step, current).and_then(|p| tangent_length_limits_with(&p, &cfg));
        match limits {
            Ok(l) => out.push(l),
            Err(e) => return (out, Some(fail(e))),
        }
        if i + 1 == doc.steps.len() {
            break;
        }
        match solve_step(step, current, 0, &cfg) {
            Ok((c, _)) => chain = Some(c),
            Err(e) => return (out, Some(fail(e))),
        }
    }
    (out, None)
}
