//! Loading, solving and reporting, shared by the binary and the tests.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use fcplan_core::encode::Family;
use fcplan_core::order::VariableOrder;
use fcplan_core::problems::{blocksworld, gripper, gripper_unsat};
use fcplan_core::reach::{forward_pass_with, StepStats};
use fcplan_core::{
    build_encoded_problem, extract_plan, validate_plan, EncodeError, EncodedProblem, ExtractError,
    ForwardConfig, ForwardOutcome, ForwardResult, OrderError, Plan, Problem, Threshold,
};
use serde::Serialize;

use crate::document::{parse_domain, DomainError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Domain(PathBuf),
    Gripper(usize),
    Blocksworld(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderChoice {
    Sort,
    Lexical,
    /// One fluent label per line, e.g. `at(B1,A)`; blank lines and `#`
    /// comments are ignored.
    File(PathBuf),
}

impl FromStr for OrderChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sort" => Ok(OrderChoice::Sort),
            "lexical" => Ok(OrderChoice::Lexical),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(OrderChoice::File(path.into())),
                _ => Err(format!("expected `sort`, `lexical` or `file:PATH`, got `{s}`")),
            },
        }
    }
}

impl fmt::Display for OrderChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderChoice::Sort => f.write_str("sort"),
            OrderChoice::Lexical => f.write_str("lexical"),
            OrderChoice::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// `inf` or a node count.
pub fn parse_threshold(s: &str) -> Result<Threshold, String> {
    if s == "inf" {
        return Ok(Threshold::Infinite);
    }
    s.parse().map(Threshold::Finite).map_err(|_| format!("expected a node count or `inf`, got `{s}`"))
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub order: OrderChoice,
    pub threshold: Threshold,
    pub frontier: bool,
    pub noop: bool,
    pub max_steps: Option<u64>,
    /// Also build the monolithic transition relation to report its size.
    pub measure_transition: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            order: OrderChoice::Sort,
            threshold: Threshold::Infinite,
            frontier: false,
            noop: true,
            max_steps: None,
            measure_transition: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{source}", path.display())]
    Domain { path: PathBuf, source: DomainError },
    #[error("{}:{line}: unknown fluent `{label}`", path.display())]
    OrderFile { path: PathBuf, line: usize, label: String },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("extracted plan failed validation")]
    InvalidPlan,
}

fn read(path: &Path) -> Result<String, SolveError> {
    std::fs::read_to_string(path).map_err(|source| SolveError::Io { path: path.into(), source })
}

/// Builds the problem named by `source`. With `unsat_demo` the goal of a
/// Gripper instance is replaced by one that asks for `B1` in both rooms.
pub fn load_problem(source: &Source, unsat_demo: bool) -> Result<Problem, SolveError> {
    let check = |n: usize, min: usize, what: &str| {
        if n < min {
            Err(SolveError::Invalid(format!("{what} needs n ≥ {min}")))
        } else {
            Ok(())
        }
    };
    match (source, unsat_demo) {
        (Source::Gripper(n), demo) => {
            check(*n, 1, "gripper")?;
            Ok(if demo { gripper_unsat(*n) } else { gripper(*n) })
        }
        (_, true) => Err(SolveError::Invalid("--goal-unsat-demo needs --gripper".into())),
        (Source::Blocksworld(n), false) => {
            check(*n, 2, "blocksworld")?;
            Ok(blocksworld(*n))
        }
        (Source::Domain(path), false) => {
            parse_domain(&read(path)?).map_err(|source| SolveError::Domain { path: path.clone(), source })
        }
    }
}

pub fn variable_order(p: &Problem, choice: &OrderChoice) -> Result<VariableOrder, SolveError> {
    match choice {
        OrderChoice::Sort => Ok(p.sort_order()),
        OrderChoice::Lexical => Ok(p.lexical_order()),
        OrderChoice::File(path) => {
            let text = read(path)?;
            let mut ids = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let label = line.split('#').next().unwrap_or("").trim();
                if label.is_empty() {
                    continue;
                }
                let id = p.find_fluent_by_label(label).ok_or_else(|| SolveError::OrderFile {
                    path: path.clone(),
                    line: i + 1,
                    label: label.into(),
                })?;
                ids.push(id);
            }
            Ok(VariableOrder::explicit(ids, p.num_fluents())?)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Plan,
    NoPlan,
    StepLimit,
}

impl From<ForwardOutcome> for Outcome {
    fn from(o: ForwardOutcome) -> Self {
        match o {
            ForwardOutcome::GoalFound { .. } => Outcome::Plan,
            ForwardOutcome::NoPlan { .. } => Outcome::NoPlan,
            ForwardOutcome::StepLimit { .. } => Outcome::StepLimit,
        }
    }
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Plan => 0,
            Outcome::NoPlan => 1,
            Outcome::StepLimit => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub problem: String,
    pub fluents: usize,
    /// Ground actions, `noop` not counted.
    pub actions: usize,
    pub order: String,
    pub threshold: String,
    pub frontier: bool,
    pub noop: bool,
    pub outcome: Outcome,
    pub steps: usize,
    pub plan: Option<Vec<String>>,
    /// Node count of each recorded layer.
    pub layer_nodes: Vec<usize>,
    pub reached_states: u128,
    pub transition_parts: Vec<usize>,
    /// Size of the disjunction of all parts, if measured.
    pub transition_nodes: Option<usize>,
    pub peak_live_nodes: usize,
    pub wall_time_ms: f64,
}

/// One line of the `--stats` stream.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum StatsRecord<'a> {
    Step {
        step: usize,
        layer_nodes: usize,
        reached_nodes: usize,
        live_nodes: usize,
        elapsed_ms: f64,
    },
    Summary(&'a SolveReport),
}

impl From<&StepStats> for StatsRecord<'_> {
    fn from(s: &StepStats) -> Self {
        StatsRecord::Step {
            step: s.step,
            layer_nodes: s.layer_nodes,
            reached_nodes: s.reached_nodes,
            live_nodes: s.live_nodes,
            elapsed_ms: s.elapsed.as_secs_f64() * 1e3,
        }
    }
}

pub struct Solved {
    pub report: SolveReport,
    pub plan: Option<Plan>,
    pub result: ForwardResult,
    pub encoded: EncodedProblem,
}

/// Orders, encodes, searches and, if the goal was reached, extracts and
/// validates a plan. `observe` sees every forward step as it completes.
pub fn solve(
    p: &Problem,
    opts: &SolveOptions,
    observe: impl FnMut(&StepStats),
) -> Result<Solved, SolveError> {
    let start = Instant::now();
    let order = variable_order(p, &opts.order)?;
    let mut ep = build_encoded_problem(p, &order, opts.threshold, opts.noop)?;
    let transition_parts = ep.transition.part_sizes(&ep.manager).map_err(EncodeError::from)?;
    let transition_nodes = if opts.measure_transition {
        let t = ep.monolithic_transition()?;
        Some(ep.manager.node_count(t).map_err(EncodeError::from)?)
    } else {
        None
    };

    let cfg = ForwardConfig {
        frontier_simplification: opts.frontier,
        max_steps: opts.max_steps,
        record_layers: true,
    };
    let result = forward_pass_with(&mut ep, &cfg, || start.elapsed(), observe)?;
    let plan = match result.outcome {
        ForwardOutcome::GoalFound { .. } => {
            let plan = extract_plan(&mut ep, &result)?;
            if !validate_plan(p, &plan) {
                return Err(SolveError::InvalidPlan);
            }
            Some(plan)
        }
        _ => None,
    };

    let peak = result.stats.iter().map(|s| s.live_nodes).max().unwrap_or(0).max(ep.manager.live_nodes());
    let report = SolveReport {
        problem: p.name.clone(),
        fluents: p.num_fluents(),
        actions: p.actions.len(),
        order: opts.order.to_string(),
        threshold: opts.threshold.to_string(),
        frontier: opts.frontier,
        noop: opts.noop,
        outcome: result.outcome.into(),
        steps: result.outcome.step(),
        plan: plan.as_ref().map(|pl| pl.steps.iter().map(|a| a.label()).collect()),
        layer_nodes: result.stats.iter().map(|s| s.layer_nodes).collect(),
        reached_states: ep.count_states(result.reached_states())?,
        transition_parts,
        transition_nodes,
        peak_live_nodes: peak,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Solved { report, plan, result, encoded: ep })
}

/// `<index>: <action>` lines, numbered from 0.
pub fn plan_text(plan: &Plan) -> String {
    plan.steps.iter().enumerate().map(|(i, a)| format!("{i}: {}\n", a.label())).collect()
}

/// Graphviz rendering of the monolithic transition relation, with `'`
/// marking next-state variables.
pub fn transition_dot(p: &Problem, ep: &mut EncodedProblem) -> Result<String, SolveError> {
    let t = ep.monolithic_transition()?;
    let map = &ep.varmap;
    let dot = ep
        .manager
        .to_dot(t, |v| match map.fluent_of(v) {
            Some((f, Family::Current)) => p.fluent(f).to_string(),
            Some((f, Family::Next)) => format!("{}'", p.fluent(f)),
            None => format!("v{}", v.0),
        })
        .map_err(EncodeError::from)?;
    Ok(dot)
}
