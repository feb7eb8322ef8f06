use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fcplan::solve::transition_dot;
use fcplan::{
    load_problem, parse_threshold, plan_text, print_domain, solve, OrderChoice, SolveError,
    SolveOptions, Source, StatsRecord,
};
use fcplan_core::Threshold;

#[derive(Parser)]
#[command(name = "fcplan", version, about = "BDD-based planner for propositional fluent domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a shortest plan.
    Solve(SolveArgs),
    /// Write a problem as a ground domain document.
    Print {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        goal_unsat_demo: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Domain document to solve.
    #[arg(long, value_name = "FILE")]
    domain: Option<PathBuf>,
    /// Generated Gripper problem with N balls.
    #[arg(long, value_name = "N")]
    gripper: Option<usize>,
    /// Generated Blocksworld problem with N blocks.
    #[arg(long, value_name = "N")]
    blocksworld: Option<usize>,
}

impl SourceArgs {
    fn source(&self) -> Source {
        match (&self.domain, self.gripper, self.blocksworld) {
            (Some(path), _, _) => Source::Domain(path.clone()),
            (_, Some(n), _) => Source::Gripper(n),
            (_, _, Some(n)) => Source::Blocksworld(n),
            _ => unreachable!("clap enforces exactly one source"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// `sort`, `lexical` or `file:PATH`.
    #[arg(long, default_value = "sort")]
    order: OrderChoice,
    /// Largest part of the transition relation in nodes, or `inf`.
    #[arg(long, value_name = "N|inf", default_value = "inf", value_parser = parse_threshold)]
    partition_threshold: Threshold,
    /// Remove already reached states from every new layer.
    #[arg(long)]
    frontier: bool,
    /// Leave the identity action out of the transition relation.
    #[arg(long)]
    no_noop: bool,
    /// Give up after N image steps.
    #[arg(long, value_name = "N")]
    max_steps: Option<u64>,
    /// Stream per-step records and a summary as JSON lines on stderr.
    #[arg(long)]
    stats: bool,
    /// Write the plan here instead of stdout.
    #[arg(long, value_name = "FILE")]
    plan_out: Option<PathBuf>,
    /// Write the transition relation as Graphviz.
    #[arg(long, value_name = "FILE")]
    dump_dot: Option<PathBuf>,
    /// Replace the Gripper goal by one asking for B1 in both rooms.
    #[arg(long)]
    goal_unsat_demo: bool,
    /// `json` prints the full report on stdout.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), SolveError> {
    std::fs::write(path, contents).map_err(|source| SolveError::Io { path: path.clone(), source })
}

fn stats_line(record: &StatsRecord) {
    let line = serde_json::to_string(record).expect("stats records serialize");
    let _ = writeln!(std::io::stderr().lock(), "{line}");
}

fn run_solve(args: &SolveArgs) -> Result<u8, SolveError> {
    let problem = load_problem(&args.source.source(), args.goal_unsat_demo)?;
    let opts = SolveOptions {
        order: args.order.clone(),
        threshold: args.partition_threshold,
        frontier: args.frontier,
        noop: !args.no_noop,
        max_steps: args.max_steps,
        measure_transition: args.stats || matches!(args.format, Format::Json),
    };
    let mut solved = solve(&problem, &opts, |s| {
        if args.stats {
            stats_line(&s.into());
        }
    })?;
    let report = &solved.report;
    if args.stats {
        stats_line(&StatsRecord::Summary(report));
    }

    if let Some(plan) = &solved.plan {
        let text = plan_text(plan);
        match (&args.plan_out, args.format) {
            (Some(path), _) => write_file(path, &text)?,
            (None, Format::Text) => print!("{text}"),
            (None, Format::Json) => {}
        }
    }
    if let Format::Json = args.format {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else if solved.plan.is_none() {
        eprintln!("{}: {} after {} steps", report.problem, outcome_text(report.outcome), report.steps);
    }
    let code = report.outcome.exit_code();

    if let Some(path) = &args.dump_dot {
        let dot = transition_dot(&problem, &mut solved.encoded)?;
        write_file(path, &dot)?;
    }
    Ok(code)
}

fn outcome_text(o: fcplan::Outcome) -> &'static str {
    match o {
        fcplan::Outcome::Plan => "plan found",
        fcplan::Outcome::NoPlan => "no plan exists",
        fcplan::Outcome::StepLimit => "step limit reached",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Print { source, goal_unsat_demo } => {
            load_problem(&source.source(), *goal_unsat_demo).map(|p| {
                print!("{}", print_domain(&p));
                0
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
