//! Domain documents, problem loading and the solve pipeline behind the
//! `fcplan` binary.

pub mod document;
pub mod sexpr;
pub mod solve;

pub use document::{parse_domain, print_domain, DomainError};
pub use solve::{
    load_problem, parse_threshold, plan_text, solve, OrderChoice, Outcome, SolveError, SolveOptions,
    SolveReport, Solved, Source, StatsRecord,
};
