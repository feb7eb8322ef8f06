//! Symbolic planning over propositional fluents with reduced ordered binary
//! decision diagrams.
//!
//! A planning [`Problem`](model::Problem) is a set of ground fluents, ground
//! actions with literal preconditions and add/delete effects, a single initial
//! state and a goal formula. The [`encode`] module turns it into BDDs over an
//! interleaved pair of current/next state variables; [`reach`] runs a symbolic
//! breadth-first search from the initial state, and [`extract`] walks the
//! resulting layers backwards to recover a shortest plan. [`oracle`] is an
//! explicit-state breadth-first search used to cross-check all of the above.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bdd;
pub mod encode;
pub mod extract;
pub mod model;
pub mod oracle;
pub mod order;
pub mod partition;
pub mod problems;
pub mod reach;

pub use bdd::{BddError, BddManager, BddRef, BoolOp, Valuation, VarIndex};
pub use encode::{build_encoded_problem, EncodeError, EncodedProblem, Family, VarMap};
pub use extract::{extract_plan, validate_plan, ExtractError, Plan};
pub use model::{
    Diagnostic, Fluent, FluentId, GoalFormula, GroundAction, GroundState, Problem, Sort,
};
pub use order::{OrderError, OrderStrategy, VariableOrder};
pub use partition::{Threshold, TransitionRelation};
pub use reach::{forward_pass, ForwardConfig, ForwardOutcome, ForwardResult, LayerSequence};
