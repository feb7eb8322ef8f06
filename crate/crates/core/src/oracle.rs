//! Explicit-state breadth-first search, used to check the symbolic engine.
//!
//! States are enumerated one by one, so this only scales to small problems.
//! It shares nothing with the symbolic path except the one-step semantics in
//! [`crate::model`].

use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::model::{apply_action_explicit, eval_goal, GroundState, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest fluent universe the oracle accepts.
    pub max_fluents: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_fluents: 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{fluents} fluents exceed the oracle limit of {limit}")]
    TooLarge { fluents: usize, limit: usize },
}

/// States first reached after exactly `depth` actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitLayer {
    pub depth: usize,
    /// Sorted, pairwise distinct.
    pub states: Vec<GroundState>,
}

fn check(p: &Problem, cfg: &OracleConfig) -> Result<(), OracleError> {
    if p.num_fluents() > cfg.max_fluents {
        Err(OracleError::TooLarge { fluents: p.num_fluents(), limit: cfg.max_fluents })
    } else {
        Ok(())
    }
}

/// BFS layers from the initial state up to `max_depth` or closure. Only the
/// problem's own actions are used (no `noop`); the last layer is non-empty.
pub fn bfs_layers(
    p: &Problem,
    max_depth: usize,
    cfg: &OracleConfig,
) -> Result<Vec<ExplicitLayer>, OracleError> {
    check(p, cfg)?;
    let mut seen: HashSet<GroundState> = HashSet::new();
    seen.insert(p.initial.clone());
    let mut layers = alloc::vec![ExplicitLayer { depth: 0, states: alloc::vec![p.initial.clone()] }];
    while layers.len() <= max_depth {
        let mut next = Vec::new();
        for s in &layers.last().expect("non-empty").states {
            for a in &p.actions {
                if let Some(t) = apply_action_explicit(s, a) {
                    if seen.insert(t.clone()) {
                        next.push(t);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        layers.push(ExplicitLayer { depth: layers.len(), states: next });
    }
    Ok(layers)
}

/// All reachable states, sorted.
pub fn reachable_states(p: &Problem, cfg: &OracleConfig) -> Result<Vec<GroundState>, OracleError> {
    let mut all: Vec<GroundState> =
        bfs_layers(p, usize::MAX, cfg)?.into_iter().flat_map(|l| l.states).collect();
    all.sort();
    Ok(all)
}

/// Length of a shortest plan, or `None` if no reachable state satisfies the goal.
pub fn shortest_plan_length(p: &Problem, cfg: &OracleConfig) -> Result<Option<usize>, OracleError> {
    Ok(bfs_layers(p, usize::MAX, cfg)?
        .iter()
        .find(|l| l.states.iter().any(|s| eval_goal(&p.goal, s)))
        .map(|l| l.depth))
}
