//! Symbolic breadth-first search from the initial state.
//!
//! Layer `i + 1` is the image of layer `i`. With frontier simplification every
//! new layer has the already reached states removed, so layer `i` holds
//! exactly the states first reachable in `i` steps; without it (and with
//! `noop`) layer `i` holds every state reachable in at most `i` steps. The
//! search stops at the first layer that meets the goal, or when the reached
//! set stops growing.

use alloc::vec::Vec;
use core::time::Duration;

use crate::bdd::BddRef;
use crate::encode::{EncodeError, EncodedProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ForwardConfig {
    pub frontier_simplification: bool,
    /// Upper bound on the number of image steps; `None` means `2^n − 1` for
    /// `n` fluents.
    pub max_steps: Option<u64>,
    /// Keep every layer (needed for plan extraction) or only the latest.
    pub record_layers: bool,
}

impl Default for ForwardConfig {
    fn default() -> Self {
        ForwardConfig { frontier_simplification: false, max_steps: None, record_layers: true }
    }
}

/// `2^n − 1`, saturating.
pub fn step_bound(num_fluents: usize) -> u64 {
    if num_fluents >= 64 {
        u64::MAX
    } else {
        (1u64 << num_fluents) - 1
    }
}

impl ForwardConfig {
    pub fn effective_max_steps(&self, num_fluents: usize) -> u64 {
        self.max_steps.unwrap_or_else(|| step_bound(num_fluents)).max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForwardOutcome {
    /// Layer `step` is the first one that contains a goal state.
    GoalFound { step: usize },
    /// The reached set stopped growing at `step` without meeting the goal.
    NoPlan { step: usize },
    /// The step limit was hit before either of the above.
    StepLimit { step: usize },
}

impl ForwardOutcome {
    pub fn step(self) -> usize {
        match self {
            ForwardOutcome::GoalFound { step }
            | ForwardOutcome::NoPlan { step }
            | ForwardOutcome::StepLimit { step } => step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSequence {
    /// Layers `0..=k`, or only the last one when layers are not recorded.
    pub layers: Vec<BddRef>,
    /// Union of all layers computed so far.
    pub reached: BddRef,
    pub recorded: bool,
}

impl LayerSequence {
    pub fn last(&self) -> BddRef {
        *self.layers.last().expect("layer sequence is never empty")
    }

    pub fn get(&self, i: usize) -> Option<BddRef> {
        if self.recorded {
            self.layers.get(i).copied()
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepStats {
    pub step: usize,
    pub layer_nodes: usize,
    pub reached_nodes: usize,
    pub live_nodes: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardResult {
    pub outcome: ForwardOutcome,
    pub layers: LayerSequence,
    pub stats: Vec<StepStats>,
    pub frontier: bool,
}

impl ForwardResult {
    /// Union of all layers.
    pub fn reached_states(&self) -> BddRef {
        self.layers.reached
    }
}

pub fn forward_pass(ep: &mut EncodedProblem, cfg: &ForwardConfig) -> Result<ForwardResult, EncodeError> {
    forward_pass_with(ep, cfg, || Duration::ZERO, |_| {})
}

/// [`forward_pass`] with a clock for the per-step timings and a callback
/// that sees every step as it completes.
pub fn forward_pass_with<C, O>(
    ep: &mut EncodedProblem,
    cfg: &ForwardConfig,
    clock: C,
    mut observe: O,
) -> Result<ForwardResult, EncodeError>
where
    C: Fn() -> Duration,
    O: FnMut(&StepStats),
{
    let bound = cfg.effective_max_steps(ep.num_fluents);
    let start = clock();
    let mut stats = Vec::new();
    let mut record = |ep: &EncodedProblem, step, layer, reached| -> Result<(), EncodeError> {
        let s = StepStats {
            step,
            layer_nodes: ep.manager.node_count(layer)?,
            reached_nodes: ep.manager.node_count(reached)?,
            live_nodes: ep.manager.live_nodes(),
            elapsed: clock().saturating_sub(start),
        };
        observe(&s);
        stats.push(s);
        Ok(())
    };

    let mut layers = alloc::vec![ep.init];
    let mut reached = ep.init;
    record(ep, 0, ep.init, reached)?;

    let finish = |outcome, layers, reached, stats| ForwardResult {
        outcome,
        layers: LayerSequence { layers, reached, recorded: cfg.record_layers },
        stats,
        frontier: cfg.frontier_simplification,
    };

    let hits_goal = |ep: &mut EncodedProblem, layer| -> Result<bool, EncodeError> {
        Ok(!ep.manager.and(layer, ep.goal)?.is_false())
    };

    if hits_goal(ep, ep.init)? {
        return Ok(finish(ForwardOutcome::GoalFound { step: 0 }, layers, reached, stats));
    }

    let mut step: usize = 0;
    loop {
        if step as u64 >= bound {
            return Ok(finish(ForwardOutcome::StepLimit { step }, layers, reached, stats));
        }
        let current = *layers.last().expect("non-empty");
        let image = ep.transition.image(&mut ep.manager, current)?;
        let next = if cfg.frontier_simplification {
            ep.manager.diff(image, reached)?
        } else {
            image
        };
        let grown = ep.manager.or(reached, next)?;
        step += 1;
        debug_assert!(step as u64 <= bound);

        if cfg.record_layers {
            layers.push(next);
        } else {
            layers[0] = next;
        }
        record(ep, step, next, grown)?;

        if hits_goal(ep, next)? {
            return Ok(finish(ForwardOutcome::GoalFound { step }, layers, grown, stats));
        }
        // Once every state has been seen nothing new can appear, which keeps
        // the step count within 2^n − 1 even in the worst case.
        if grown == reached || grown.is_true() {
            return Ok(finish(ForwardOutcome::NoPlan { step }, layers, grown, stats));
        }
        reached = grown;
    }
}
