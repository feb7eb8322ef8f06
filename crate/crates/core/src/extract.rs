//! Backward plan extraction from the layers of a forward pass.

use alloc::vec::Vec;

use crate::encode::{decode_valuation, EncodeError, EncodedProblem, Family};
use crate::model::{apply_action_explicit, GroundAction, GroundState, Problem};
use crate::reach::{ForwardOutcome, ForwardResult};

/// An action sequence together with the states it passes through.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<GroundAction>,
    /// `states[0]` is the initial state, `states[i + 1]` the result of `steps[i]`.
    pub states: Vec<GroundState>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtractError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("forward pass did not reach the goal")]
    NoGoal,
    #[error("forward pass did not record its layers")]
    LayersNotRecorded,
    /// Layers and transition relation disagree; cannot happen if the forward
    /// pass is correct.
    #[error("no predecessor found in layer {layer}")]
    Inconsistent { layer: usize },
}

impl From<crate::bdd::BddError> for ExtractError {
    fn from(e: crate::bdd::BddError) -> Self {
        ExtractError::Encode(e.into())
    }
}

impl From<crate::partition::PartitionError> for ExtractError {
    fn from(e: crate::partition::PartitionError) -> Self {
        ExtractError::Encode(e.into())
    }
}

/// Walks back from a goal state in the last layer to the initial state.
///
/// Each predecessor is the least (low-first) state of the previous layer that
/// has the current state as a successor; the action is the first one in
/// transition order that produces it. `noop` steps are dropped from the plan.
pub fn extract_plan(ep: &mut EncodedProblem, result: &ForwardResult) -> Result<Plan, ExtractError> {
    let k = match result.outcome {
        ForwardOutcome::GoalFound { step } => step,
        _ => return Err(ExtractError::NoGoal),
    };
    if !result.layers.recorded || result.layers.layers.len() <= k {
        return Err(ExtractError::LayersNotRecorded);
    }
    let layers = &result.layers.layers;
    let vars = ep.varmap.family_vars(Family::Current);

    let pick = |ep: &EncodedProblem, set| -> Result<Option<GroundState>, ExtractError> {
        Ok(ep.manager.sat_one(set, &vars)?.map(|v| decode_valuation(&ep.varmap, &v, Family::Current)))
    };

    let goal_states = ep.manager.and(layers[k], ep.goal)?;
    let mut state = pick(ep, goal_states)?.ok_or(ExtractError::Inconsistent { layer: k })?;

    let mut states = alloc::vec![state.clone()];
    let mut steps = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let target = ep.encode_state(&state, Family::Current)?;
        let pre = ep.transition.preimage(&mut ep.manager, target)?;
        let candidates = ep.manager.and(layers[i], pre)?;
        let prev = pick(ep, candidates)?.ok_or(ExtractError::Inconsistent { layer: i })?;
        let action = ep
            .actions
            .iter()
            .find(|a| apply_action_explicit(&prev, a).as_ref() == Some(&state))
            .ok_or(ExtractError::Inconsistent { layer: i })?;
        if !action.is_noop() {
            steps.push(action.clone());
            states.push(prev.clone());
        }
        state = prev;
    }
    steps.reverse();
    states.reverse();
    Ok(Plan { steps, states })
}

/// Replays `plan` from the initial state and checks that every step is
/// applicable, the recorded states (if any) match, and the goal holds at the
/// end.
pub fn validate_plan(p: &Problem, plan: &Plan) -> bool {
    if !plan.states.is_empty() && plan.states.len() != plan.steps.len() + 1 {
        return false;
    }
    let mut state = p.initial.clone();
    if plan.states.first().is_some_and(|s| *s != state) {
        return false;
    }
    for (i, a) in plan.steps.iter().enumerate() {
        state = match apply_action_explicit(&state, a) {
            Some(next) => next,
            None => return false,
        };
        if plan.states.get(i + 1).is_some_and(|s| *s != state) {
            return false;
        }
    }
    p.eval_goal(&state)
}
