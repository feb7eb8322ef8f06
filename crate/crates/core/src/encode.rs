//! Propositional encoding of states, goals and actions.
//!
//! Every fluent `f` gets a current-state variable `z_f` and a next-state
//! variable `z'_f`. A state becomes the minterm that sets exactly its fluents
//! to ⊤. An action becomes the transition formula
//!
//! ```text
//! ⋀ pre_pos z_f ∧ ⋀ pre_neg ¬z_f ∧ ⋀ add z'_f ∧ ⋀ del ¬z'_f ∧ ⋀ (other f) (z'_f ↔ z_f)
//! ```
//!
//! which a pair of states satisfies exactly when the action leads from the
//! first to the second.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bdd::{BddError, BddManager, BddRef, Valuation, VarIndex};
use crate::model::{Diagnostic, FluentId, GoalFormula, GroundAction, GroundState, Problem};
use crate::order::VariableOrder;
use crate::partition::{partition, Threshold, TransitionRelation};

/// Which copy of the state variables a formula talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Current,
    Next,
}

/// Assignment of BDD variables to fluents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    current: Vec<VarIndex>,
    next: Vec<VarIndex>,
    /// Fluent at each order position.
    by_position: Vec<FluentId>,
}

impl VarMap {
    /// `z_f = 2i`, `z'_f = 2i + 1` where `i` is the position of `f` in `order`.
    pub fn interleaved(order: &VariableOrder) -> Self {
        let n = order.fluents.len();
        let mut current = alloc::vec![VarIndex(0); n];
        let mut next = alloc::vec![VarIndex(0); n];
        for (i, f) in order.fluents.iter().enumerate() {
            current[f.index()] = VarIndex(2 * i as u32);
            next[f.index()] = VarIndex(2 * i as u32 + 1);
        }
        VarMap { current, next, by_position: order.fluents.clone() }
    }

    pub fn num_fluents(&self) -> usize {
        self.by_position.len()
    }

    pub fn num_vars(&self) -> u32 {
        2 * self.by_position.len() as u32
    }

    pub fn current(&self, f: FluentId) -> VarIndex {
        self.current[f.index()]
    }

    pub fn next(&self, f: FluentId) -> VarIndex {
        self.next[f.index()]
    }

    pub fn var(&self, f: FluentId, family: Family) -> VarIndex {
        match family {
            Family::Current => self.current(f),
            Family::Next => self.next(f),
        }
    }

    /// Fluents in variable order.
    pub fn order(&self) -> &[FluentId] {
        &self.by_position
    }

    /// All variables of one family, ascending.
    pub fn family_vars(&self, family: Family) -> Vec<VarIndex> {
        self.by_position.iter().map(|&f| self.var(f, family)).collect()
    }

    /// The fluent a variable belongs to, and its family.
    pub fn fluent_of(&self, v: VarIndex) -> Option<(FluentId, Family)> {
        let f = *self.by_position.get(v.index() / 2)?;
        let family = if v.0 % 2 == 0 { Family::Current } else { Family::Next };
        Some((f, family))
    }

    /// Substitution `z → z'` (or back) for [`BddManager::rename`].
    pub fn shift(&self, from: Family) -> Vec<(VarIndex, VarIndex)> {
        self.by_position
            .iter()
            .map(|&f| match from {
                Family::Current => (self.current(f), self.next(f)),
                Family::Next => (self.next(f), self.current(f)),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodeError {
    #[error(transparent)]
    Bdd(#[from] BddError),
    #[error("fluent #{0} is not in the universe")]
    UnknownFluent(u32),
    #[error("action {0} has inconsistent effects")]
    InconsistentAction(String),
    #[error(transparent)]
    Partition(crate::partition::PartitionError),
    #[error("problem failed validation ({} diagnostics)", .0.len())]
    InvalidProblem(Vec<Diagnostic>),
}

fn check_state(map: &VarMap, s: &GroundState) -> Result<(), EncodeError> {
    match s.iter().find(|f| f.index() >= map.num_fluents()) {
        Some(f) => Err(EncodeError::UnknownFluent(f.0)),
        None => Ok(()),
    }
}

/// The minterm of `s` over one variable family.
pub fn encode_state(
    mgr: &mut BddManager,
    map: &VarMap,
    s: &GroundState,
    family: Family,
) -> Result<BddRef, EncodeError> {
    check_state(map, s)?;
    let mut acc = mgr.bdd_true();
    for &f in map.order().iter().rev() {
        let lit = mgr.literal(map.var(f, family), s.contains(f))?;
        acc = mgr.and(lit, acc)?;
    }
    Ok(acc)
}

/// The union of the minterms of `states`.
pub fn encode_states<'a>(
    mgr: &mut BddManager,
    map: &VarMap,
    states: impl IntoIterator<Item = &'a GroundState>,
    family: Family,
) -> Result<BddRef, EncodeError> {
    let mut acc = mgr.bdd_false();
    for s in states {
        let m = encode_state(mgr, map, s, family)?;
        acc = mgr.or(acc, m)?;
    }
    Ok(acc)
}

/// `{f | v(z_f) = ⊤}`; unassigned variables count as ⊥.
pub fn decode_valuation(map: &VarMap, v: &Valuation, family: Family) -> GroundState {
    map.order().iter().copied().filter(|&f| v.get(map.var(f, family)) == Some(true)).collect()
}

/// The valuation `z_f ↦ (f ∈ s)` over one family.
pub fn state_valuation(map: &VarMap, s: &GroundState, family: Family) -> Valuation {
    map.order().iter().map(|&f| (map.var(f, family), s.contains(f))).collect()
}

/// Every state in a set given as a BDD over one family.
pub fn decode_states(
    mgr: &BddManager,
    map: &VarMap,
    set: BddRef,
    family: Family,
) -> Result<Vec<GroundState>, EncodeError> {
    let vars = map.family_vars(family);
    let mut out: Vec<GroundState> =
        mgr.models(set, &vars)?.iter().map(|v| decode_valuation(map, v, family)).collect();
    out.sort();
    Ok(out)
}

pub fn encode_goal(
    mgr: &mut BddManager,
    map: &VarMap,
    g: &GoalFormula,
) -> Result<BddRef, EncodeError> {
    Ok(match g {
        GoalFormula::Holds(f) => {
            if f.index() >= map.num_fluents() {
                return Err(EncodeError::UnknownFluent(f.0));
            }
            mgr.mk_var(map.current(*f))?
        }
        GoalFormula::Not(g) => {
            let inner = encode_goal(mgr, map, g)?;
            mgr.not(inner)?
        }
        GoalFormula::And(gs) => {
            let mut acc = mgr.bdd_true();
            for g in gs {
                let x = encode_goal(mgr, map, g)?;
                acc = mgr.and(acc, x)?;
            }
            acc
        }
        GoalFormula::Or(gs) => {
            let mut acc = mgr.bdd_false();
            for g in gs {
                let x = encode_goal(mgr, map, g)?;
                acc = mgr.or(acc, x)?;
            }
            acc
        }
    })
}

/// The transition formula of one ground action over `z ∪ z'`.
///
/// Conjuncts are added from the bottom of the order upwards so every
/// intermediate result stays linear in the number of fluents.
pub fn encode_action(
    mgr: &mut BddManager,
    map: &VarMap,
    a: &GroundAction,
) -> Result<BddRef, EncodeError> {
    for s in [&a.pre_pos, &a.pre_neg, &a.add, &a.del] {
        check_state(map, s)?;
    }
    let consistent = a.add.is_disjoint(&a.del)
        && a.del.is_subset(&a.pre_pos)
        && a.add.is_subset(&a.pre_neg);
    if !consistent {
        return Err(EncodeError::InconsistentAction(a.label()));
    }

    let mut acc = mgr.bdd_true();
    for &f in map.order().iter().rev() {
        let (z, zn) = (map.current(f), map.next(f));
        let mut c = if a.add.contains(f) {
            mgr.mk_var(zn)?
        } else if a.del.contains(f) {
            mgr.literal(zn, false)?
        } else {
            let (x, y) = (mgr.mk_var(z)?, mgr.mk_var(zn)?);
            mgr.iff(x, y)?
        };
        if a.pre_pos.contains(f) {
            let lit = mgr.mk_var(z)?;
            c = mgr.and(lit, c)?;
        }
        if a.pre_neg.contains(f) {
            let lit = mgr.literal(z, false)?;
            c = mgr.and(lit, c)?;
        }
        acc = mgr.and(c, acc)?;
    }
    Ok(acc)
}

/// A problem compiled to BDDs, owning the manager all its handles live in.
#[derive(Debug)]
pub struct EncodedProblem {
    pub manager: BddManager,
    pub varmap: VarMap,
    /// The single initial state over `z`.
    pub init: BddRef,
    /// Goal states over `z`.
    pub goal: BddRef,
    pub transition: TransitionRelation,
    /// Ground actions in transition order; `noop` last when included.
    pub actions: Vec<GroundAction>,
    pub include_noop: bool,
    pub num_fluents: usize,
}

impl EncodedProblem {
    pub fn encode_state(&mut self, s: &GroundState, family: Family) -> Result<BddRef, EncodeError> {
        encode_state(&mut self.manager, &self.varmap, s, family)
    }

    pub fn decode_states(&self, set: BddRef) -> Result<Vec<GroundState>, EncodeError> {
        decode_states(&self.manager, &self.varmap, set, Family::Current)
    }

    /// Number of states in a set over `z`.
    pub fn count_states(&self, set: BddRef) -> Result<u128, EncodeError> {
        Ok(self.manager.sat_count(set, &self.varmap.family_vars(Family::Current))?)
    }

    /// Disjunction of all transition parts.
    pub fn monolithic_transition(&mut self) -> Result<BddRef, EncodeError> {
        Ok(self.transition.monolithic(&mut self.manager)?)
    }
}

/// Validates `p`, encodes it under `order` and partitions its transition
/// relation with `threshold`.
pub fn build_encoded_problem(
    p: &Problem,
    order: &VariableOrder,
    threshold: Threshold,
    include_noop: bool,
) -> Result<EncodedProblem, EncodeError> {
    p.validate().map_err(EncodeError::InvalidProblem)?;
    if order.len() != p.num_fluents() {
        return Err(EncodeError::UnknownFluent(order.len() as u32));
    }
    let varmap = VarMap::interleaved(order);
    let mut mgr = BddManager::new(varmap.num_vars());

    let init = encode_state(&mut mgr, &varmap, &p.initial, Family::Current)?;
    let goal = encode_goal(&mut mgr, &varmap, &p.goal)?;

    let mut actions = p.actions.clone();
    if include_noop {
        actions.push(GroundAction::noop());
    }
    let mut bdds = Vec::with_capacity(actions.len());
    for a in &actions {
        bdds.push(encode_action(&mut mgr, &varmap, a)?);
    }
    let transition = partition(&mut mgr, &varmap, &bdds, threshold)?;

    Ok(EncodedProblem {
        manager: mgr,
        varmap,
        init,
        goal,
        transition,
        actions,
        include_noop,
        num_fluents: p.num_fluents(),
    })
}
