//! Disjunctively partitioned transition relations.
//!
//! Per-action transition BDDs are folded left to right into parts: the next
//! action is or-ed into the current part unless the result would have more
//! nodes than the threshold, in which case it starts a new part. Image and
//! preimage are computed part by part and the results disjoined.

use alloc::vec::Vec;
use core::fmt;

use crate::bdd::{BddError, BddManager, BddRef, VarIndex};
use crate::encode::{Family, VarMap};

/// Node-count limit for a combined part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(usize),
    Infinite,
}

impl Threshold {
    fn exceeded_by(self, nodes: usize) -> bool {
        match self {
            Threshold::Finite(t) => nodes > t,
            Threshold::Infinite => false,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => write!(f, "{t}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub bdd: BddRef,
    /// Indices of the actions folded into this part.
    pub actions: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TransitionRelation {
    parts: Vec<Part>,
    threshold: Threshold,
    current_vars: Vec<VarIndex>,
    next_vars: Vec<VarIndex>,
    to_current: Vec<(VarIndex, VarIndex)>,
    to_next: Vec<(VarIndex, VarIndex)>,
    is_current: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error(transparent)]
    Bdd(#[from] BddError),
    #[error("state set mentions {0}, which is not a current-state variable")]
    Family(VarIndex),
    #[error("transition relation needs at least one action")]
    Empty,
}

impl From<PartitionError> for crate::encode::EncodeError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::Bdd(e) => e.into(),
            other => crate::encode::EncodeError::Partition(other),
        }
    }
}

/// Greedily combines `action_bdds` (in order) into parts no larger than
/// `threshold` nodes. A single action that is already over the limit gets a
/// part of its own.
pub fn partition(
    mgr: &mut BddManager,
    map: &VarMap,
    action_bdds: &[BddRef],
    threshold: Threshold,
) -> Result<TransitionRelation, PartitionError> {
    let (&first, rest) = action_bdds.split_first().ok_or(PartitionError::Empty)?;
    let mut parts = Vec::new();
    let mut current = Part { bdd: first, actions: alloc::vec![0] };
    for (i, &t) in rest.iter().enumerate() {
        let combined = mgr.or(current.bdd, t)?;
        if threshold.exceeded_by(mgr.node_count(combined)?) {
            parts.push(core::mem::replace(&mut current, Part { bdd: t, actions: alloc::vec![i + 1] }));
        } else {
            current.bdd = combined;
            current.actions.push(i + 1);
        }
    }
    parts.push(current);

    let mut is_current = alloc::vec![false; mgr.num_vars() as usize];
    let current_vars = map.family_vars(Family::Current);
    for v in &current_vars {
        is_current[v.index()] = true;
    }
    Ok(TransitionRelation {
        parts,
        threshold,
        current_vars,
        next_vars: map.family_vars(Family::Next),
        to_current: map.shift(Family::Next),
        to_next: map.shift(Family::Current),
        is_current,
    })
}

impl TransitionRelation {
    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn threshold(&self) -> Threshold {
        self.threshold
    }

    pub fn part_sizes(&self, mgr: &BddManager) -> Result<Vec<usize>, BddError> {
        self.parts.iter().map(|p| mgr.node_count(p.bdd)).collect()
    }

    /// Sum of the node counts of the parts, each counted on its own.
    pub fn total_size(&self, mgr: &BddManager) -> Result<usize, BddError> {
        Ok(self.part_sizes(mgr)?.iter().sum())
    }

    pub fn monolithic(&self, mgr: &mut BddManager) -> Result<BddRef, BddError> {
        mgr.or_all(self.parts.iter().map(|p| p.bdd))
    }

    fn check_family(&self, mgr: &BddManager, set: BddRef) -> Result<(), PartitionError> {
        match mgr.support(set)?.into_iter().find(|v| !self.is_current[v.index()]) {
            Some(v) => Err(PartitionError::Family(v)),
            None => Ok(()),
        }
    }

    /// Successors of the states in `set`, as a set over `z`.
    pub fn image(&self, mgr: &mut BddManager, set: BddRef) -> Result<BddRef, PartitionError> {
        self.check_family(mgr, set)?;
        let mut acc = mgr.bdd_false();
        for part in &self.parts {
            let step = mgr.and_exists(set, part.bdd, &self.current_vars)?;
            acc = mgr.or(acc, step)?;
        }
        Ok(mgr.rename(acc, &self.to_current)?)
    }

    /// States with at least one successor in `set`.
    pub fn preimage(&self, mgr: &mut BddManager, set: BddRef) -> Result<BddRef, PartitionError> {
        self.check_family(mgr, set)?;
        let primed = mgr.rename(set, &self.to_next)?;
        let mut acc = mgr.bdd_false();
        for part in &self.parts {
            let step = mgr.and_exists(primed, part.bdd, &self.next_vars)?;
            acc = mgr.or(acc, step)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{build_encoded_problem, encode_states, EncodedProblem};
    use crate::model::Problem;
    use crate::problems::gripper;
    use alloc::vec;

    fn encoded(p: &Problem, threshold: Threshold) -> EncodedProblem {
        build_encoded_problem(p, &p.sort_order(), threshold, true).unwrap()
    }

    #[test]
    fn threshold_extremes() {
        let p = gripper(1);
        assert_eq!(encoded(&p, Threshold::Infinite).transition.parts().len(), 1);
        let ep = encoded(&p, Threshold::Finite(0));
        assert_eq!(ep.transition.parts().len(), p.actions.len() + 1);
        for (i, part) in ep.transition.parts().iter().enumerate() {
            assert_eq!(part.actions, vec![i]);
        }
    }

    #[test]
    fn parts_cover_every_action_once() {
        let p = gripper(3);
        let ep = encoded(&p, Threshold::Finite(100));
        let mut all: Vec<usize> = ep.transition.parts().iter().flat_map(|p| p.actions.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..ep.actions.len()).collect::<Vec<_>>());
    }

    #[test]
    fn disjunction_of_parts_is_threshold_independent() {
        let p = gripper(2);
        let mut ep = encoded(&p, Threshold::Infinite);
        let mono = ep.monolithic_transition().unwrap();
        for t in [Threshold::Finite(0), Threshold::Finite(100), Threshold::Finite(1000)] {
            let map = ep.varmap.clone();
            let bdds: Vec<BddRef> = ep
                .actions
                .clone()
                .iter()
                .map(|a| crate::encode::encode_action(&mut ep.manager, &map, a).unwrap())
                .collect();
            let tr = partition(&mut ep.manager, &map, &bdds, t).unwrap();
            assert_eq!(tr.monolithic(&mut ep.manager).unwrap(), mono, "threshold {t}");
        }
    }

    #[test]
    fn image_of_initial_state() {
        let p = gripper(1);
        let mut ep = encoded(&p, Threshold::Infinite);
        let img = ep.transition.image(&mut ep.manager, ep.init).unwrap();
        let mut expected: Vec<_> = p.actions.iter().filter_map(|a| a.apply(&p.initial)).collect();
        expected.push(p.initial.clone());
        expected.sort();
        assert_eq!(expected.len(), 4);
        assert_eq!(ep.decode_states(img).unwrap(), expected);

        let empty = ep.manager.bdd_false();
        assert!(ep.transition.image(&mut ep.manager, empty).unwrap().is_false());
        assert!(ep.transition.preimage(&mut ep.manager, empty).unwrap().is_false());
    }

    #[test]
    fn image_rejects_next_state_sets() {
        let p = gripper(1);
        let mut ep = encoded(&p, Threshold::Infinite);
        let v = ep.manager.mk_var(VarIndex(1)).unwrap();
        assert_eq!(ep.transition.image(&mut ep.manager, v), Err(PartitionError::Family(VarIndex(1))));
    }

    #[test]
    fn preimage_contains_noop_source() {
        let p = gripper(2);
        let mut ep = encoded(&p, Threshold::Finite(50));
        let img = ep.transition.image(&mut ep.manager, ep.init).unwrap();
        let pre = ep.transition.preimage(&mut ep.manager, img).unwrap();
        assert!(ep.manager.implies(ep.init, pre).unwrap());
    }

    #[test]
    fn preimage_matches_explicit_predecessors() {
        let p = gripper(1);
        let mut ep = encoded(&p, Threshold::Finite(0));
        let img = ep.transition.image(&mut ep.manager, ep.init).unwrap();
        let states = ep.decode_states(img).unwrap();
        let target = states[0].clone();
        let set = encode_states(&mut ep.manager, &ep.varmap, [&target], Family::Current).unwrap();
        let pre = ep.transition.preimage(&mut ep.manager, set).unwrap();
        let got = ep.decode_states(pre).unwrap();
        assert!(got.contains(&p.initial));
        for s in &got {
            assert!(ep.actions.iter().any(|a| a.apply(s).as_ref() == Some(&target)));
        }
    }

    #[test]
    fn image_is_threshold_independent() {
        let p = gripper(2);
        let mut ep = encoded(&p, Threshold::Infinite);
        let map = ep.varmap.clone();
        let bdds: Vec<BddRef> = ep
            .actions
            .clone()
            .iter()
            .map(|a| crate::encode::encode_action(&mut ep.manager, &map, a).unwrap())
            .collect();
        let split = partition(&mut ep.manager, &map, &bdds, Threshold::Finite(0)).unwrap();
        let mut layer = ep.init;
        for _ in 0..5 {
            let a = ep.transition.image(&mut ep.manager, layer).unwrap();
            let b = split.image(&mut ep.manager, layer).unwrap();
            assert_eq!(a, b);
            layer = a;
        }
    }
}
