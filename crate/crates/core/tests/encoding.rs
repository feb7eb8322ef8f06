//! Symbolic encodings checked against the explicit semantics on random
//! states, including states that are not reachable.

use fcplan_core::encode::{encode_action, encode_goal, encode_states, state_valuation};
use fcplan_core::problems::{blocksworld, gripper};
use fcplan_core::{
    build_encoded_problem, EncodedProblem, Family, FluentId, GoalFormula, GroundState, Problem,
    Threshold, Valuation,
};
use proptest::prelude::*;

fn encoded(p: &Problem, threshold: Threshold, lexical: bool) -> EncodedProblem {
    let order = if lexical { p.lexical_order() } else { p.sort_order() };
    build_encoded_problem(p, &order, threshold, true).unwrap()
}

fn state(n: usize) -> impl Strategy<Value = GroundState> {
    prop::collection::vec(any::<bool>(), n).prop_map(|bits| {
        bits.into_iter().enumerate().filter(|(_, b)| *b).map(|(i, _)| FluentId(i as u32)).collect()
    })
}

fn pair_valuation(ep: &EncodedProblem, s: &GroundState, t: &GroundState) -> Valuation {
    state_valuation(&ep.varmap, s, Family::Current)
        .iter()
        .chain(state_valuation(&ep.varmap, t, Family::Next).iter())
        .collect()
}

fn instance() -> impl Strategy<Value = (Problem, bool)> {
    (prop_oneof![(1usize..3).prop_map(gripper), (2usize..4).prop_map(blocksworld)], any::<bool>())
}

fn goal(n: u32) -> impl Strategy<Value = GoalFormula> {
    let leaf = (0..n).prop_map(|i| GoalFormula::Holds(FluentId(i)));
    leaf.prop_recursive(4, 20, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(GoalFormula::negate),
            prop::collection::vec(inner.clone(), 0..3).prop_map(GoalFormula::And),
            prop::collection::vec(inner, 0..3).prop_map(GoalFormula::Or),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// `T_a(s, t)` holds exactly when applying `a` to `s` yields `t`.
    #[test]
    fn action_formula_matches_successor(
        (p, lexical) in instance(),
        seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let mut ep = encoded(&p, Threshold::Infinite, lexical);
        let n = p.num_fluents();
        let s: GroundState = (0..n).filter(|i| seed >> (i % 64) & 1 == 1).map(|i| FluentId(i as u32)).collect();
        let a = pick.get(&ep.actions).clone();
        // Half the time take the real successor, otherwise a perturbed one.
        let t = match a.apply(&s) {
            Some(t) if seed & 1 == 0 => t,
            _ => (0..n).filter(|i| seed >> ((i + 7) % 64) & 1 == 1).map(|i| FluentId(i as u32)).collect(),
        };
        let map = ep.varmap.clone();
        let bdd = encode_action(&mut ep.manager, &map, &a).unwrap();
        let v = pair_valuation(&ep, &s, &t);
        prop_assert_eq!(ep.manager.eval(bdd, &v).unwrap(), a.apply(&s).as_ref() == Some(&t));
    }

    #[test]
    fn goal_formula_matches_evaluation(
        (s, g) in state(16).prop_flat_map(|s| (Just(s), goal(16))),
        lexical in any::<bool>(),
    ) {
        let p = gripper(3);
        let mut ep = encoded(&p, Threshold::Infinite, lexical);
        let map = ep.varmap.clone();
        let bdd = encode_goal(&mut ep.manager, &map, &g).unwrap();
        let v = state_valuation(&map, &s, Family::Current);
        prop_assert_eq!(ep.manager.eval(bdd, &v).unwrap(), fcplan_core::model::eval_goal(&g, &s));
    }

    #[test]
    fn state_sets_round_trip(states in prop::collection::vec(state(16), 0..12), lexical in any::<bool>()) {
        let p = gripper(3);
        let mut ep = encoded(&p, Threshold::Infinite, lexical);
        let map = ep.varmap.clone();
        let set = encode_states(&mut ep.manager, &map, &states, Family::Current).unwrap();
        let mut expected = states.clone();
        expected.sort();
        expected.dedup();
        prop_assert_eq!(ep.count_states(set).unwrap(), expected.len() as u128);
        prop_assert_eq!(ep.decode_states(set).unwrap(), expected);
    }

    /// The image of an arbitrary set of states is the set of explicit
    /// successors, whatever the partition threshold.
    #[test]
    fn image_matches_explicit_successors(
        states in prop::collection::vec(state(12), 1..6),
        threshold in prop_oneof![Just(Threshold::Infinite), (0usize..400).prop_map(Threshold::Finite)],
    ) {
        let p = gripper(2);
        let mut ep = encoded(&p, threshold, false);
        let map = ep.varmap.clone();
        let set = encode_states(&mut ep.manager, &map, &states, Family::Current).unwrap();
        let img = ep.transition.image(&mut ep.manager, set).unwrap();
        let mut expected: Vec<GroundState> =
            states.iter().flat_map(|s| ep.actions.iter().filter_map(|a| a.apply(s))).collect();
        expected.sort();
        expected.dedup();
        prop_assert_eq!(ep.decode_states(img).unwrap(), expected);

        let pre = ep.transition.preimage(&mut ep.manager, set).unwrap();
        for s in ep.decode_states(pre).unwrap() {
            prop_assert!(ep.actions.iter().any(|a| a.apply(&s).is_some_and(|t| states.contains(&t))));
        }
        for s in &states {
            // noop makes every state its own predecessor
            let single = encode_states(&mut ep.manager, &map, [s], Family::Current).unwrap();
            prop_assert!(ep.manager.implies(single, pre).unwrap());
        }
    }
}
