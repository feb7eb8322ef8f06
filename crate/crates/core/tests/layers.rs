//! Forward layers, plans and termination against explicit breadth-first search.

use fcplan_core::oracle::{bfs_layers, shortest_plan_length, OracleConfig};
use fcplan_core::problems::{blocksworld, gripper, gripper_unsat};
use fcplan_core::reach::step_bound;
use fcplan_core::{
    build_encoded_problem, extract_plan, forward_pass, validate_plan, ForwardConfig, ForwardOutcome,
    GoalFormula, Problem, Threshold, VariableOrder,
};

const ORACLE: OracleConfig = OracleConfig { max_fluents: 32 };

fn without_goal(p: &Problem) -> Problem {
    let mut p = p.clone();
    p.goal = GoalFormula::Or(Vec::new());
    p
}

/// A fixed pseudo-random permutation, to check that answers do not depend
/// on the variable order.
fn shuffled(n: usize) -> VariableOrder {
    let mut ids: Vec<usize> = (0..n).collect();
    let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
    for i in (1..n).rev() {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        ids.swap(i, (x % (i as u64 + 1)) as usize);
    }
    VariableOrder::explicit(ids.into_iter().map(|i| fcplan_core::FluentId(i as u32)).collect(), n).unwrap()
}

#[test]
fn frontier_layers_equal_bfs_layers() {
    for p in [gripper(1), gripper(2), blocksworld(2), blocksworld(3)] {
        let p = without_goal(&p);
        let expected = bfs_layers(&p, usize::MAX, &ORACLE).unwrap();
        for order in [p.sort_order(), p.lexical_order(), shuffled(p.num_fluents())] {
            let mut ep = build_encoded_problem(&p, &order, Threshold::Finite(64), true).unwrap();
            let cfg = ForwardConfig { frontier_simplification: true, ..Default::default() };
            let r = forward_pass(&mut ep, &cfg).unwrap();
            assert_eq!(r.outcome, ForwardOutcome::NoPlan { step: expected.len() });
            for (layer, bfs) in r.layers.layers.iter().zip(&expected) {
                assert_eq!(ep.decode_states(*layer).unwrap(), bfs.states, "{} depth {}", p.name, bfs.depth);
            }
            assert!(r.layers.layers[expected.len()].is_false());
        }
    }
}

#[test]
fn plain_layers_are_cumulative_bfs_layers() {
    let p = without_goal(&blocksworld(3));
    let expected = bfs_layers(&p, usize::MAX, &ORACLE).unwrap();
    let mut ep = build_encoded_problem(&p, &p.sort_order(), Threshold::Infinite, true).unwrap();
    let r = forward_pass(&mut ep, &ForwardConfig::default()).unwrap();
    let mut acc = Vec::new();
    for (layer, bfs) in r.layers.layers.iter().zip(&expected) {
        acc.extend(bfs.states.iter().cloned());
        acc.sort();
        assert_eq!(ep.decode_states(*layer).unwrap(), acc);
    }
}

#[test]
fn plan_lengths_match_oracle_under_any_order() {
    for p in [gripper(1), gripper(2), gripper(3), blocksworld(2), blocksworld(3)] {
        let expected = shortest_plan_length(&p, &ORACLE).unwrap().unwrap();
        for order in [p.sort_order(), p.lexical_order(), shuffled(p.num_fluents())] {
            for noop in [true, false] {
                let mut ep = build_encoded_problem(&p, &order, Threshold::Finite(200), noop).unwrap();
                let r = forward_pass(&mut ep, &ForwardConfig::default()).unwrap();
                assert_eq!(r.outcome, ForwardOutcome::GoalFound { step: expected }, "{}", p.name);
                let plan = extract_plan(&mut ep, &r).unwrap();
                assert_eq!(plan.len(), expected);
                assert!(validate_plan(&p, &plan));
            }
        }
    }
}

#[test]
fn unsolvable_instances_stop_within_bound() {
    for n in 1..=3 {
        let p = gripper_unsat(n);
        assert_eq!(shortest_plan_length(&p, &ORACLE), Ok(None));
        for frontier in [false, true] {
            let mut ep = build_encoded_problem(&p, &p.sort_order(), Threshold::Infinite, true).unwrap();
            let cfg = ForwardConfig { frontier_simplification: frontier, ..Default::default() };
            let r = forward_pass(&mut ep, &cfg).unwrap();
            assert!(matches!(r.outcome, ForwardOutcome::NoPlan { .. }));
            assert!(r.outcome.step() as u64 <= step_bound(p.num_fluents()));
        }
    }
}

#[test]
fn universal_reachability_stops_at_bound() {
    // Two independent toggles reach all 2^2 states; without `noop` the
    // reached set only closes at ⊤, which has to be caught at step 2^2 − 1.
    use fcplan_core::{Fluent, GroundAction, GroundState, Sort};
    use fcplan_core::model::FluentSymbol;
    let f = |i: u32| fcplan_core::FluentId(i);
    let set = |ids: &[u32]| ids.iter().map(|&i| f(i)).collect::<GroundState>();
    let toggle = |name: &str, i: u32, on: bool| GroundAction {
        name: name.into(),
        args: vec![],
        pre_pos: if on { set(&[]) } else { set(&[i]) },
        pre_neg: if on { set(&[i]) } else { set(&[]) },
        add: if on { set(&[i]) } else { set(&[]) },
        del: if on { set(&[]) } else { set(&[i]) },
    };
    let p = Problem {
        name: "toggles".into(),
        sorts: vec![Sort::new("S", ["a", "b"])],
        symbols: vec![FluentSymbol { name: "p".into(), arg_sorts: vec!["S".into()] }],
        fluent_universe: vec![
            Fluent::new("p", [("S".to_string(), "a".to_string())]),
            Fluent::new("p", [("S".to_string(), "b".to_string())]),
        ],
        actions: vec![toggle("on_a", 0, true), toggle("off_a", 0, false), toggle("on_b", 1, true), toggle("off_b", 1, false)],
        initial: GroundState::empty(),
        goal: GoalFormula::Or(vec![]),
    };
    for noop in [true, false] {
        let mut ep = build_encoded_problem(&p, &p.sort_order(), Threshold::Infinite, noop).unwrap();
        let r = forward_pass(&mut ep, &ForwardConfig::default()).unwrap();
        assert!(matches!(r.outcome, ForwardOutcome::NoPlan { .. }));
        assert!(r.outcome.step() as u64 <= step_bound(2));
        assert_eq!(ep.count_states(r.reached_states()).unwrap(), 4);
    }
}
