//! Generators for the Gripper and Blocksworld problem families.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{
    Fluent, FluentId, FluentSymbol, GoalFormula, GroundAction, GroundState, Problem, Sort,
};

/// Incrementally builds a ground problem; fluents are interned in the order
/// they are declared.
struct Builder {
    sorts: Vec<Sort>,
    symbols: Vec<FluentSymbol>,
    universe: Vec<Fluent>,
}

impl Builder {
    fn new(sorts: Vec<Sort>) -> Self {
        Builder { sorts, symbols: Vec::new(), universe: Vec::new() }
    }

    fn symbol(&mut self, name: &str, arg_sorts: &[&str]) {
        self.symbols.push(FluentSymbol {
            name: name.to_string(),
            arg_sorts: arg_sorts.iter().map(|s| s.to_string()).collect(),
        });
    }

    fn fluent_value(&self, symbol: &str, args: &[&str]) -> Fluent {
        let sym = self.symbols.iter().find(|s| s.name == symbol).expect("declared symbol");
        Fluent::new(
            symbol,
            sym.arg_sorts.iter().zip(args).map(|(s, c)| (s.clone(), c.to_string())),
        )
    }

    fn declare(&mut self, symbol: &str, args: &[&str]) {
        let f = self.fluent_value(symbol, args);
        self.universe.push(f);
    }

    fn id(&self, symbol: &str, args: &[&str]) -> FluentId {
        let f = self.fluent_value(symbol, args);
        let i = self.universe.iter().position(|g| *g == f).expect("declared fluent");
        FluentId(i as u32)
    }

    fn finish(
        self,
        name: String,
        actions: Vec<GroundAction>,
        initial: GroundState,
        goal: GoalFormula,
    ) -> Problem {
        Problem {
            name,
            sorts: self.sorts,
            symbols: self.symbols,
            fluent_universe: self.universe,
            actions,
            initial,
            goal,
        }
    }
}

struct ActionSpec<'a> {
    name: &'a str,
    args: &'a [&'a str],
    pre_pos: Vec<FluentId>,
    pre_neg: Vec<FluentId>,
    add: Vec<FluentId>,
    del: Vec<FluentId>,
}

impl ActionSpec<'_> {
    fn build(self) -> GroundAction {
        GroundAction {
            name: self.name.to_string(),
            args: self.args.iter().map(|s| s.to_string()).collect(),
            pre_pos: self.pre_pos.into_iter().collect(),
            pre_neg: self.pre_neg.into_iter().collect(),
            add: self.add.into_iter().collect(),
            del: self.del.into_iter().collect(),
        }
    }
}

/// Gripper with `n` balls: a robot with grippers `G1`, `G2` has to carry balls
/// `B1…Bn` from room `A` to room `B`.
///
/// Fluents (4n + 4): `at(b,r)`, `carry(b,g)`, `free(g)`, `atR(r)`.
pub fn gripper(n: usize) -> Problem {
    assert!(n >= 1, "gripper needs at least one ball");
    let names: Vec<String> = (1..=n).map(|i| format!("B{i}")).collect();
    let balls: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::new(vec![
        Sort::new("BALL".to_string(), names.clone()),
        Sort::new("ROOM", ["A", "B"]),
        Sort::new("GRIPPER", ["G1", "G2"]),
    ]);
    b.symbol("at", &["BALL", "ROOM"]);
    b.symbol("carry", &["BALL", "GRIPPER"]);
    b.symbol("free", &["GRIPPER"]);
    b.symbol("atR", &["ROOM"]);

    let rooms = ["A", "B"];
    let grippers = ["G1", "G2"];
    for &ball in &balls {
        for &r in &rooms {
            b.declare("at", &[ball, r]);
        }
    }
    for &ball in &balls {
        for &g in &grippers {
            b.declare("carry", &[ball, g]);
        }
    }
    for &g in &grippers {
        b.declare("free", &[g]);
    }
    for &r in &rooms {
        b.declare("atR", &[r]);
    }

    let mut actions = Vec::new();
    for &r1 in &rooms {
        for &r2 in rooms.iter().filter(|&&r2| r2 != r1) {
            let (from, to) = (b.id("atR", &[r1]), b.id("atR", &[r2]));
            actions.push(
                ActionSpec {
                    name: "move",
                    args: &[r1, r2],
                    pre_pos: vec![from],
                    pre_neg: vec![to],
                    add: vec![to],
                    del: vec![from],
                }
                .build(),
            );
        }
    }
    for &ball in &balls {
        for &r in &rooms {
            for &g in &grippers {
                let (at, atr) = (b.id("at", &[ball, r]), b.id("atR", &[r]));
                let (free, carry) = (b.id("free", &[g]), b.id("carry", &[ball, g]));
                actions.push(
                    ActionSpec {
                        name: "pick",
                        args: &[ball, r, g],
                        pre_pos: vec![at, atr, free],
                        pre_neg: vec![carry],
                        add: vec![carry],
                        del: vec![at, free],
                    }
                    .build(),
                );
            }
        }
    }
    for &ball in &balls {
        for &r in &rooms {
            for &g in &grippers {
                let (at, atr) = (b.id("at", &[ball, r]), b.id("atR", &[r]));
                let (free, carry) = (b.id("free", &[g]), b.id("carry", &[ball, g]));
                actions.push(
                    ActionSpec {
                        name: "drop",
                        args: &[ball, r, g],
                        pre_pos: vec![carry, atr],
                        pre_neg: vec![at, free],
                        add: vec![at, free],
                        del: vec![carry],
                    }
                    .build(),
                );
            }
        }
    }

    let mut initial: GroundState = balls.iter().map(|&ball| b.id("at", &[ball, "A"])).collect();
    for &g in &grippers {
        initial.insert(b.id("free", &[g]));
    }
    initial.insert(b.id("atR", &["A"]));

    let goal =
        GoalFormula::And(balls.iter().map(|&ball| GoalFormula::Holds(b.id("at", &[ball, "B"]))).collect());
    b.finish(format!("gripper-{n}"), actions, initial, goal)
}

/// Gripper whose goal asks for `B1` to be in both rooms at once, which no
/// reachable state satisfies.
pub fn gripper_unsat(n: usize) -> Problem {
    let mut p = gripper(n);
    let a = p.find_fluent_by_label("at(B1,A)").expect("gripper fluent");
    let b = p.find_fluent_by_label("at(B1,B)").expect("gripper fluent");
    p.goal = GoalFormula::And(vec![GoalFormula::Holds(a), GoalFormula::Holds(b)]);
    p.name = format!("gripper-{n}-unsat");
    p
}

/// Single-arm Blocksworld with `n` blocks, all initially on the table. The goal
/// is the tower `B1` on `B2` on … on `Bn`.
///
/// Fluents: `on(x,y)` for `x ≠ y`, `ontable(x)`, `clear(x)`, `holding(x)` and
/// `handempty`, i.e. n(n−1) + 3n + 1 in total.
pub fn blocksworld(n: usize) -> Problem {
    assert!(n >= 2, "blocksworld needs at least two blocks");
    let names: Vec<String> = (1..=n).map(|i| format!("B{i}")).collect();
    let blocks: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut b = Builder::new(vec![Sort::new("BLOCK".to_string(), names.clone())]);
    b.symbol("on", &["BLOCK", "BLOCK"]);
    b.symbol("ontable", &["BLOCK"]);
    b.symbol("clear", &["BLOCK"]);
    b.symbol("holding", &["BLOCK"]);
    b.symbol("handempty", &[]);

    for &x in &blocks {
        for &y in blocks.iter().filter(|&&y| y != x) {
            b.declare("on", &[x, y]);
        }
    }
    for sym in ["ontable", "clear", "holding"] {
        for &x in &blocks {
            b.declare(sym, &[x]);
        }
    }
    b.declare("handempty", &[]);

    let hand = b.id("handempty", &[]);
    let mut actions = Vec::new();
    for &x in &blocks {
        let (clear, table, holding) =
            (b.id("clear", &[x]), b.id("ontable", &[x]), b.id("holding", &[x]));
        actions.push(
            ActionSpec {
                name: "pickup",
                args: &[x],
                pre_pos: vec![clear, table, hand],
                pre_neg: vec![holding],
                add: vec![holding],
                del: vec![clear, table, hand],
            }
            .build(),
        );
    }
    for &x in &blocks {
        let (clear, table, holding) =
            (b.id("clear", &[x]), b.id("ontable", &[x]), b.id("holding", &[x]));
        actions.push(
            ActionSpec {
                name: "putdown",
                args: &[x],
                pre_pos: vec![holding],
                pre_neg: vec![clear, table, hand],
                add: vec![clear, table, hand],
                del: vec![holding],
            }
            .build(),
        );
    }
    for &x in &blocks {
        for &y in blocks.iter().filter(|&&y| y != x) {
            let (holding, clear_x) = (b.id("holding", &[x]), b.id("clear", &[x]));
            let (clear_y, on) = (b.id("clear", &[y]), b.id("on", &[x, y]));
            actions.push(
                ActionSpec {
                    name: "stack",
                    args: &[x, y],
                    pre_pos: vec![holding, clear_y],
                    pre_neg: vec![on, clear_x, hand],
                    add: vec![on, clear_x, hand],
                    del: vec![holding, clear_y],
                }
                .build(),
            );
        }
    }
    for &x in &blocks {
        for &y in blocks.iter().filter(|&&y| y != x) {
            let (holding, clear_x) = (b.id("holding", &[x]), b.id("clear", &[x]));
            let (clear_y, on) = (b.id("clear", &[y]), b.id("on", &[x, y]));
            actions.push(
                ActionSpec {
                    name: "unstack",
                    args: &[x, y],
                    pre_pos: vec![on, clear_x, hand],
                    pre_neg: vec![holding, clear_y],
                    add: vec![holding, clear_y],
                    del: vec![on, clear_x, hand],
                }
                .build(),
            );
        }
    }

    let mut initial = GroundState::empty();
    for &x in &blocks {
        initial.insert(b.id("ontable", &[x]));
        initial.insert(b.id("clear", &[x]));
    }
    initial.insert(hand);

    let goal = GoalFormula::And(
        blocks.windows(2).map(|w| GoalFormula::Holds(b.id("on", &[w[0], w[1]]))).collect(),
    );
    b.finish(format!("blocksworld-{n}"), actions, initial, goal)
}
