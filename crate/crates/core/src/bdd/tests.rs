use alloc::boxed::Box;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;

/// Formula syntax tree evaluated directly, independent of the BDD code.
#[derive(Clone, Debug)]
enum Formula {
    Const(bool),
    Var(u32),
    Not(Box<Formula>),
    Bin(BoolOp, Box<Formula>, Box<Formula>),
}

impl Formula {
    fn eval(&self, bits: u32) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => bits >> v & 1 == 1,
            Formula::Not(f) => !f.eval(bits),
            Formula::Bin(op, a, b) => op.eval(a.eval(bits), b.eval(bits)),
        }
    }

    fn build(&self, m: &mut BddManager) -> BddRef {
        match self {
            Formula::Const(b) => m.constant(*b),
            Formula::Var(v) => m.mk_var(VarIndex(*v)).unwrap(),
            Formula::Not(f) => {
                let x = f.build(m);
                m.not(x).unwrap()
            }
            Formula::Bin(op, a, b) => {
                let (x, y) = (a.build(m), b.build(m));
                m.apply(*op, x, y).unwrap()
            }
        }
    }

    fn truth_table(&self, n: u32) -> Vec<bool> {
        (0..1u32 << n).map(|bits| self.eval(bits)).collect()
    }
}

fn valuation(n: u32, bits: u32) -> Valuation {
    (0..n).map(|v| (VarIndex(v), bits >> v & 1 == 1)).collect()
}

fn arb_op() -> impl Strategy<Value = BoolOp> {
    prop_oneof![
        Just(BoolOp::And),
        Just(BoolOp::Or),
        Just(BoolOp::Xor),
        Just(BoolOp::Iff),
        Just(BoolOp::Diff)
    ]
}

fn arb_formula(n: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Formula::Const),
        6 => (0..n).prop_map(Formula::Var),
    ];
    leaf.prop_recursive(5, 32, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (arb_op(), inner.clone(), inner).prop_map(|(op, a, b)| Formula::Bin(op, Box::new(a), Box::new(b))),
        ]
    })
}

/// Walks every reachable node and checks reduction and ordering.
fn assert_well_formed(m: &BddManager, f: BddRef) {
    let mut stack = alloc::vec![m.check(f).unwrap()];
    let mut seen = hashbrown::HashSet::new();
    let mut triples = hashbrown::HashSet::new();
    while let Some(n) = stack.pop() {
        if n <= TRUE || !seen.insert(n) {
            continue;
        }
        let node = m.node(n);
        assert_ne!(node.low, node.high);
        assert!(node.var < m.var_of(node.low) && node.var < m.var_of(node.high));
        assert!(triples.insert((node.var, node.low, node.high)));
        stack.push(node.low);
        stack.push(node.high);
    }
}

fn ab_or_cd(m: &mut BddManager) -> BddRef {
    let [a, b, c, d] = [0, 1, 2, 3].map(|v| m.mk_var(VarIndex(v)).unwrap());
    let ab = m.and(a, b).unwrap();
    let cd = m.and(c, d).unwrap();
    m.or(ab, cd).unwrap()
}

#[test]
fn literals() {
    let mut m = BddManager::new(4);
    let x = m.mk_var(VarIndex(0)).unwrap();
    assert!(m.eval(x, &valuation(1, 1)).unwrap());
    assert!(!m.eval(x, &valuation(1, 0)).unwrap());
    let y = m.mk_var(VarIndex(3)).unwrap();
    assert_eq!(m.node_count(y).unwrap(), 1);
    assert_eq!(
        m.mk_var(VarIndex(4)),
        Err(BddError::InvalidVariable { var: VarIndex(4), num_vars: 4 })
    );
}

#[test]
fn four_variable_example() {
    let mut m = BddManager::new(4);
    let f = ab_or_cd(&mut m);
    // a=⊥, b=⊥, c=⊤, d=⊥
    assert!(!m.eval(f, &valuation(4, 0b0100)).unwrap());
    assert_eq!(m.node_count(f).unwrap(), 4);
    assert_well_formed(&m, f);
}

#[test]
fn identities() {
    let mut m = BddManager::new(3);
    let f = ab_xor_c(&mut m);
    let ff = m.bdd_false();
    let tt = m.bdd_true();
    assert_eq!(m.or(f, ff).unwrap(), f);
    assert!(m.not(tt).unwrap().is_false());
    let nf = m.not(f).unwrap();
    assert!(m.and(f, nf).unwrap().is_false());
    assert_eq!(m.not(nf).unwrap(), f);
    let x = m.mk_var(VarIndex(0)).unwrap();
    let nx = m.not(x).unwrap();
    assert!(!m.eval(nx, &valuation(1, 1)).unwrap());
}

fn ab_xor_c(m: &mut BddManager) -> BddRef {
    let [a, b, c] = [0, 1, 2].map(|v| m.mk_var(VarIndex(v)).unwrap());
    let ab = m.and(a, b).unwrap();
    m.xor(ab, c).unwrap()
}

#[test]
fn de_morgan_by_handle() {
    let mut m = BddManager::new(2);
    let (a, b) = (m.mk_var(VarIndex(0)).unwrap(), m.mk_var(VarIndex(1)).unwrap());
    let ab = m.and(a, b).unwrap();
    let lhs = m.not(ab).unwrap();
    let (na, nb) = (m.not(a).unwrap(), m.not(b).unwrap());
    assert_eq!(lhs, m.or(na, nb).unwrap());
}

#[test]
fn ite_terminal_cases() {
    let mut m = BddManager::new(3);
    let f = ab_xor_c(&mut m);
    let g = m.mk_var(VarIndex(1)).unwrap();
    let (tt, ff) = (m.bdd_true(), m.bdd_false());
    assert_eq!(m.ite(f, tt, ff).unwrap(), f);
    assert_eq!(m.ite(tt, g, f).unwrap(), g);
}

#[test]
fn exists_examples() {
    let mut m = BddManager::new(2);
    let (a, b) = (m.mk_var(VarIndex(0)).unwrap(), m.mk_var(VarIndex(1)).unwrap());
    assert!(m.exists(a, &[VarIndex(0)]).unwrap().is_true());
    assert_eq!(m.exists(a, &[]).unwrap(), a);
    let ab = m.and(a, b).unwrap();
    assert_eq!(m.exists(ab, &[VarIndex(1)]).unwrap(), a);
}

#[test]
fn rename_examples() {
    let mut m = BddManager::new(6);
    let x0 = m.mk_var(VarIndex(0)).unwrap();
    let x1 = m.mk_var(VarIndex(1)).unwrap();
    assert_eq!(m.rename(x0, &[(VarIndex(0), VarIndex(1))]).unwrap(), x1);
    let f = ab_xor_c(&mut m);
    assert_eq!(m.rename(f, &[]).unwrap(), f);

    // z_a = 0, z_c = 4 → z'_a = 1, z'_c = 5 under the interleaved order.
    let (za, zc) = (x0, m.mk_var(VarIndex(4)).unwrap());
    let g = m.and(za, zc).unwrap();
    let shifted = m.rename(g, &[(VarIndex(0), VarIndex(1)), (VarIndex(2), VarIndex(3)), (VarIndex(4), VarIndex(5))]).unwrap();
    let v: Valuation = [(VarIndex(1), true), (VarIndex(5), true)].into_iter().collect();
    assert!(m.eval(shifted, &v).unwrap());
    assert_eq!(m.support(shifted).unwrap(), [VarIndex(1), VarIndex(5)]);
}

#[test]
fn rename_errors() {
    let mut m = BddManager::new(4);
    let (a, b) = (m.mk_var(VarIndex(0)).unwrap(), m.mk_var(VarIndex(2)).unwrap());
    let f = m.and(a, b).unwrap();
    assert!(matches!(
        m.rename(f, &[(VarIndex(0), VarIndex(3))]),
        Err(BddError::RenameOrder { .. })
    ));
    assert_eq!(
        m.rename(f, &[(VarIndex(0), VarIndex(1)), (VarIndex(2), VarIndex(1))]),
        Err(BddError::RenameNotInjective { target: VarIndex(1) })
    );
}

#[test]
fn sat_one_examples() {
    let mut m = BddManager::new(3);
    assert_eq!(m.sat_one(m.bdd_false(), &[VarIndex(0)]).unwrap(), None);
    let tt = m.bdd_true();
    let v = m.sat_one(tt, &[VarIndex(0), VarIndex(1)]).unwrap().unwrap();
    assert_eq!(v, [(VarIndex(0), false), (VarIndex(1), false)].into_iter().collect());
    let (a, c) = (m.mk_var(VarIndex(0)).unwrap(), m.mk_var(VarIndex(2)).unwrap());
    let f = m.and(a, c).unwrap();
    let v = m.sat_one(f, &[VarIndex(0), VarIndex(1), VarIndex(2)]).unwrap().unwrap();
    assert_eq!(
        v,
        [(VarIndex(0), true), (VarIndex(1), false), (VarIndex(2), true)].into_iter().collect()
    );
}

#[test]
fn node_count_and_eval_of_terminals() {
    let m = BddManager::new(2);
    assert_eq!(m.node_count(m.bdd_true()).unwrap(), 0);
    assert!(m.eval(m.bdd_true(), &Valuation::new()).unwrap());
}

#[test]
fn incomplete_valuation() {
    let mut m = BddManager::new(2);
    let a = m.mk_var(VarIndex(1)).unwrap();
    assert_eq!(m.eval(a, &Valuation::new()), Err(BddError::IncompleteValuation(VarIndex(1))));
}

#[test]
fn managers_do_not_mix() {
    let mut m1 = BddManager::new(2);
    let mut m2 = BddManager::new(2);
    let a = m1.mk_var(VarIndex(0)).unwrap();
    let b = m2.mk_var(VarIndex(0)).unwrap();
    assert_eq!(m1.and(a, b), Err(BddError::ManagerMismatch));
    assert_eq!(m2.not(a), Err(BddError::ManagerMismatch));
}

#[test]
fn sat_count_and_models() {
    let mut m = BddManager::new(4);
    let f = ab_or_cd(&mut m);
    let all: Vec<VarIndex> = (0..4).map(VarIndex).collect();
    // (a∧b)∨(c∧d): 4 + 4 − 1 = 7 models
    assert_eq!(m.sat_count(f, &all).unwrap(), 7);
    assert_eq!(m.models(f, &all).unwrap().len(), 7);
    let six: Vec<VarIndex> = (0..4).map(VarIndex).collect();
    assert_eq!(m.sat_count(m.bdd_true(), &six).unwrap(), 16);
    assert!(matches!(m.sat_count(f, &[VarIndex(0)]), Err(BddError::OutsideSupport(_))));
}

#[test]
fn exhaustive_small_tables() {
    // Every boolean function of 2 variables, built from its minterms, gets a
    // distinct handle; the ones of 3 variables are checked via random trees
    // below.
    let mut m = BddManager::new(2);
    let mut handles = Vec::new();
    for table in 0u32..16 {
        let mut f = m.bdd_false();
        for bits in 0..4u32 {
            if table >> bits & 1 == 1 {
                let l0 = m.literal(VarIndex(0), bits & 1 == 1).unwrap();
                let l1 = m.literal(VarIndex(1), bits & 2 == 2).unwrap();
                let t = m.and(l0, l1).unwrap();
                f = m.or(f, t).unwrap();
            }
        }
        for bits in 0..4u32 {
            assert_eq!(m.eval(f, &valuation(2, bits)).unwrap(), table >> bits & 1 == 1);
        }
        handles.push(f);
    }
    handles.sort();
    handles.dedup();
    assert_eq!(handles.len(), 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn apply_matches_truth_table(f in arb_formula(6)) {
        let mut m = BddManager::new(6);
        let b = f.build(&mut m);
        assert_well_formed(&m, b);
        for (bits, expected) in f.truth_table(6).into_iter().enumerate() {
            prop_assert_eq!(m.eval(b, &valuation(6, bits as u32)).unwrap(), expected);
        }
    }

    #[test]
    fn canonicity(f in arb_formula(5), g in arb_formula(5)) {
        let mut m = BddManager::new(5);
        let (bf, bg) = (f.build(&mut m), g.build(&mut m));
        prop_assert_eq!(bf == bg, f.truth_table(5) == g.truth_table(5));
    }

    #[test]
    fn ite_matches_truth_table(f in arb_formula(3), g in arb_formula(3), h in arb_formula(3)) {
        let mut m = BddManager::new(3);
        let (bf, bg, bh) = (f.build(&mut m), g.build(&mut m), h.build(&mut m));
        let r = m.ite(bf, bg, bh).unwrap();
        for bits in 0..8 {
            let expected = if f.eval(bits) { g.eval(bits) } else { h.eval(bits) };
            prop_assert_eq!(m.eval(r, &valuation(3, bits)).unwrap(), expected);
        }
    }

    #[test]
    fn exists_matches_cofactor_disjunction(f in arb_formula(5), mask in 0u32..32) {
        let mut m = BddManager::new(5);
        let b = f.build(&mut m);
        let vars: Vec<VarIndex> = (0..5).filter(|v| mask >> v & 1 == 1).map(VarIndex).collect();
        let r = m.exists(b, &vars).unwrap();
        for v in m.support(r).unwrap() {
            prop_assert!(!vars.contains(&v));
        }
        for bits in 0..32u32 {
            let free = bits & !mask;
            let expected = (0..32u32).filter(|q| q & !mask == 0).any(|q| f.eval(free | q));
            prop_assert_eq!(m.eval(r, &valuation(5, bits)).unwrap(), expected);
        }
    }

    #[test]
    fn and_exists_matches_two_step(f in arb_formula(5), g in arb_formula(5), mask in 0u32..32) {
        let mut m = BddManager::new(5);
        let (bf, bg) = (f.build(&mut m), g.build(&mut m));
        let vars: Vec<VarIndex> = (0..5).filter(|v| mask >> v & 1 == 1).map(VarIndex).collect();
        let conj = m.and(bf, bg).unwrap();
        let expected = m.exists(conj, &vars).unwrap();
        prop_assert_eq!(m.and_exists(bf, bg, &vars).unwrap(), expected);
    }

    #[test]
    fn rename_shift_commutes_with_eval(f in arb_formula(4)) {
        // Variables 0..4 shifted to 4..8 preserves the order.
        let mut m = BddManager::new(8);
        let b = f.build(&mut m);
        let map: Vec<(VarIndex, VarIndex)> = (0..4).map(|v| (VarIndex(v), VarIndex(v + 4))).collect();
        let r = m.rename(b, &map).unwrap();
        for bits in 0..16u32 {
            prop_assert_eq!(m.eval(r, &valuation(8, bits << 4)).unwrap(), f.eval(bits));
        }
    }

    #[test]
    fn sat_one_and_count(f in arb_formula(6)) {
        let mut m = BddManager::new(6);
        let b = f.build(&mut m);
        let all: Vec<VarIndex> = (0..6).map(VarIndex).collect();
        let table = f.truth_table(6);
        let count = table.iter().filter(|&&x| x).count() as u128;
        prop_assert_eq!(m.sat_count(b, &all).unwrap(), count);
        prop_assert_eq!(m.models(b, &all).unwrap().len() as u128, count);
        match m.sat_one(b, &all).unwrap() {
            None => prop_assert_eq!(count, 0),
            Some(v) => prop_assert!(m.eval(b, &v).unwrap()),
        }
    }
}
