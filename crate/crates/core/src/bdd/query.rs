use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use hashbrown::{HashMap, HashSet};

use super::{BddError, BddManager, BddRef, VarIndex, FALSE, TRUE};

/// A (partial) assignment of truth values to variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: BTreeMap<VarIndex, bool>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: VarIndex, value: bool) {
        self.values.insert(v, value);
    }

    pub fn get(&self, v: VarIndex) -> Option<bool> {
        self.values.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarIndex, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }
}

impl FromIterator<(VarIndex, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (VarIndex, bool)>>(iter: I) -> Self {
        Valuation { values: iter.into_iter().collect() }
    }
}

impl BddManager {
    /// Follows the path selected by `v` from the root to a terminal.
    pub fn eval(&self, f: BddRef, v: &Valuation) -> Result<bool, BddError> {
        let mut n = self.check(f)?;
        while n > TRUE {
            let node = self.node(n);
            let var = VarIndex(node.var);
            n = match v.get(var) {
                Some(true) => node.high,
                Some(false) => node.low,
                None => return Err(BddError::IncompleteValuation(var)),
            };
        }
        Ok(n == TRUE)
    }

    /// One satisfying valuation over `support`, or `None` when `f` is ⊥.
    ///
    /// The walk prefers the low branch whenever it is satisfiable, and
    /// support variables not on the chosen path are set to ⊥, so the answer is
    /// the least model in the order-lexicographic sense. Path variables
    /// outside `support` are not reported.
    pub fn sat_one(&self, f: BddRef, support: &[VarIndex]) -> Result<Option<Valuation>, BddError> {
        let mut n = self.check(f)?;
        if n == FALSE {
            return Ok(None);
        }
        let wanted: HashSet<VarIndex> = support.iter().copied().collect();
        let mut out: Valuation = support.iter().map(|&v| (v, false)).collect();
        while n > TRUE {
            let node = self.node(n);
            let var = VarIndex(node.var);
            let take_high = node.low == FALSE;
            if wanted.contains(&var) {
                out.set(var, take_high);
            }
            n = if take_high { node.high } else { node.low };
        }
        Ok(Some(out))
    }

    /// Every satisfying valuation over `support`, which must cover the
    /// support of `f`. Intended for small sets.
    pub fn models(&self, f: BddRef, support: &[VarIndex]) -> Result<Vec<Valuation>, BddError> {
        let root = self.check(f)?;
        let mut vars: Vec<VarIndex> = support.to_vec();
        vars.sort_unstable();
        vars.dedup();
        for v in self.support(f)? {
            if vars.binary_search(&v).is_err() {
                return Err(BddError::OutsideSupport(v));
            }
        }
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(vars.len());
        self.models_rec(root, &vars, 0, &mut current, &mut out);
        Ok(out)
    }

    fn models_rec(
        &self,
        n: u32,
        vars: &[VarIndex],
        pos: usize,
        current: &mut Vec<bool>,
        out: &mut Vec<Valuation>,
    ) {
        if n == FALSE {
            return;
        }
        if pos == vars.len() {
            debug_assert_eq!(n, TRUE);
            out.push(vars.iter().copied().zip(current.iter().copied()).collect());
            return;
        }
        let (low, high) = if n > TRUE && self.var_of(n) == vars[pos].0 {
            let node = self.node(n);
            (node.low, node.high)
        } else {
            (n, n)
        };
        for (value, child) in [(false, low), (true, high)] {
            current.push(value);
            self.models_rec(child, vars, pos + 1, current, out);
            current.pop();
        }
    }

    /// Number of internal nodes reachable from `f`.
    pub fn node_count(&self, f: BddRef) -> Result<usize, BddError> {
        self.node_count_shared(&[f])
    }

    /// Number of distinct internal nodes reachable from any of `fs`.
    pub fn node_count_shared(&self, fs: &[BddRef]) -> Result<usize, BddError> {
        let mut stack = Vec::with_capacity(fs.len());
        for &f in fs {
            stack.push(self.check(f)?);
        }
        let mut seen = HashSet::new();
        while let Some(n) = stack.pop() {
            if n <= TRUE || !seen.insert(n) {
                continue;
            }
            let node = self.node(n);
            stack.push(node.low);
            stack.push(node.high);
        }
        Ok(seen.len())
    }

    /// Number of satisfying assignments over `vars`, which must include the
    /// support of `f`.
    pub fn sat_count(&self, f: BddRef, vars: &[VarIndex]) -> Result<u128, BddError> {
        let root = self.check(f)?;
        let mut vars: Vec<u32> = vars.iter().map(|v| v.0).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() > 127 {
            return Err(BddError::CountOverflow);
        }
        let mut memo = HashMap::new();
        let (count, pos) = self.sat_count_rec(root, &vars, &mut memo)?;
        count.checked_shl(pos as u32).ok_or(BddError::CountOverflow)
    }

    /// Returns (models over `vars[pos..]`, pos) for node `n`.
    fn sat_count_rec(
        &self,
        n: u32,
        vars: &[u32],
        memo: &mut HashMap<u32, u128>,
    ) -> Result<(u128, usize), BddError> {
        let pos_of = |n: u32| -> Result<usize, BddError> {
            if n <= TRUE {
                return Ok(vars.len());
            }
            let var = self.var_of(n);
            vars.binary_search(&var).map_err(|_| BddError::OutsideSupport(VarIndex(var)))
        };
        let pos = pos_of(n)?;
        match n {
            FALSE => return Ok((0, pos)),
            TRUE => return Ok((1, pos)),
            _ => {}
        }
        if let Some(&c) = memo.get(&n) {
            return Ok((c, pos));
        }
        let node = self.node(n);
        let mut total: u128 = 0;
        for child in [node.low, node.high] {
            let (c, child_pos) = self.sat_count_rec(child, vars, memo)?;
            let gap = (child_pos - pos - 1) as u32;
            let scaled = if c == 0 { 0 } else { c.checked_shl(gap).ok_or(BddError::CountOverflow)? };
            total = total.checked_add(scaled).ok_or(BddError::CountOverflow)?;
        }
        memo.insert(n, total);
        Ok((total, pos))
    }

    /// Renders `f` as a Graphviz digraph. Solid edges are high branches,
    /// dashed edges low branches.
    pub fn to_dot<F>(&self, f: BddRef, mut var_name: F) -> Result<String, BddError>
    where
        F: FnMut(VarIndex) -> String,
    {
        let root = self.check(f)?;
        let mut out = String::from("digraph bdd {\n");
        let _ = writeln!(out, "  n0 [label=\"⊥\", shape=box];");
        let _ = writeln!(out, "  n1 [label=\"⊤\", shape=box];");
        let mut seen = HashSet::new();
        let mut stack = alloc::vec![root];
        let mut order = Vec::new();
        while let Some(n) = stack.pop() {
            if n <= TRUE || !seen.insert(n) {
                continue;
            }
            order.push(n);
            let node = self.node(n);
            stack.push(node.high);
            stack.push(node.low);
        }
        for n in order {
            let node = self.node(n);
            let label = var_name(VarIndex(node.var)).replace('"', "\\\"");
            let _ = writeln!(out, "  n{n} [label=\"{label}\"];");
            let _ = writeln!(out, "  n{n} -> n{} [style=dashed];", node.low);
            let _ = writeln!(out, "  n{n} -> n{};", node.high);
        }
        let _ = writeln!(out, "  root [shape=point];\n  root -> n{root};");
        out.push_str("}\n");
        Ok(out)
    }
}
