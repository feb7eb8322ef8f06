use alloc::vec::Vec;

use hashbrown::HashSet;

use super::{BddError, BddManager, BddRef, VarIndex, FALSE, TRUE};

impl BddManager {
    /// `∃vars. f`, expanding each quantified variable as `f|v=⊥ ∨ f|v=⊤`.
    pub fn exists(&mut self, f: BddRef, vars: &[VarIndex]) -> Result<BddRef, BddError> {
        let f = self.check(f)?;
        if vars.is_empty() {
            return Ok(self.handle(f));
        }
        let set = self.intern_var_set(vars)?;
        let r = self.exists_rec(f, set);
        Ok(self.handle(r))
    }

    /// Relational product `∃vars. (f ∧ g)` without building the conjunction.
    pub fn and_exists(
        &mut self,
        f: BddRef,
        g: BddRef,
        vars: &[VarIndex],
    ) -> Result<BddRef, BddError> {
        let (f, g) = (self.check(f)?, self.check(g)?);
        let set = self.intern_var_set(vars)?;
        let r = self.and_exists_rec(f, g, set);
        Ok(self.handle(r))
    }

    /// Substitutes variables according to `mapping`; unmapped variables stay put.
    ///
    /// Only order-preserving substitutions are supported: after mapping, the
    /// support of `f` must still be strictly increasing.
    pub fn rename(
        &mut self,
        f: BddRef,
        mapping: &[(VarIndex, VarIndex)],
    ) -> Result<BddRef, BddError> {
        let n = self.check(f)?;
        let mut table: Vec<u32> = (0..self.num_vars).collect();
        let mut targets = HashSet::new();
        for &(from, to) in mapping {
            self.check_var(from)?;
            self.check_var(to)?;
            if !targets.insert(to) {
                return Err(BddError::RenameNotInjective { target: to });
            }
            table[from.index()] = to.0;
        }

        let support = self.support(f)?;
        for pair in support.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if table[a.index()] >= table[b.index()] {
                return Err(BddError::RenameOrder { from: b, to: VarIndex(table[b.index()]) });
            }
        }
        if support.iter().all(|v| table[v.index()] == v.0) {
            return Ok(f);
        }

        let id = match self.rename_ids.get(&table) {
            Some(&id) => id,
            None => {
                let id = self.renames.len() as u32;
                self.renames.push(table.clone());
                self.rename_ids.insert(table, id);
                id
            }
        };
        let r = self.rename_rec(n, id);
        Ok(self.handle(r))
    }

    /// Variables `f` depends on, in order.
    pub fn support(&self, f: BddRef) -> Result<Vec<VarIndex>, BddError> {
        let root = self.check(f)?;
        let mut seen = HashSet::new();
        let mut vars = HashSet::new();
        let mut stack = alloc::vec![root];
        while let Some(n) = stack.pop() {
            if n <= TRUE || !seen.insert(n) {
                continue;
            }
            let node = self.node(n);
            vars.insert(node.var);
            stack.push(node.low);
            stack.push(node.high);
        }
        let mut out: Vec<VarIndex> = vars.into_iter().map(VarIndex).collect();
        out.sort_unstable();
        Ok(out)
    }

    fn exists_rec(&mut self, f: u32, set: u32) -> u32 {
        if f <= TRUE {
            return f;
        }
        let node = self.node(f);
        match self.var_sets[set as usize].max {
            Some(max) if node.var <= max => {}
            _ => return f,
        }
        if let Some(&r) = self.caches.exists.get(&(f, set)) {
            return r;
        }
        let low = self.exists_rec(node.low, set);
        let r = if self.var_sets[set as usize].members[node.var as usize] {
            if low == TRUE {
                TRUE
            } else {
                let high = self.exists_rec(node.high, set);
                self.apply_rec(super::BoolOp::Or, low, high)
            }
        } else {
            let high = self.exists_rec(node.high, set);
            self.mk(node.var, low, high)
        };
        self.caches.exists.insert((f, set), r);
        r
    }

    fn and_exists_rec(&mut self, f: u32, g: u32, set: u32) -> u32 {
        if f == FALSE || g == FALSE {
            return FALSE;
        }
        if f == TRUE && g == TRUE {
            return TRUE;
        }
        if f == TRUE || f == g {
            return self.exists_rec(g, set);
        }
        if g == TRUE {
            return self.exists_rec(f, set);
        }
        let (f, g) = if g < f { (g, f) } else { (f, g) };
        let var = self.var_of(f).min(self.var_of(g));
        match self.var_sets[set as usize].max {
            Some(max) if var <= max => {}
            _ => return self.apply_rec(super::BoolOp::And, f, g),
        }
        if let Some(&r) = self.caches.and_exists.get(&(f, g, set)) {
            return r;
        }
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let low = self.and_exists_rec(f0, g0, set);
        let r = if self.var_sets[set as usize].members[var as usize] {
            if low == TRUE {
                TRUE
            } else {
                let high = self.and_exists_rec(f1, g1, set);
                self.apply_rec(super::BoolOp::Or, low, high)
            }
        } else {
            let high = self.and_exists_rec(f1, g1, set);
            self.mk(var, low, high)
        };
        self.caches.and_exists.insert((f, g, set), r);
        r
    }

    fn rename_rec(&mut self, f: u32, map: u32) -> u32 {
        if f <= TRUE {
            return f;
        }
        if let Some(&r) = self.caches.rename.get(&(f, map)) {
            return r;
        }
        let node = self.node(f);
        let low = self.rename_rec(node.low, map);
        let high = self.rename_rec(node.high, map);
        let var = self.renames[map as usize][node.var as usize];
        let r = self.mk(var, low, high);
        self.caches.rename.insert((f, map), r);
        r
    }
}
