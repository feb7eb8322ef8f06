use super::{BddError, BddManager, BddRef, FALSE, TRUE};

/// Binary connectives supported by [`BddManager::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
    Xor,
    Iff,
    /// `f ∧ ¬g`
    Diff,
}

impl BoolOp {
    fn tag(self) -> u8 {
        self as u8
    }

    fn commutative(self) -> bool {
        !matches!(self, BoolOp::Diff)
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Xor => a != b,
            BoolOp::Iff => a == b,
            BoolOp::Diff => a && !b,
        }
    }
}

impl BddManager {
    pub fn apply(&mut self, op: BoolOp, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        let (f, g) = (self.check(f)?, self.check(g)?);
        let r = self.apply_rec(op, f, g);
        Ok(self.handle(r))
    }

    pub fn and(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::And, f, g)
    }

    pub fn or(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Or, f, g)
    }

    pub fn xor(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Xor, f, g)
    }

    pub fn iff(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Iff, f, g)
    }

    pub fn diff(&mut self, f: BddRef, g: BddRef) -> Result<BddRef, BddError> {
        self.apply(BoolOp::Diff, f, g)
    }

    /// `f → g` holds everywhere.
    pub fn implies(&mut self, f: BddRef, g: BddRef) -> Result<bool, BddError> {
        Ok(self.diff(f, g)?.is_false())
    }

    pub fn not(&mut self, f: BddRef) -> Result<BddRef, BddError> {
        let f = self.check(f)?;
        let r = self.not_rec(f);
        Ok(self.handle(r))
    }

    /// `(f ∧ g) ∨ (¬f ∧ h)`
    pub fn ite(&mut self, f: BddRef, g: BddRef, h: BddRef) -> Result<BddRef, BddError> {
        let (f, g, h) = (self.check(f)?, self.check(g)?, self.check(h)?);
        let r = self.ite_rec(f, g, h);
        Ok(self.handle(r))
    }

    pub fn and_all<I>(&mut self, fs: I) -> Result<BddRef, BddError>
    where
        I: IntoIterator<Item = BddRef>,
    {
        fs.into_iter().try_fold(self.bdd_true(), |acc, f| self.and(acc, f))
    }

    pub fn or_all<I>(&mut self, fs: I) -> Result<BddRef, BddError>
    where
        I: IntoIterator<Item = BddRef>,
    {
        fs.into_iter().try_fold(self.bdd_false(), |acc, f| self.or(acc, f))
    }

    pub(crate) fn apply_rec(&mut self, op: BoolOp, f: u32, g: u32) -> u32 {
        if let Some(r) = self.apply_terminal(op, f, g) {
            return r;
        }
        let (f, g) = if op.commutative() && g < f { (g, f) } else { (f, g) };
        let key = (op.tag(), f, g);
        if let Some(&r) = self.caches.apply.get(&key) {
            return r;
        }
        let var = self.var_of(f).min(self.var_of(g));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let low = self.apply_rec(op, f0, g0);
        let high = self.apply_rec(op, f1, g1);
        let r = self.mk(var, low, high);
        self.caches.apply.insert(key, r);
        r
    }

    fn apply_terminal(&mut self, op: BoolOp, f: u32, g: u32) -> Option<u32> {
        let r = match op {
            BoolOp::And => match (f, g) {
                (FALSE, _) | (_, FALSE) => FALSE,
                (TRUE, x) | (x, TRUE) => x,
                _ if f == g => f,
                _ => return None,
            },
            BoolOp::Or => match (f, g) {
                (TRUE, _) | (_, TRUE) => TRUE,
                (FALSE, x) | (x, FALSE) => x,
                _ if f == g => f,
                _ => return None,
            },
            BoolOp::Xor => match (f, g) {
                _ if f == g => FALSE,
                (FALSE, x) | (x, FALSE) => x,
                (TRUE, x) | (x, TRUE) => self.not_rec(x),
                _ => return None,
            },
            BoolOp::Iff => match (f, g) {
                _ if f == g => TRUE,
                (TRUE, x) | (x, TRUE) => x,
                (FALSE, x) | (x, FALSE) => self.not_rec(x),
                _ => return None,
            },
            BoolOp::Diff => match (f, g) {
                (FALSE, _) | (_, TRUE) => FALSE,
                (x, FALSE) => x,
                _ if f == g => FALSE,
                (TRUE, x) => self.not_rec(x),
                _ => return None,
            },
        };
        Some(r)
    }

    pub(crate) fn not_rec(&mut self, f: u32) -> u32 {
        match f {
            FALSE => return TRUE,
            TRUE => return FALSE,
            _ => {}
        }
        if let Some(&r) = self.caches.not.get(&f) {
            return r;
        }
        let node = self.node(f);
        let low = self.not_rec(node.low);
        let high = self.not_rec(node.high);
        let r = self.mk(node.var, low, high);
        self.caches.not.insert(f, r);
        r
    }

    fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> u32 {
        match (f, g, h) {
            (TRUE, _, _) => return g,
            (FALSE, _, _) => return h,
            _ if g == h => return g,
            (_, TRUE, FALSE) => return f,
            (_, FALSE, TRUE) => return self.not_rec(f),
            _ => {}
        }
        let key = (f, g, h);
        if let Some(&r) = self.caches.ite.get(&key) {
            return r;
        }
        let var = self.var_of(f).min(self.var_of(g)).min(self.var_of(h));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let (h0, h1) = self.cofactors(h, var);
        let low = self.ite_rec(f0, g0, h0);
        let high = self.ite_rec(f1, g1, h1);
        let r = self.mk(var, low, high);
        self.caches.ite.insert(key, r);
        r
    }
}
