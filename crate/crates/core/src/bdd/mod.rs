//! Reduced ordered binary decision diagrams.
//!
//! A [`BddManager`] owns every node it creates. Nodes are hash-consed through a
//! unique table keyed by `(var, low, high)`, so two [`BddRef`]s from the same
//! manager are equal exactly when they denote the same boolean function.
//!
//! The variable order is fixed when the manager is created: a [`VarIndex`] *is*
//! its position in the order, and along every root-to-terminal path the
//! indices strictly increase. There are no complement edges and no garbage
//! collection; operation caches grow until [`BddManager::clear_caches`] is
//! called.

mod apply;
mod query;
mod quant;

use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU32, Ordering};

use hashbrown::HashMap;

pub use apply::BoolOp;
pub use query::Valuation;

/// Position of a variable in the manager's (fixed) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex(pub u32);

impl VarIndex {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Handle to a node inside one particular [`BddManager`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BddRef {
    manager: u32,
    node: u32,
}

impl BddRef {
    pub fn is_false(self) -> bool {
        self.node == FALSE
    }

    pub fn is_true(self) -> bool {
        self.node == TRUE
    }

    pub fn is_terminal(self) -> bool {
        self.node <= TRUE
    }
}

impl fmt::Debug for BddRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            FALSE => write!(f, "BddRef(⊥)"),
            TRUE => write!(f, "BddRef(⊤)"),
            n => write!(f, "BddRef(m{}#{})", self.manager, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BddError {
    #[error("variable {var} out of range (manager has {num_vars} variables)")]
    InvalidVariable { var: VarIndex, num_vars: u32 },
    #[error("BDD handle belongs to a different manager")]
    ManagerMismatch,
    #[error("rename maps two variables onto {target}")]
    RenameNotInjective { target: VarIndex },
    #[error("rename does not preserve the variable order ({from} -> {to})")]
    RenameOrder { from: VarIndex, to: VarIndex },
    #[error("valuation does not assign {0}")]
    IncompleteValuation(VarIndex),
    #[error("function depends on {0}, which is outside the requested support")]
    OutsideSupport(VarIndex),
    #[error("model count does not fit in 128 bits")]
    CountOverflow,
}

pub(crate) const FALSE: u32 = 0;
pub(crate) const TRUE: u32 = 1;
const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    pub(crate) var: u32,
    pub(crate) low: u32,
    pub(crate) high: u32,
}

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Default)]
struct Caches {
    apply: HashMap<(u8, u32, u32), u32>,
    not: HashMap<u32, u32>,
    ite: HashMap<(u32, u32, u32), u32>,
    exists: HashMap<(u32, u32), u32>,
    and_exists: HashMap<(u32, u32, u32), u32>,
    rename: HashMap<(u32, u32), u32>,
}

/// Interned variable set used as a quantification or rename key.
struct VarSet {
    members: Vec<bool>,
    max: Option<u32>,
}

pub struct BddManager {
    id: u32,
    num_vars: u32,
    nodes: Vec<Node>,
    unique: HashMap<(u32, u32, u32), u32>,
    caches: Caches,
    var_sets: Vec<VarSet>,
    var_set_ids: HashMap<Vec<u32>, u32>,
    renames: Vec<Vec<u32>>,
    rename_ids: HashMap<Vec<u32>, u32>,
}

impl fmt::Debug for BddManager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BddManager")
            .field("id", &self.id)
            .field("num_vars", &self.num_vars)
            .field("nodes", &self.live_nodes())
            .finish()
    }
}

impl BddManager {
    /// Creates a manager over variables `0..num_vars`.
    pub fn new(num_vars: u32) -> Self {
        let terminal = |v| Node { var: TERMINAL_VAR, low: v, high: v };
        BddManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            num_vars,
            nodes: alloc::vec![terminal(FALSE), terminal(TRUE)],
            unique: HashMap::new(),
            caches: Caches::default(),
            var_sets: Vec::new(),
            var_set_ids: HashMap::new(),
            renames: Vec::new(),
            rename_ids: HashMap::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Number of internal nodes ever created. Without garbage collection this
    /// is also the peak.
    pub fn live_nodes(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn constant(&self, value: bool) -> BddRef {
        self.handle(if value { TRUE } else { FALSE })
    }

    pub fn bdd_true(&self) -> BddRef {
        self.handle(TRUE)
    }

    pub fn bdd_false(&self) -> BddRef {
        self.handle(FALSE)
    }

    /// The literal `v`: ⊥ on the low branch, ⊤ on the high branch.
    pub fn mk_var(&mut self, v: VarIndex) -> Result<BddRef, BddError> {
        self.literal(v, true)
    }

    /// `v` if `positive`, otherwise `¬v`.
    pub fn literal(&mut self, v: VarIndex, positive: bool) -> Result<BddRef, BddError> {
        self.check_var(v)?;
        let n = if positive {
            self.mk(v.0, FALSE, TRUE)
        } else {
            self.mk(v.0, TRUE, FALSE)
        };
        Ok(self.handle(n))
    }

    /// Drops every memoised operation result. Nodes are kept.
    pub fn clear_caches(&mut self) {
        self.caches = Caches::default();
    }

    /// Top variable of `f`, or `None` for a terminal.
    pub fn top_var(&self, f: BddRef) -> Result<Option<VarIndex>, BddError> {
        let n = self.check(f)?;
        Ok((n > TRUE).then(|| VarIndex(self.nodes[n as usize].var)))
    }

    /// The `(low, high)` children of an internal node.
    pub fn children(&self, f: BddRef) -> Result<Option<(BddRef, BddRef)>, BddError> {
        let n = self.check(f)?;
        if n <= TRUE {
            return Ok(None);
        }
        let node = self.nodes[n as usize];
        Ok(Some((self.handle(node.low), self.handle(node.high))))
    }

    fn check_var(&self, v: VarIndex) -> Result<(), BddError> {
        if v.0 < self.num_vars {
            Ok(())
        } else {
            Err(BddError::InvalidVariable { var: v, num_vars: self.num_vars })
        }
    }

    pub(crate) fn check(&self, f: BddRef) -> Result<u32, BddError> {
        if f.manager == self.id {
            Ok(f.node)
        } else {
            Err(BddError::ManagerMismatch)
        }
    }

    pub(crate) fn handle(&self, node: u32) -> BddRef {
        BddRef { manager: self.id, node }
    }

    #[inline]
    pub(crate) fn node(&self, n: u32) -> Node {
        self.nodes[n as usize]
    }

    #[inline]
    pub(crate) fn var_of(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    /// Finds or creates the node `(var, low, high)`, applying the reduction
    /// rule `low == high`.
    pub(crate) fn mk(&mut self, var: u32, low: u32, high: u32) -> u32 {
        if low == high {
            return low;
        }
        debug_assert!(var < self.var_of(low) && var < self.var_of(high));
        if let Some(&n) = self.unique.get(&(var, low, high)) {
            return n;
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(Node { var, low, high });
        self.unique.insert((var, low, high), n);
        n
    }

    /// Cofactors of `n` with respect to `var`, which must not be below `n`'s top.
    #[inline]
    pub(crate) fn cofactors(&self, n: u32, var: u32) -> (u32, u32) {
        let node = self.node(n);
        if node.var == var {
            (node.low, node.high)
        } else {
            (n, n)
        }
    }

    pub(crate) fn intern_var_set(&mut self, vars: &[VarIndex]) -> Result<u32, BddError> {
        let mut key: Vec<u32> = vars.iter().map(|v| v.0).collect();
        key.sort_unstable();
        key.dedup();
        if let Some(&id) = self.var_set_ids.get(&key) {
            return Ok(id);
        }
        let mut members = alloc::vec![false; self.num_vars as usize];
        for &v in &key {
            self.check_var(VarIndex(v))?;
            members[v as usize] = true;
        }
        let id = self.var_sets.len() as u32;
        self.var_sets.push(VarSet { members, max: key.last().copied() });
        self.var_set_ids.insert(key, id);
        Ok(id)
    }
}

#[cfg(test)]
mod tests;
