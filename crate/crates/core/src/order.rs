//! Static variable orders for the fluent universe.
//!
//! The *lexical* order groups fluents by symbol name. The *sort* order groups
//! fluents that share constants: fluents are keyed first by their argument of
//! the largest sort, then by the argument of the next largest sort, and so on,
//! with the symbol name as the final discriminator. For Gripper this places
//! `at(B1,A)`, `at(B1,B)`, `carry(B1,G1)`, `carry(B1,G2)` next to each other.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::encode::VarMap;
use crate::model::{Fluent, FluentId, Problem, Sort};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderStrategy {
    Lexical,
    SortOrdered,
    Explicit,
}

/// A permutation of the fluent universe; position `i` is the `i`-th fluent
/// in the BDD variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableOrder {
    pub strategy: OrderStrategy,
    pub fluents: Vec<FluentId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("fluent #{0} is not in the universe")]
    UnknownFluent(u32),
    #[error("fluent #{0} appears more than once")]
    Duplicate(u32),
    #[error("order lists {got} fluents, the universe has {expected}")]
    WrongLength { expected: usize, got: usize },
}

impl VariableOrder {
    pub fn len(&self) -> usize {
        self.fluents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fluents.is_empty()
    }

    /// Checks that `fluents` is a permutation of `0..universe_size`.
    pub fn explicit(fluents: Vec<FluentId>, universe_size: usize) -> Result<Self, OrderError> {
        let mut seen = alloc::vec![false; universe_size];
        for f in &fluents {
            let slot = seen.get_mut(f.index()).ok_or(OrderError::UnknownFluent(f.0))?;
            if core::mem::replace(slot, true) {
                return Err(OrderError::Duplicate(f.0));
            }
        }
        if fluents.len() != universe_size {
            return Err(OrderError::WrongLength { expected: universe_size, got: fluents.len() });
        }
        Ok(VariableOrder { strategy: OrderStrategy::Explicit, fluents })
    }

    /// Fluents in universe order.
    pub fn identity(universe_size: usize) -> Self {
        VariableOrder {
            strategy: OrderStrategy::Explicit,
            fluents: (0..universe_size as u32).map(FluentId).collect(),
        }
    }
}

fn lexical_cmp(a: &Fluent, b: &Fluent) -> Ordering {
    a.symbol
        .cmp(&b.symbol)
        .then_with(|| a.args.iter().map(|x| &x.constant).cmp(b.args.iter().map(|x| &x.constant)))
}

/// Sorts by symbol name, then argument constant names left to right.
pub fn lexical_order(universe: &[Fluent]) -> VariableOrder {
    let mut ids: Vec<FluentId> = (0..universe.len() as u32).map(FluentId).collect();
    ids.sort_by(|a, b| lexical_cmp(&universe[a.index()], &universe[b.index()]));
    VariableOrder { strategy: OrderStrategy::Lexical, fluents: ids }
}

/// Groups fluents by shared constants, keyed by sorts from largest to smallest.
///
/// Sorts of equal size are ranked by declaration order. A fluent without an
/// argument of the sort being keyed on goes after every fluent that has one.
/// Several arguments of the same sort are compared left to right.
pub fn sort_order(universe: &[Fluent], sorts: &[Sort]) -> VariableOrder {
    let mut ranked: Vec<&Sort> = sorts.iter().collect();
    ranked.sort_by(|a, b| b.len().cmp(&a.len()));

    let key = |f: &Fluent| -> Vec<Vec<usize>> {
        ranked
            .iter()
            .map(|sort| {
                f.args
                    .iter()
                    .filter(|a| a.sort == sort.name)
                    .map(|a| sort.position(&a.constant).unwrap_or(usize::MAX))
                    .collect()
            })
            .collect()
    };
    let keys: Vec<Vec<Vec<usize>>> = universe.iter().map(key).collect();

    let mut ids: Vec<FluentId> = (0..universe.len() as u32).map(FluentId).collect();
    ids.sort_by(|&a, &b| {
        let (ka, kb) = (&keys[a.index()], &keys[b.index()]);
        for (x, y) in ka.iter().zip(kb) {
            let ord = match (x.is_empty(), y.is_empty()) {
                (true, true) => Ordering::Equal,
                (false, true) => Ordering::Less,
                (true, false) => Ordering::Greater,
                (false, false) => x.cmp(y),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        lexical_cmp(&universe[a.index()], &universe[b.index()])
    });
    VariableOrder { strategy: OrderStrategy::SortOrdered, fluents: ids }
}

/// Assigns the `i`-th fluent of `order` the current-state variable `2i` and
/// the next-state variable `2i + 1`.
pub fn interleave(order: &VariableOrder) -> VarMap {
    VarMap::interleaved(order)
}

impl Problem {
    pub fn lexical_order(&self) -> VariableOrder {
        lexical_order(&self.fluent_universe)
    }

    pub fn sort_order(&self) -> VariableOrder {
        sort_order(&self.fluent_universe, &self.sorts)
    }
}
