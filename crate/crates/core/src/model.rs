//! Ground planning problems and their explicit one-step semantics.
//!
//! A state is a set of fluents: no fluent can occur twice, and two states are
//! equal when they contain the same fluents regardless of how they were
//! built. Actions have a conjunctive precondition over positive and negative
//! literals and add/delete effects. An applicable action maps `s` to
//! `(s \ del) ∪ add`, the only state `t` with `t ⊎ del = s ⊎ add` as multisets
//! once duplicates are ruled out.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A sort and its constants, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sort {
    pub name: String,
    pub constants: Vec<String>,
}

impl Sort {
    pub fn new<S: Into<String>>(name: S, constants: impl IntoIterator<Item = S>) -> Self {
        Sort { name: name.into(), constants: constants.into_iter().map(Into::into).collect() }
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn position(&self, constant: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == constant)
    }
}

/// Declared signature of a fluent symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FluentSymbol {
    pub name: String,
    pub arg_sorts: Vec<String>,
}

/// A sorted constant used as a fluent argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arg {
    pub sort: String,
    pub constant: String,
}

/// A ground fluent such as `at(B1,A)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fluent {
    pub symbol: String,
    pub args: Vec<Arg>,
}

impl Fluent {
    pub fn new(symbol: impl Into<String>, args: impl IntoIterator<Item = (String, String)>) -> Self {
        Fluent {
            symbol: symbol.into(),
            args: args.into_iter().map(|(sort, constant)| Arg { sort, constant }).collect(),
        }
    }
}

impl fmt::Display for Fluent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&a.constant)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Index of a fluent in [`Problem::fluent_universe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FluentId(pub u32);

impl FluentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A duplicate-free set of fluents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundState(BTreeSet<FluentId>);

impl GroundState {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, f: FluentId) -> bool {
        self.0.contains(&f)
    }

    pub fn insert(&mut self, f: FluentId) -> bool {
        self.0.insert(f)
    }

    pub fn remove(&mut self, f: FluentId) -> bool {
        self.0.remove(&f)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fluents in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &GroundState) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &GroundState) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl FromIterator<FluentId> for GroundState {
    fn from_iter<I: IntoIterator<Item = FluentId>>(iter: I) -> Self {
        GroundState(iter.into_iter().collect())
    }
}

/// One ground instance of a state update axiom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<String>,
    pub pre_pos: GroundState,
    pub pre_neg: GroundState,
    /// Fluents that start to hold.
    pub add: GroundState,
    /// Fluents that stop holding.
    pub del: GroundState,
}

impl GroundAction {
    /// The always-applicable identity action.
    pub fn noop() -> Self {
        GroundAction {
            name: String::from("noop"),
            args: Vec::new(),
            pre_pos: GroundState::empty(),
            pre_neg: GroundState::empty(),
            add: GroundState::empty(),
            del: GroundState::empty(),
        }
    }

    pub fn is_noop(&self) -> bool {
        self.name == "noop"
            && self.args.is_empty()
            && self.pre_pos.is_empty()
            && self.pre_neg.is_empty()
            && self.add.is_empty()
            && self.del.is_empty()
    }

    /// `name(arg1,arg2,…)`, or the bare name for nullary actions.
    pub fn label(&self) -> String {
        if self.args.is_empty() {
            self.name.clone()
        } else {
            format!("{}({})", self.name, self.args.join(","))
        }
    }

    pub fn is_applicable(&self, s: &GroundState) -> bool {
        self.pre_pos.is_subset(s) && self.pre_neg.is_disjoint(s)
    }

    /// Applies the action to `s`, or returns `None` if it is not applicable.
    pub fn apply(&self, s: &GroundState) -> Option<GroundState> {
        apply_action_explicit(s, self)
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Boolean combination of `holds(f)` atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GoalFormula {
    Holds(FluentId),
    Not(Box<GoalFormula>),
    And(Vec<GoalFormula>),
    Or(Vec<GoalFormula>),
}

impl GoalFormula {
    /// The empty conjunction.
    pub fn top() -> Self {
        GoalFormula::And(Vec::new())
    }

    pub fn negate(g: GoalFormula) -> Self {
        GoalFormula::Not(Box::new(g))
    }

    pub fn atoms(&self) -> Vec<FluentId> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<FluentId>) {
        match self {
            GoalFormula::Holds(f) => out.push(*f),
            GoalFormula::Not(g) => g.collect_atoms(out),
            GoalFormula::And(gs) | GoalFormula::Or(gs) => {
                gs.iter().for_each(|g| g.collect_atoms(out))
            }
        }
    }
}

/// A ground planning problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub sorts: Vec<Sort>,
    pub symbols: Vec<FluentSymbol>,
    pub fluent_universe: Vec<Fluent>,
    /// Ground actions, not including `noop`.
    pub actions: Vec<GroundAction>,
    pub initial: GroundState,
    pub goal: GoalFormula,
}

impl Problem {
    pub fn num_fluents(&self) -> usize {
        self.fluent_universe.len()
    }

    pub fn fluent(&self, id: FluentId) -> &Fluent {
        &self.fluent_universe[id.index()]
    }

    pub fn fluent_ids(&self) -> impl Iterator<Item = FluentId> {
        (0..self.fluent_universe.len() as u32).map(FluentId)
    }

    pub fn find_fluent(&self, f: &Fluent) -> Option<FluentId> {
        self.fluent_universe.iter().position(|g| g == f).map(|i| FluentId(i as u32))
    }

    /// Looks a fluent up by its printed form, e.g. `at(B1,A)`.
    pub fn find_fluent_by_label(&self, label: &str) -> Option<FluentId> {
        self.fluent_universe
            .iter()
            .position(|g| format!("{g}") == label)
            .map(|i| FluentId(i as u32))
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.iter().find(|s| s.name == name)
    }

    pub fn find_action(&self, label: &str) -> Option<&GroundAction> {
        self.actions.iter().find(|a| a.label() == label)
    }

    /// Renders a state as `{f1, f2, …}` in universe order.
    pub fn state_label(&self, s: &GroundState) -> String {
        let parts: Vec<String> = s.iter().map(|f| format!("{}", self.fluent(f))).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn eval_goal(&self, s: &GroundState) -> bool {
        eval_goal(&self.goal, s)
    }

    /// Checks every structural invariant. All violations are reported.
    pub fn validate(&self) -> Result<(), Vec<Diagnostic>> {
        validate_problem(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagnosticKind {
    #[error("empty sort")]
    EmptySort,
    #[error("duplicate sort")]
    DuplicateSort,
    #[error("duplicate constant `{0}`")]
    DuplicateConstant(String),
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown constant `{constant}` of sort `{sort}`")]
    UnknownConstant { sort: String, constant: String },
    #[error("undeclared fluent symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arguments do not match the declaration of `{0}`")]
    SignatureMismatch(String),
    #[error("duplicate fluent")]
    DuplicateFluent,
    #[error("unknown fluent #{0}")]
    UnknownFluent(u32),
    #[error("overlapping effects on {0}")]
    OverlappingEffects(String),
    #[error("deleted fluent {0} is not a positive precondition")]
    DeleteNotRequired(String),
    #[error("added fluent {0} is not a negative precondition")]
    AddNotForbidden(String),
}

/// One validation failure and where it was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.kind)
    }
}

pub fn validate_problem(p: &Problem) -> Result<(), Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut push = |location: String, kind| out.push(Diagnostic { location, kind });

    for (i, sort) in p.sorts.iter().enumerate() {
        let loc = format!("sort {}", sort.name);
        if sort.is_empty() {
            push(loc.clone(), DiagnosticKind::EmptySort);
        }
        if p.sorts[..i].iter().any(|s| s.name == sort.name) {
            push(loc.clone(), DiagnosticKind::DuplicateSort);
        }
        for (j, c) in sort.constants.iter().enumerate() {
            if sort.constants[..j].contains(c) {
                push(loc.clone(), DiagnosticKind::DuplicateConstant(c.clone()));
            }
        }
    }

    for sym in &p.symbols {
        for s in &sym.arg_sorts {
            if p.sort(s).is_none() {
                push(format!("fluent symbol {}", sym.name), DiagnosticKind::UnknownSort(s.clone()));
            }
        }
    }

    for (i, f) in p.fluent_universe.iter().enumerate() {
        let loc = format!("fluent {f}");
        match p.symbols.iter().find(|s| s.name == f.symbol) {
            None => push(loc.clone(), DiagnosticKind::UnknownSymbol(f.symbol.clone())),
            Some(sym) => {
                let sorts_match = sym.arg_sorts.len() == f.args.len()
                    && sym.arg_sorts.iter().zip(&f.args).all(|(s, a)| *s == a.sort);
                if !sorts_match {
                    push(loc.clone(), DiagnosticKind::SignatureMismatch(f.symbol.clone()));
                }
            }
        }
        for a in &f.args {
            let known = p.sort(&a.sort).map(|s| s.position(&a.constant).is_some());
            if known == Some(false) {
                push(
                    loc.clone(),
                    DiagnosticKind::UnknownConstant {
                        sort: a.sort.clone(),
                        constant: a.constant.clone(),
                    },
                );
            }
        }
        if p.fluent_universe[..i].contains(f) {
            push(loc, DiagnosticKind::DuplicateFluent);
        }
    }

    let n = p.fluent_universe.len() as u32;
    let label = |id: FluentId| match p.fluent_universe.get(id.index()) {
        Some(f) => format!("{f}"),
        None => format!("#{}", id.0),
    };
    let check_ids = |loc: &str, s: &GroundState, push: &mut dyn FnMut(String, DiagnosticKind)| {
        for id in s.iter().filter(|id| id.0 >= n) {
            push(String::from(loc), DiagnosticKind::UnknownFluent(id.0));
        }
    };

    check_ids("initial state", &p.initial, &mut push);
    for id in p.goal.atoms().into_iter().filter(|id| id.0 >= n) {
        push(String::from("goal"), DiagnosticKind::UnknownFluent(id.0));
    }
    for a in &p.actions {
        let loc = format!("action {}", a.label());
        for s in [&a.pre_pos, &a.pre_neg, &a.add, &a.del] {
            check_ids(&loc, s, &mut push);
        }
        for f in a.add.iter().filter(|f| a.del.contains(*f)) {
            push(loc.clone(), DiagnosticKind::OverlappingEffects(label(f)));
        }
        for f in a.del.iter().filter(|f| !a.pre_pos.contains(*f)) {
            push(loc.clone(), DiagnosticKind::DeleteNotRequired(label(f)));
        }
        for f in a.add.iter().filter(|f| !a.pre_neg.contains(*f)) {
            push(loc.clone(), DiagnosticKind::AddNotForbidden(label(f)));
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// `(s \ del) ∪ add` if the precondition holds in `s`.
pub fn apply_action_explicit(s: &GroundState, a: &GroundAction) -> Option<GroundState> {
    if !a.is_applicable(s) {
        return None;
    }
    let mut next = s.clone();
    for f in a.del.iter() {
        next.remove(f);
    }
    for f in a.add.iter() {
        next.insert(f);
    }
    Some(next)
}

pub fn eval_goal(g: &GoalFormula, s: &GroundState) -> bool {
    match g {
        GoalFormula::Holds(f) => s.contains(*f),
        GoalFormula::Not(g) => !eval_goal(g, s),
        GoalFormula::And(gs) => gs.iter().all(|g| eval_goal(g, s)),
        GoalFormula::Or(gs) => gs.iter().any(|g| eval_goal(g, s)),
    }
}
