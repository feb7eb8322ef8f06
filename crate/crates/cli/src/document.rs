//! The `.fcp` domain document format.
//!
//! ```text
//! (problem gripper-1
//!   (sorts (BALL B1) (ROOM A B) (GRIPPER G1 G2))
//!   (fluents (at BALL ROOM) (carry BALL GRIPPER) (free GRIPPER) (atR ROOM))
//!   (action move :params ((r1 ROOM) (r2 ROOM)) :distinct (r1 r2)
//!     :pre ((atR r1)) :neg-pre ((atR r2)) :add ((atR r2)) :del ((atR r1)))
//!   (init (at B1 A) (free G1) (free G2) (atR A))
//!   (goal (and (at B1 B))))
//! ```
//!
//! Without a `(universe …)` section every symbol is instantiated over the
//! product of its argument sorts; a trailing `:distinct` in a symbol
//! declaration drops instances that repeat a constant. Actions with `:params`
//! are grounded the same way, in parameter order with the last parameter
//! varying fastest; `:args (c …)` declares a single ground action instead.
//! Goals are built from fluents with `and`, `or` and `not`.

use std::collections::HashMap;
use std::fmt::Write as _;

use fcplan_core::model::{DiagnosticKind, FluentSymbol};
use fcplan_core::{Diagnostic, Fluent, FluentId, GoalFormula, GroundAction, GroundState, Problem, Sort};

use crate::sexpr::{parse_all, Pos, Sexpr, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {kind}")]
    Resolve { pos: Pos, kind: DiagnosticKind },
    #[error("{pos}: fluent {fluent} is not in the universe")]
    OutsideUniverse { pos: Pos, fluent: String },
    #[error("{}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn join_diagnostics(ds: &[Diagnostic]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

const RESERVED: [&str; 3] = ["and", "or", "not"];

fn syntax<T>(pos: Pos, msg: impl Into<String>) -> Result<T, DomainError> {
    Err(SyntaxError::new(pos, msg).into())
}

fn atom(e: &Sexpr, what: &str) -> Result<String, DomainError> {
    match e {
        Sexpr::Atom(s, _) => Ok(s.clone()),
        Sexpr::List(_, pos) => syntax(*pos, format!("expected {what}, found a list")),
    }
}

fn list<'a>(e: &'a Sexpr, what: &str) -> Result<&'a [Sexpr], DomainError> {
    match e {
        Sexpr::List(items, _) => Ok(items),
        Sexpr::Atom(a, pos) => syntax(*pos, format!("expected {what}, found `{a}`")),
    }
}

struct Signature {
    symbol: FluentSymbol,
    distinct: bool,
}

struct Context {
    sorts: Vec<Sort>,
    symbols: Vec<Signature>,
    universe: Vec<Fluent>,
    index: HashMap<Fluent, FluentId>,
}

/// A parameter binding during grounding: name → (sort, constant).
type Binding<'a> = HashMap<&'a str, (&'a str, &'a str)>;

impl Context {
    fn sort(&self, name: &str, pos: Pos) -> Result<&Sort, DomainError> {
        self.sorts
            .iter()
            .find(|s| s.name == name)
            .ok_or(DomainError::Resolve { pos, kind: DiagnosticKind::UnknownSort(name.into()) })
    }

    fn signature(&self, name: &str, pos: Pos) -> Result<&Signature, DomainError> {
        self.symbols
            .iter()
            .find(|s| s.symbol.name == name)
            .ok_or(DomainError::Resolve { pos, kind: DiagnosticKind::UnknownSymbol(name.into()) })
    }

    /// Resolves `(sym t1 … tk)`; each term is a bound parameter or a
    /// constant of the declared sort.
    fn fluent(&self, e: &Sexpr, binding: &Binding) -> Result<Fluent, DomainError> {
        let items = list(e, "a fluent")?;
        let Some((head, terms)) = items.split_first() else {
            return syntax(e.pos(), "empty fluent");
        };
        let name = atom(head, "a fluent symbol")?;
        let sig = self.signature(&name, head.pos())?;
        if sig.symbol.arg_sorts.len() != terms.len() {
            return Err(DomainError::Resolve {
                pos: e.pos(),
                kind: DiagnosticKind::SignatureMismatch(name),
            });
        }
        let mut args = Vec::with_capacity(terms.len());
        for (sort, t) in sig.symbol.arg_sorts.iter().zip(terms) {
            let term = atom(t, "a constant or parameter")?;
            let constant = match binding.get(term.as_str()) {
                Some(&(param_sort, c)) if param_sort == sort => c.to_string(),
                Some(_) => {
                    return Err(DomainError::Resolve {
                        pos: t.pos(),
                        kind: DiagnosticKind::SignatureMismatch(name),
                    })
                }
                None => {
                    if self.sort(sort, t.pos())?.position(&term).is_none() {
                        return Err(DomainError::Resolve {
                            pos: t.pos(),
                            kind: DiagnosticKind::UnknownConstant { sort: sort.clone(), constant: term },
                        });
                    }
                    term
                }
            };
            args.push((sort.clone(), constant));
        }
        Ok(Fluent::new(name, args))
    }

    fn fluent_id(&self, e: &Sexpr, binding: &Binding) -> Result<FluentId, DomainError> {
        let f = self.fluent(e, binding)?;
        self.index
            .get(&f)
            .copied()
            .ok_or_else(|| DomainError::OutsideUniverse { pos: e.pos(), fluent: f.to_string() })
    }

    fn fluent_set(&self, e: &Sexpr, binding: &Binding) -> Result<GroundState, DomainError> {
        list(e, "a list of fluents")?.iter().map(|f| self.fluent_id(f, binding)).collect()
    }

    fn goal(&self, e: &Sexpr) -> Result<GoalFormula, DomainError> {
        let items = list(e, "a goal formula")?;
        let empty = Binding::new();
        match e.head() {
            Some("and") => Ok(GoalFormula::And(items[1..].iter().map(|g| self.goal(g)).collect::<Result<_, _>>()?)),
            Some("or") => Ok(GoalFormula::Or(items[1..].iter().map(|g| self.goal(g)).collect::<Result<_, _>>()?)),
            Some("not") => match &items[1..] {
                [g] => Ok(GoalFormula::negate(self.goal(g)?)),
                _ => syntax(e.pos(), "`not` takes exactly one formula"),
            },
            _ => Ok(GoalFormula::Holds(self.fluent_id(e, &empty)?)),
        }
    }

    fn push_fluent(&mut self, f: Fluent) {
        self.index.entry(f.clone()).or_insert(FluentId(self.universe.len() as u32));
        self.universe.push(f);
    }
}

/// Calls `visit` for every combination of constants, last position fastest.
fn product<'a>(domains: &[&'a [String]], visit: &mut dyn FnMut(&[&'a str])) {
    fn go<'a>(domains: &[&'a [String]], acc: &mut Vec<&'a str>, visit: &mut dyn FnMut(&[&'a str])) {
        match domains.split_first() {
            None => visit(acc),
            Some((d, rest)) => {
                for c in d.iter() {
                    acc.push(c);
                    go(rest, acc, visit);
                    acc.pop();
                }
            }
        }
    }
    go(domains, &mut Vec::new(), visit)
}

fn pairwise_distinct(xs: &[&str]) -> bool {
    xs.iter().enumerate().all(|(i, x)| !xs[..i].contains(x))
}

fn parse_sorts(items: &[Sexpr]) -> Result<Vec<Sort>, DomainError> {
    items
        .iter()
        .map(|s| {
            let parts = list(s, "a sort declaration")?;
            let Some((name, constants)) = parts.split_first() else {
                return syntax(s.pos(), "empty sort declaration");
            };
            Ok(Sort {
                name: atom(name, "a sort name")?,
                constants: constants.iter().map(|c| atom(c, "a constant")).collect::<Result<_, _>>()?,
            })
        })
        .collect()
}

fn parse_symbols(items: &[Sexpr]) -> Result<Vec<Signature>, DomainError> {
    items
        .iter()
        .map(|s| {
            let parts = list(s, "a fluent declaration")?;
            let Some((name, mut rest)) = parts.split_first() else {
                return syntax(s.pos(), "empty fluent declaration");
            };
            let name = atom(name, "a fluent symbol")?;
            if RESERVED.contains(&name.as_str()) {
                return syntax(s.pos(), format!("`{name}` is reserved"));
            }
            let distinct = rest.last().and_then(Sexpr::as_atom) == Some(":distinct");
            if distinct {
                rest = &rest[..rest.len() - 1];
            }
            let arg_sorts = rest.iter().map(|a| atom(a, "a sort name")).collect::<Result<_, _>>()?;
            Ok(Signature { symbol: FluentSymbol { name, arg_sorts }, distinct })
        })
        .collect()
}

#[derive(Default)]
struct ActionForm<'a> {
    params: Option<&'a Sexpr>,
    args: Option<&'a Sexpr>,
    distinct: Vec<&'a Sexpr>,
    pre: Option<&'a Sexpr>,
    neg_pre: Option<&'a Sexpr>,
    add: Option<&'a Sexpr>,
    del: Option<&'a Sexpr>,
}

fn parse_action(cx: &Context, e: &Sexpr, out: &mut Vec<GroundAction>) -> Result<(), DomainError> {
    let items = list(e, "an action")?;
    let Some(name) = items.get(1) else {
        return syntax(e.pos(), "action without a name");
    };
    let name = atom(name, "an action name")?;

    let mut form = ActionForm::default();
    let mut rest = &items[2..];
    while let Some((key, tail)) = rest.split_first() {
        let Some((value, tail)) = tail.split_first() else {
            return syntax(key.pos(), "keyword without a value");
        };
        let slot = match atom(key, "a keyword")?.as_str() {
            ":params" => &mut form.params,
            ":args" => &mut form.args,
            ":distinct" => {
                form.distinct.push(value);
                rest = tail;
                continue;
            }
            ":pre" => &mut form.pre,
            ":neg-pre" => &mut form.neg_pre,
            ":add" => &mut form.add,
            ":del" => &mut form.del,
            other => return syntax(key.pos(), format!("unknown action keyword `{other}`")),
        };
        if slot.replace(value).is_some() {
            return syntax(key.pos(), "duplicate keyword");
        }
        rest = tail;
    }
    if let (Some(_), Some(args)) = (form.params, form.args) {
        return syntax(args.pos(), "`:args` and `:params` are mutually exclusive");
    }

    let mut params: Vec<(String, String)> = Vec::new();
    if let Some(ps) = form.params {
        for p in list(ps, "a parameter list")? {
            match list(p, "a parameter `(name SORT)`")? {
                [v, s] => {
                    let (v, s) = (atom(v, "a parameter name")?, atom(s, "a sort name")?);
                    cx.sort(&s, p.pos())?;
                    if params.iter().any(|(w, _)| *w == v) {
                        return syntax(p.pos(), format!("duplicate parameter `{v}`"));
                    }
                    params.push((v, s));
                }
                _ => return syntax(p.pos(), "expected a parameter `(name SORT)`"),
            }
        }
    }
    let mut groups = Vec::new();
    for d in &form.distinct {
        let mut idx = Vec::new();
        for v in list(d, "a list of parameters")? {
            let name = atom(v, "a parameter name")?;
            match params.iter().position(|(w, _)| *w == name) {
                Some(i) => idx.push(i),
                None => return syntax(v.pos(), format!("unknown parameter `{name}`")),
            }
        }
        groups.push(idx);
    }

    let mut bindings = Vec::new();
    let domains: Vec<&[String]> =
        params.iter().map(|(_, s)| cx.sort(s, e.pos()).map(|s| s.constants.as_slice())).collect::<Result<_, _>>()?;
    product(&domains, &mut |values| {
        let ok = groups.iter().all(|g| pairwise_distinct(&g.iter().map(|&i| values[i]).collect::<Vec<_>>()));
        if ok {
            bindings.push(values.iter().map(|v| v.to_string()).collect::<Vec<_>>());
        }
    });

    let empty = Sexpr::List(Vec::new(), e.pos());
    for values in &bindings {
        let binding: Binding =
            params.iter().zip(values).map(|((v, s), c)| (v.as_str(), (s.as_str(), c.as_str()))).collect();
        let args = match form.args {
            Some(a) => list(a, "a list of constants")?.iter().map(|c| atom(c, "a constant")).collect::<Result<_, _>>()?,
            None => values.clone(),
        };
        out.push(GroundAction {
            name: name.clone(),
            args,
            pre_pos: cx.fluent_set(form.pre.unwrap_or(&empty), &binding)?,
            pre_neg: cx.fluent_set(form.neg_pre.unwrap_or(&empty), &binding)?,
            add: cx.fluent_set(form.add.unwrap_or(&empty), &binding)?,
            del: cx.fluent_set(form.del.unwrap_or(&empty), &binding)?,
        });
    }
    Ok(())
}

/// Parses and grounds a domain document, then validates the result.
pub fn parse_domain(text: &str) -> Result<Problem, DomainError> {
    let top = parse_all(text)?;
    let doc = match top.as_slice() {
        [] => return syntax(Pos { line: 1, column: 1 }, "empty document"),
        [first, ..] if first.head() != Some("problem") => {
            return syntax(first.pos(), "expected `(problem NAME …)`")
        }
        [doc] => doc,
        [_, extra, ..] => return syntax(extra.pos(), "trailing input after the problem"),
    };
    let items = list(doc, "a problem")?;
    let Some(name) = items.get(1) else {
        return syntax(doc.pos(), "problem without a name");
    };
    let name = atom(name, "a problem name")?;

    let mut sections: HashMap<&str, &Sexpr> = HashMap::new();
    let mut actions = Vec::new();
    for s in &items[2..] {
        match s.head() {
            Some("action") => actions.push(s),
            Some(h @ ("sorts" | "fluents" | "universe" | "init" | "goal")) => {
                if sections.insert(h, s).is_some() {
                    return syntax(s.pos(), format!("duplicate `{h}` section"));
                }
            }
            Some(h) => return syntax(s.pos(), format!("unknown section `{h}`")),
            None => return syntax(s.pos(), "expected a section"),
        }
    }
    let body = |key: &str| -> &[Sexpr] {
        sections.get(key).and_then(|s| s.as_list()).map_or(&[], |l| &l[1..])
    };

    let mut cx = Context {
        sorts: parse_sorts(body("sorts"))?,
        symbols: parse_symbols(body("fluents"))?,
        universe: Vec::new(),
        index: HashMap::new(),
    };

    if sections.contains_key("universe") {
        for f in body("universe") {
            let fluent = cx.fluent(f, &Binding::new())?;
            cx.push_fluent(fluent);
        }
    } else {
        let mut generated = Vec::new();
        for sig in &cx.symbols {
            let domains: Vec<&[String]> = sig
                .symbol
                .arg_sorts
                .iter()
                .map(|s| cx.sort(s, doc.pos()).map(|s| s.constants.as_slice()))
                .collect::<Result<_, _>>()?;
            product(&domains, &mut |values| {
                if !sig.distinct || pairwise_distinct(values) {
                    generated.push(Fluent::new(
                        sig.symbol.name.clone(),
                        sig.symbol.arg_sorts.iter().cloned().zip(values.iter().map(|v| v.to_string())),
                    ));
                }
            });
        }
        generated.into_iter().for_each(|f| cx.push_fluent(f));
    }

    let mut ground = Vec::new();
    for a in actions {
        parse_action(&cx, a, &mut ground)?;
    }

    let mut initial = GroundState::empty();
    for f in body("init") {
        initial.insert(cx.fluent_id(f, &Binding::new())?);
    }

    let goal = match (sections.get("goal"), body("goal")) {
        (Some(_), [g]) => cx.goal(g)?,
        (Some(s), _) => return syntax(s.pos(), "`goal` takes exactly one formula"),
        (None, _) => return syntax(doc.pos(), "missing `goal` section"),
    };

    let problem = Problem {
        name,
        sorts: cx.sorts,
        symbols: cx.symbols.into_iter().map(|s| s.symbol).collect(),
        fluent_universe: cx.universe,
        actions: ground,
        initial,
        goal,
    };
    problem.validate().map_err(DomainError::Invalid)?;
    Ok(problem)
}

fn print_fluent(out: &mut String, f: &Fluent) {
    out.push('(');
    out.push_str(&f.symbol);
    for a in &f.args {
        out.push(' ');
        out.push_str(&a.constant);
    }
    out.push(')');
}

fn print_set(out: &mut String, p: &Problem, s: &GroundState) {
    out.push('(');
    for (i, id) in s.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        print_fluent(out, p.fluent(id));
    }
    out.push(')');
}

fn print_goal(out: &mut String, p: &Problem, g: &GoalFormula) {
    let (op, gs) = match g {
        GoalFormula::Holds(f) => return print_fluent(out, p.fluent(*f)),
        GoalFormula::Not(g) => ("not", std::slice::from_ref(&**g)),
        GoalFormula::And(gs) => ("and", gs.as_slice()),
        GoalFormula::Or(gs) => ("or", gs.as_slice()),
    };
    out.push('(');
    out.push_str(op);
    for g in gs {
        out.push(' ');
        print_goal(out, p, g);
    }
    out.push(')');
}

/// Writes `p` as a fully ground document: explicit universe, one `:args`
/// action per ground action. [`parse_domain`] reads it back unchanged.
pub fn print_domain(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "(problem {}", p.name);

    out.push_str("  (sorts");
    for s in &p.sorts {
        let _ = write!(out, "\n    ({}", s.name);
        for c in &s.constants {
            let _ = write!(out, " {c}");
        }
        out.push(')');
    }
    out.push_str(")\n  (fluents");
    for s in &p.symbols {
        let _ = write!(out, "\n    ({}", s.name);
        for a in &s.arg_sorts {
            let _ = write!(out, " {a}");
        }
        out.push(')');
    }
    out.push_str(")\n  (universe");
    for f in &p.fluent_universe {
        out.push_str("\n    ");
        print_fluent(&mut out, f);
    }
    out.push_str(")\n");

    for a in &p.actions {
        let _ = write!(out, "  (action {}", a.name);
        if !a.args.is_empty() {
            let _ = write!(out, " :args ({})", a.args.join(" "));
        }
        for (key, set) in [(":pre", &a.pre_pos), (":neg-pre", &a.pre_neg), (":add", &a.add), (":del", &a.del)] {
            if !set.is_empty() {
                let _ = write!(out, "\n    {key} ");
                print_set(&mut out, p, set);
            }
        }
        out.push_str(")\n");
    }

    out.push_str("  (init");
    for id in p.initial.iter() {
        out.push(' ');
        print_fluent(&mut out, p.fluent(id));
    }
    out.push_str(")\n  (goal ");
    print_goal(&mut out, p, &p.goal);
    out.push_str("))\n");
    out
}
