//! Hash-consed propositional formula DAGs.
//!
//! Every formula lives in a [`NodeStore`]. Nodes are interned on creation, so
//! two structurally identical formulas in the same store always share one
//! [`Formula`] handle. The smart constructors apply a fixed set of local
//! simplifications (constant folding, flattening, duplicate removal, double
//! negation) and keep n-ary children sorted by node id.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

mod dimacs;
mod parse;

pub use dimacs::{parse_dimacs, parse_dimacs_clauses, DimacsCnf};
pub use parse::parse_formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("`{0}` is a reserved word and cannot name a variable")]
    ReservedName(String),
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("variable `{0}` is not bound by the assignment")]
    UnboundVariable(String),
    #[error("variable `{0}` is bound to both true and false")]
    ConflictingBinding(String),
    #[error("dimacs line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

/// A propositional variable, identified by its dense index in a [`VariablePool`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Var(u32);

impl Var {
    pub const fn new(id: u32) -> Self {
        Var(id)
    }

    pub const fn id(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

/// A variable together with a polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub const fn new(var: Var, positive: bool) -> Self {
        Literal { var, positive }
    }

    pub const fn pos(var: Var) -> Self {
        Literal::new(var, true)
    }

    pub const fn neg(var: Var) -> Self {
        Literal::new(var, false)
    }

    pub const fn negate(self) -> Self {
        Literal::new(self.var, !self.positive)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// Bijection between variable names and dense ids `0..n`.
#[derive(Clone, Debug, Default)]
pub struct VariablePool {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl VariablePool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the variable named `name`, creating it if needed.
    pub fn intern(&mut self, name: &str) -> Result<Var, FormulaError> {
        if let Some(&v) = self.index.get(name) {
            return Ok(v);
        }
        if name == "true" || name == "false" {
            return Err(FormulaError::ReservedName(name.to_string()));
        }
        if !is_identifier(name) {
            return Err(FormulaError::InvalidName(name.to_string()));
        }
        let var = Var(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), var);
        Ok(var)
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    /// Panics if `var` was not created by this pool.
    pub fn name(&self, var: Var) -> &str {
        &self.names[var.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (Var(i as u32), n.as_str()))
    }

    pub fn all(&self) -> VarSet {
        self.iter().map(|(v, _)| v).collect()
    }
}

/// Handle to a node in a [`NodeStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(u32);

impl Formula {
    pub const TRUE: Formula = Formula(0);
    pub const FALSE: Formula = Formula(1);

    pub const fn id(self) -> u32 {
        self.0
    }

    pub const fn is_const(self) -> bool {
        self.0 < 2
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Var(Var),
    Not(Formula),
    And(Box<[Formula]>),
    Or(Box<[Formula]>),
}

impl Node {
    pub fn children(&self) -> &[Formula] {
        match self {
            Node::Not(c) => std::slice::from_ref(c),
            Node::And(cs) | Node::Or(cs) => cs,
            _ => &[],
        }
    }

    pub fn is_gate(&self) -> bool {
        matches!(self, Node::Not(_) | Node::And(_) | Node::Or(_))
    }
}

/// Partial map from variables to truth values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    bindings: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `var`. Rebinding to the same value is a no-op; rebinding to the
    /// opposite value fails and leaves the assignment unchanged.
    pub fn bind(&mut self, var: Var, value: bool) -> Result<(), Var> {
        match self.bindings.get(&var) {
            Some(&old) if old != value => Err(var),
            _ => {
                self.bindings.insert(var, value);
                Ok(())
            }
        }
    }

    pub fn from_literals<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> Result<Self, Var> {
        let mut a = Assignment::new();
        for l in lits {
            a.bind(l.var, l.positive)?;
        }
        Ok(a)
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.iter().map(|(v, b)| Literal::new(v, b))
    }

    pub fn domain(&self) -> VarSet {
        self.bindings.keys().copied().collect()
    }

    /// Union of two assignments; fails on the first variable bound differently.
    pub fn union(&self, other: &Assignment) -> Result<Assignment, Var> {
        let mut out = self.clone();
        for (v, b) in other.iter() {
            out.bind(v, b)?;
        }
        Ok(out)
    }
}

/// An ordered set of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarSet(BTreeSet<Var>);

impl VarSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Var) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.difference(&other.0).copied().collect())
    }
}

impl FromIterator<Var> for VarSet {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        VarSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VarSet {
    type Item = &'a Var;
    type IntoIter = std::collections::btree_set::Iter<'a, Var>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Interning store for formula nodes. Variables are plain ids here; names
/// live in the [`VariablePool`] of the owning [`FormulaArena`].
#[derive(Clone, Debug)]
pub struct NodeStore {
    nodes: Vec<Node>,
    vars: Vec<Box<[Var]>>,
    table: HashMap<Node, Formula>,
}

impl Default for NodeStore {
    fn default() -> Self {
        Self::new()
    }
}

impl NodeStore {
    pub fn new() -> Self {
        let mut store = NodeStore {
            nodes: Vec::new(),
            vars: Vec::new(),
            table: HashMap::new(),
        };
        store.intern(Node::True);
        store.intern(Node::False);
        store
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, f: Formula) -> &Node {
        &self.nodes[f.index()]
    }

    /// Sorted variables reachable from `f`.
    pub fn vars_of(&self, f: Formula) -> &[Var] {
        &self.vars[f.index()]
    }

    fn intern(&mut self, node: Node) -> Formula {
        if let Some(&f) = self.table.get(&node) {
            return f;
        }
        let vars: Box<[Var]> = match &node {
            Node::True | Node::False => Box::new([]),
            Node::Var(v) => Box::new([*v]),
            Node::Not(c) => self.vars[c.index()].clone(),
            Node::And(cs) | Node::Or(cs) => {
                let mut all: Vec<Var> = cs
                    .iter()
                    .flat_map(|c| self.vars[c.index()].iter().copied())
                    .collect();
                all.sort_unstable();
                all.dedup();
                all.into_boxed_slice()
            }
        };
        let f = Formula(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.vars.push(vars);
        self.table.insert(node, f);
        f
    }

    pub fn constant(&self, value: bool) -> Formula {
        if value {
            Formula::TRUE
        } else {
            Formula::FALSE
        }
    }

    pub fn var(&mut self, v: Var) -> Formula {
        self.intern(Node::Var(v))
    }

    pub fn literal(&mut self, lit: Literal) -> Formula {
        let v = self.var(lit.var);
        if lit.positive {
            v
        } else {
            self.not(v)
        }
    }

    pub fn not(&mut self, f: Formula) -> Formula {
        match self.node(f) {
            Node::True => Formula::FALSE,
            Node::False => Formula::TRUE,
            Node::Not(c) => *c,
            _ => self.intern(Node::Not(f)),
        }
    }

    pub fn and(&mut self, children: impl IntoIterator<Item = Formula>) -> Formula {
        self.nary(true, children)
    }

    pub fn or(&mut self, children: impl IntoIterator<Item = Formula>) -> Formula {
        self.nary(false, children)
    }

    pub fn and2(&mut self, a: Formula, b: Formula) -> Formula {
        self.nary(true, [a, b])
    }

    pub fn or2(&mut self, a: Formula, b: Formula) -> Formula {
        self.nary(false, [a, b])
    }

    /// `a -> b`, built as `!a | b`.
    pub fn implies(&mut self, a: Formula, b: Formula) -> Formula {
        let na = self.not(a);
        self.or2(na, b)
    }

    /// `a <-> b`, built as `(!a | b) & (!b | a)`.
    pub fn iff(&mut self, a: Formula, b: Formula) -> Formula {
        let ab = self.implies(a, b);
        let ba = self.implies(b, a);
        self.and2(ab, ba)
    }

    fn nary(&mut self, is_and: bool, children: impl IntoIterator<Item = Formula>) -> Formula {
        let (absorbing, identity) = if is_and {
            (Formula::FALSE, Formula::TRUE)
        } else {
            (Formula::TRUE, Formula::FALSE)
        };
        let mut out = Vec::new();
        for c in children {
            if c == identity {
                continue;
            }
            if c == absorbing {
                return absorbing;
            }
            match self.node(c) {
                Node::And(cs) if is_and => out.extend_from_slice(cs),
                Node::Or(cs) if !is_and => out.extend_from_slice(cs),
                _ => out.push(c),
            }
        }
        out.sort_unstable();
        out.dedup();
        match out.len() {
            0 => identity,
            1 => out[0],
            _ if is_and => self.intern(Node::And(out.into_boxed_slice())),
            _ => self.intern(Node::Or(out.into_boxed_slice())),
        }
    }

    /// Nodes reachable from `roots`, children before parents.
    pub fn cone(&self, roots: &[Formula]) -> Vec<Formula> {
        let mut seen = std::collections::HashSet::new();
        let mut order = Vec::new();
        let mut stack: Vec<(Formula, bool)> = roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((f, expanded)) = stack.pop() {
            if expanded {
                order.push(f);
                continue;
            }
            if !seen.insert(f) {
                continue;
            }
            stack.push((f, true));
            for &c in self.node(f).children().iter().rev() {
                if !seen.contains(&c) {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Substitutes constants for the variables `lookup` binds and re-simplifies.
    pub fn condition_with(&mut self, f: Formula, lookup: &dyn Fn(Var) -> Option<bool>) -> Formula {
        let mut memo = HashMap::new();
        self.condition_rec(f, lookup, &mut memo)
    }

    fn condition_rec(
        &mut self,
        f: Formula,
        lookup: &dyn Fn(Var) -> Option<bool>,
        memo: &mut HashMap<Formula, Formula>,
    ) -> Formula {
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        if !self.vars_of(f).iter().any(|&v| lookup(v).is_some()) {
            return f;
        }
        let result = match self.node(f).clone() {
            Node::True | Node::False => f,
            Node::Var(v) => match lookup(v) {
                Some(b) => self.constant(b),
                None => f,
            },
            Node::Not(c) => {
                let c = self.condition_rec(c, lookup, memo);
                self.not(c)
            }
            Node::And(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for &c in cs.iter() {
                    let r = self.condition_rec(c, lookup, memo);
                    if r == Formula::FALSE {
                        memo.insert(f, r);
                        return r;
                    }
                    out.push(r);
                }
                self.and(out)
            }
            Node::Or(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for &c in cs.iter() {
                    let r = self.condition_rec(c, lookup, memo);
                    if r == Formula::TRUE {
                        memo.insert(f, r);
                        return r;
                    }
                    out.push(r);
                }
                self.or(out)
            }
        };
        memo.insert(f, result);
        result
    }

    pub fn condition(&mut self, f: Formula, a: &Assignment) -> Formula {
        if a.is_empty() {
            return f;
        }
        self.condition_with(f, &|v| a.get(v))
    }

    /// Evaluates `f` under `lookup`; returns the first unbound variable on failure.
    pub fn evaluate_with(&self, f: Formula, lookup: &dyn Fn(Var) -> Option<bool>) -> Result<bool, Var> {
        let mut values: HashMap<Formula, bool> = HashMap::new();
        for n in self.cone(&[f]) {
            let v = match self.node(n) {
                Node::True => true,
                Node::False => false,
                Node::Var(v) => lookup(*v).ok_or(*v)?,
                Node::Not(c) => !values[c],
                Node::And(cs) => cs.iter().all(|c| values[c]),
                Node::Or(cs) => cs.iter().any(|c| values[c]),
            };
            values.insert(n, v);
        }
        Ok(values[&f])
    }

    /// Copies the cone of `f` from `other` into this store.
    pub fn import(&mut self, other: &NodeStore, f: Formula) -> Formula {
        let mut map: HashMap<Formula, Formula> = HashMap::new();
        for n in other.cone(&[f]) {
            let m = match other.node(n) {
                Node::True => Formula::TRUE,
                Node::False => Formula::FALSE,
                Node::Var(v) => self.var(*v),
                Node::Not(c) => self.not(map[c]),
                Node::And(cs) => self.and(cs.iter().map(|c| map[c])),
                Node::Or(cs) => self.or(cs.iter().map(|c| map[c])),
            };
            map.insert(n, m);
        }
        map[&f]
    }
}

/// A variable pool and node store forming one formula arena.
#[derive(Clone, Debug, Default)]
pub struct FormulaArena {
    pool: VariablePool,
    store: NodeStore,
}

impl FormulaArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pool(&self) -> &VariablePool {
        &self.pool
    }

    pub fn pool_mut(&mut self) -> &mut VariablePool {
        &mut self.pool
    }

    pub fn store(&self) -> &NodeStore {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut NodeStore {
        &mut self.store
    }

    pub fn parse(&mut self, text: &str) -> Result<Formula, FormulaError> {
        parse_formula(text, self)
    }

    /// Interns `name` and returns its variable node.
    pub fn var_named(&mut self, name: &str) -> Result<Formula, FormulaError> {
        let v = self.pool.intern(name)?;
        Ok(self.store.var(v))
    }

    pub fn node(&self, f: Formula) -> &Node {
        self.store.node(f)
    }

    pub fn vars(&self, f: Formula) -> VarSet {
        self.store.vars_of(f).iter().copied().collect()
    }

    pub fn name(&self, v: Var) -> &str {
        self.pool.name(v)
    }

    pub fn evaluate(&self, f: Formula, a: &Assignment) -> Result<bool, FormulaError> {
        self.store
            .evaluate_with(f, &|v| a.get(v))
            .map_err(|v| FormulaError::UnboundVariable(self.name(v).to_string()))
    }

    pub fn condition(&mut self, f: Formula, a: &Assignment) -> Formula {
        self.store.condition(f, a)
    }

    /// Builds an assignment from `name -> value` pairs, interning names.
    pub fn assignment<'a>(
        &mut self,
        pairs: impl IntoIterator<Item = (&'a str, bool)>,
    ) -> Result<Assignment, FormulaError> {
        let mut a = Assignment::new();
        for (name, value) in pairs {
            let v = self.pool.intern(name)?;
            a.bind(v, value)
                .map_err(|v| FormulaError::ConflictingBinding(self.name(v).to_string()))?;
        }
        Ok(a)
    }

    pub fn display(&self, f: Formula) -> DisplayFormula<'_> {
        DisplayFormula { arena: self, root: f }
    }
}

/// Infix rendering in the input grammar. Shared subformulas are printed once
/// per occurrence.
pub struct DisplayFormula<'a> {
    arena: &'a FormulaArena,
    root: Formula,
}

impl DisplayFormula<'_> {
    // 0: top level, 1: inside `|`, 2: inside `&`, 3: operand of `!`
    fn write(&self, out: &mut fmt::Formatter<'_>, f: Formula, ctx: u8) -> fmt::Result {
        let node = self.arena.node(f);
        let (own, sep) = match node {
            Node::True => return out.write_str("true"),
            Node::False => return out.write_str("false"),
            Node::Var(v) => return out.write_str(self.arena.name(*v)),
            Node::Not(c) => {
                out.write_str("!")?;
                return self.write(out, *c, 3);
            }
            Node::Or(_) => (1, " | "),
            Node::And(_) => (2, " & "),
        };
        let paren = ctx > own;
        if paren {
            out.write_str("(")?;
        }
        for (i, &c) in node.children().iter().enumerate() {
            if i > 0 {
                out.write_str(sep)?;
            }
            self.write(out, c, own)?;
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for DisplayFormula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.root, 0)
    }
}
