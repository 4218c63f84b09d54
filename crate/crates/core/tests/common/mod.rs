//! Random formula generation shared by the integration suites.
//!
//! Formulas are produced as a plain syntax tree that can be printed in the
//! input grammar and evaluated directly, without going through the library's
//! simplifying constructors.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pofcount::formula::{Formula, FormulaArena, VarSet};

#[derive(Clone, Debug)]
pub enum Ast {
    Const(bool),
    Var(usize),
    Not(Box<Ast>),
    And(Vec<Ast>),
    Or(Vec<Ast>),
    Implies(Box<Ast>, Box<Ast>),
    Iff(Box<Ast>, Box<Ast>),
}

impl Ast {
    pub fn text(&self) -> String {
        match self {
            Ast::Const(b) => b.to_string(),
            Ast::Var(i) => var_name(*i),
            Ast::Not(a) => format!("!{}", a.text()),
            Ast::And(cs) => format!("({})", join(cs, " & ")),
            Ast::Or(cs) => format!("({})", join(cs, " | ")),
            Ast::Implies(a, b) => format!("({} -> {})", a.text(), b.text()),
            Ast::Iff(a, b) => format!("({} <-> {})", a.text(), b.text()),
        }
    }

    pub fn eval(&self, values: &[bool]) -> bool {
        match self {
            Ast::Const(b) => *b,
            Ast::Var(i) => values[*i],
            Ast::Not(a) => !a.eval(values),
            Ast::And(cs) => cs.iter().all(|c| c.eval(values)),
            Ast::Or(cs) => cs.iter().any(|c| c.eval(values)),
            Ast::Implies(a, b) => !a.eval(values) || b.eval(values),
            Ast::Iff(a, b) => a.eval(values) == b.eval(values),
        }
    }

    /// Tree size after rewriting `->` and `<->` into `!`, `&`, `|`.
    pub fn expanded_size(&self) -> usize {
        match self {
            Ast::Const(_) | Ast::Var(_) => 1,
            Ast::Not(a) => 1 + a.expanded_size(),
            Ast::And(cs) | Ast::Or(cs) => 1 + cs.iter().map(Ast::expanded_size).sum::<usize>(),
            // or(not a, b)
            Ast::Implies(a, b) => 2 + a.expanded_size() + b.expanded_size(),
            // and(or(not a, b), or(not b, a))
            Ast::Iff(a, b) => 5 + 2 * (a.expanded_size() + b.expanded_size()),
        }
    }
}

fn join(cs: &[Ast], sep: &str) -> String {
    cs.iter().map(Ast::text).collect::<Vec<_>>().join(sep)
}

pub fn var_name(i: usize) -> String {
    format!("v{i:02}")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula over variables `0..nvars` with depth at most `depth`.
pub fn random_ast(rng: &mut ChaCha8Rng, nvars: usize, depth: usize) -> Ast {
    if depth == 0 || rng.random_bool(0.2) {
        return if rng.random_bool(0.03) {
            Ast::Const(rng.random_bool(0.5))
        } else {
            Ast::Var(rng.random_range(0..nvars))
        };
    }
    let sub = |rng: &mut ChaCha8Rng| random_ast(rng, nvars, depth - 1);
    match rng.random_range(0..10) {
        0 | 1 => Ast::Not(Box::new(sub(rng))),
        2..=4 => {
            let k = rng.random_range(2..=3);
            Ast::And((0..k).map(|_| sub(rng)).collect())
        }
        5..=7 => {
            let k = rng.random_range(2..=3);
            Ast::Or((0..k).map(|_| sub(rng)).collect())
        }
        8 => Ast::Implies(Box::new(sub(rng)), Box::new(sub(rng))),
        _ => Ast::Iff(Box::new(sub(rng)), Box::new(sub(rng))),
    }
}

/// Interns `v00..v{n-1}` in order and returns them as a scope.
pub fn declare(arena: &mut FormulaArena, n: usize) -> VarSet {
    (0..n)
        .map(|i| arena.pool_mut().intern(&var_name(i)).unwrap())
        .collect()
}

/// Parses `ast` into a fresh arena whose pool holds exactly `nvars` variables.
pub fn build(ast: &Ast, nvars: usize) -> (FormulaArena, Formula, VarSet) {
    let mut arena = FormulaArena::new();
    let scope = declare(&mut arena, nvars);
    let f = arena.parse(&ast.text()).unwrap();
    (arena, f, scope)
}

/// Truth-table count straight from the syntax tree.
pub fn ast_count(ast: &Ast, nvars: usize) -> u64 {
    let mut values = vec![false; nvars];
    let mut n = 0;
    for k in 0u64..(1 << nvars) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = (k >> i) & 1 == 1;
        }
        if ast.eval(&values) {
            n += 1;
        }
    }
    n
}
