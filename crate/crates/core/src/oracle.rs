//! Brute-force model enumeration, used as ground truth for the counter.
//!
//! [`enumerate_count`] evaluates the formula under every total assignment of
//! the scope, 64 assignments at a time in a machine word. It refuses scopes
//! larger than the configured limit instead of degrading.

use num_bigint::BigUint;
use thiserror::Error;

use crate::formula::{Assignment, Formula, FormulaArena, Node, Var, VarSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("scope of {size} variables exceeds the oracle limit of {max}")]
    ScopeTooLarge { size: usize, max: usize },
    #[error("variable `{0}` occurs in the formula but not in the scope")]
    ScopeViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_scope_size: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit { max_scope_size: 30 }
    }
}

fn check(arena: &FormulaArena, f: Formula, scope: &VarSet, lim: OracleLimit) -> Result<Vec<Var>, OracleError> {
    if scope.len() > lim.max_scope_size.max(1) {
        return Err(OracleError::ScopeTooLarge {
            size: scope.len(),
            max: lim.max_scope_size.max(1),
        });
    }
    if let Some(&v) = arena.store().vars_of(f).iter().find(|&&v| !scope.contains(v)) {
        return Err(OracleError::ScopeViolation(arena.name(v).to_string()));
    }
    Ok(scope.iter().collect())
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Number of total assignments over `scope` that satisfy `f`.
pub fn enumerate_count(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
    lim: OracleLimit,
) -> Result<BigUint, OracleError> {
    let order = check(arena, f, scope, lim)?;
    let n = order.len();
    let store = arena.store();
    let cone = store.cone(&[f]);
    let slot: std::collections::HashMap<Formula, usize> =
        cone.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let position: std::collections::HashMap<Var, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let lanes_mask = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
    let blocks: u64 = if n > 6 { 1 << (n - 6) } else { 1 };
    let mut words = vec![0u64; cone.len()];
    let mut total: u64 = 0;
    for block in 0..blocks {
        for (i, &g) in cone.iter().enumerate() {
            words[i] = match store.node(g) {
                Node::True => u64::MAX,
                Node::False => 0,
                Node::Var(v) => {
                    let p = position[v];
                    if p < 6 {
                        LANE_PATTERNS[p]
                    } else if (block >> (p - 6)) & 1 == 1 {
                        u64::MAX
                    } else {
                        0
                    }
                }
                Node::Not(c) => !words[slot[c]],
                Node::And(cs) => cs.iter().fold(u64::MAX, |acc, c| acc & words[slot[c]]),
                Node::Or(cs) => cs.iter().fold(0, |acc, c| acc | words[slot[c]]),
            };
        }
        total += (words[cone.len() - 1] & lanes_mask).count_ones() as u64;
    }
    Ok(BigUint::from(total))
}

/// The first `limit` models of `f` over `scope`, in lexicographic order with
/// variables ordered by id (lowest id most significant) and false before true.
pub fn enumerate_models(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
    limit: usize,
    lim: OracleLimit,
) -> Result<Vec<Assignment>, OracleError> {
    let order = check(arena, f, scope, lim)?;
    let n = order.len();
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    let mut values = vec![false; n];
    for k in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = (k >> (n - 1 - i)) & 1 == 1;
        }
        let holds = arena
            .store()
            .evaluate_with(f, &|var| order.binary_search(&var).ok().map(|i| values[i]))
            .expect("scope covers the formula");
        if holds {
            let mut a = Assignment::new();
            for (&v, &b) in order.iter().zip(&values) {
                a.bind(v, b).expect("fresh assignment");
            }
            out.push(a);
            if out.len() == limit {
                break;
            }
        }
    }
    Ok(out)
}
