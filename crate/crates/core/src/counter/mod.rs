//! Exact model counter for formula DAGs.
//!
//! The search is DPLL-style and never converts to CNF. At each search node the
//! residual formula is propagated with gate-local rules, conditioned on the
//! forced variables, and split into variable-disjoint components. Component
//! counts are memoized under an exact structural key; an uncached component
//! is counted by branching on one variable (false first, then true) and
//! summing the two sub-counts. Variables that drop out of a residual without
//! being forced contribute a factor of two each.

use std::num::NonZeroUsize;
use std::time::{Duration, Instant};

use lru::LruCache;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{Assignment, Formula, FormulaArena, Literal, NodeStore, Var, VarSet};

mod branch;
mod component;
mod propagate;

pub use branch::{select_branch_variable, BranchHeuristic};
pub use component::{component_key, decompose, ComponentKey};
pub use propagate::{propagate, Propagation};

const SEARCH_STACK_BYTES: usize = 256 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("variable `{0}` occurs in the formula but not in the counting scope")]
    ScopeViolation(String),
    #[error("assumption on `{0}`, which is not in the counting scope")]
    AssumptionOutsideScope(String),
}

#[derive(Clone, Debug, Default)]
pub struct CounterConfig {
    /// Checked at every decision.
    pub timeout: Option<Duration>,
    /// Maximum cached components; `None` is unbounded, `Some(0)` disables caching.
    pub cache_capacity: Option<usize>,
    pub branch_heuristic: BranchHeuristic,
    pub seed: u64,
    /// Upper bound on the search's private node store; exceeding it ends the
    /// run with [`CountStatus::MemoryLimit`].
    pub node_limit: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountStatus {
    Complete,
    Timeout,
    MemoryLimit,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub component_splits: u64,
    pub cache_lookups: u64,
    pub cache_hits: u64,
    pub peak_cache_entries: u64,
    #[serde(rename = "elapsed_seconds", serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}


/// Serializes with the count as an exact decimal string and a two-digit
/// scientific rendering next to it (`count_scientific`); both are null unless
/// the count completed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    /// Present only when `status` is complete.
    pub count: Option<BigUint>,
    pub scope_size: usize,
    pub status: CountStatus,
    /// Set when the assumptions themselves contradict each other.
    pub trivially_inconsistent: bool,
    pub stats: CountStats,
}

impl Serialize for CountResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CountResult", 6)?;
        st.serialize_field("count", &self.count.as_ref().map(|n| n.to_string()))?;
        st.serialize_field("count_scientific", &self.count.as_ref().map(crate::render::scientific))?;
        st.serialize_field("scope_size", &self.scope_size)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("trivially_inconsistent", &self.trivially_inconsistent)?;
        st.serialize_field("stats", &self.stats)?;
        st.end()
    }
}

impl CountResult {
    pub fn is_complete(&self) -> bool {
        self.status == CountStatus::Complete
    }
}

#[derive(Debug)]
enum Abort {
    Timeout,
    MemoryLimit,
}

struct Search<'c> {
    store: NodeStore,
    cfg: &'c CounterConfig,
    cache: Option<LruCache<ComponentKey, BigUint>>,
    rng: ChaCha8Rng,
    stats: CountStats,
    start: Instant,
}

impl<'c> Search<'c> {
    fn new(cfg: &'c CounterConfig, start: Instant) -> Self {
        let cache = match cfg.cache_capacity {
            None => Some(LruCache::unbounded()),
            Some(n) => NonZeroUsize::new(n).map(LruCache::new),
        };
        Search {
            store: NodeStore::new(),
            cfg,
            cache,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            stats: CountStats::default(),
            start,
        }
    }

    fn check_limits(&self) -> Result<(), Abort> {
        if let Some(t) = self.cfg.timeout {
            if self.start.elapsed() >= t {
                return Err(Abort::Timeout);
            }
        }
        if let Some(n) = self.cfg.node_limit {
            if self.store.len() > n {
                return Err(Abort::MemoryLimit);
            }
        }
        Ok(())
    }

    /// Models of `f` over `nvars` variables, a superset of `vars(f)`.
    fn count_formula(&mut self, f: Formula, nvars: usize) -> Result<BigUint, Abort> {
        if f == Formula::FALSE {
            return Ok(BigUint::zero());
        }
        if f == Formula::TRUE {
            return Ok(BigUint::one() << nvars);
        }
        let mentioned = self.store.vars_of(f).len();
        let forced = match propagate(&self.store, f, &[]) {
            Propagation::Conflict => {
                self.stats.conflicts += 1;
                return Ok(BigUint::zero());
            }
            Propagation::Forced(lits) => lits,
        };
        self.stats.propagations += forced.len() as u64;
        let residual = if forced.is_empty() {
            f
        } else {
            let a = Assignment::from_literals(&forced).expect("propagation is consistent");
            self.store.condition(f, &a)
        };
        if residual == Formula::FALSE {
            self.stats.conflicts += 1;
            return Ok(BigUint::zero());
        }
        let dropped = mentioned - forced.len() - self.store.vars_of(residual).len();
        let free = nvars - mentioned + dropped;

        let components = decompose(&mut self.store, residual);
        if components.len() > 1 {
            self.stats.component_splits += 1;
        }
        let mut product = BigUint::one() << free;
        for c in components {
            let n = self.count_component(c)?;
            if n.is_zero() {
                return Ok(n);
            }
            product *= n;
        }
        Ok(product)
    }

    /// Models of a non-constant component over exactly its own variables.
    fn count_component(&mut self, c: Formula) -> Result<BigUint, Abort> {
        let key = self.cache.as_ref().map(|_| component_key(&self.store, c, 0));
        if let (Some(cache), Some(key)) = (self.cache.as_mut(), key.as_ref()) {
            self.stats.cache_lookups += 1;
            if let Some(n) = cache.get(key) {
                self.stats.cache_hits += 1;
                return Ok(n.clone());
            }
        }
        self.check_limits()?;
        self.stats.decisions += 1;
        let x = select_branch_variable(
            &self.store,
            c,
            self.cfg.branch_heuristic,
            Some(&mut self.rng),
        )
        .expect("components mention a variable");
        let rest = self.store.vars_of(c).len() - 1;
        let mut total = BigUint::zero();
        for value in [false, true] {
            let branch = self.condition_one(c, x, value);
            total += self.count_formula(branch, rest)?;
        }
        if let (Some(cache), Some(key)) = (self.cache.as_mut(), key) {
            cache.put(key, total.clone());
            self.stats.peak_cache_entries = self.stats.peak_cache_entries.max(cache.len() as u64);
        }
        Ok(total)
    }

    fn condition_one(&mut self, f: Formula, x: Var, value: bool) -> Formula {
        self.store
            .condition_with(f, &|v| if v == x { Some(value) } else { None })
    }
}

fn check_scope(arena: &FormulaArena, roots: &[Formula], scope: &VarSet) -> Result<(), CountError> {
    for &r in roots {
        if let Some(&v) = arena.store().vars_of(r).iter().find(|&&v| !scope.contains(v)) {
            return Err(CountError::ScopeViolation(arena.name(v).to_string()));
        }
    }
    Ok(())
}

/// Counts the models of the conjunction of `roots` and `assumptions` over
/// `scope`.
///
/// The search runs on its own thread with a large stack and a private copy of
/// the formula cone, so `arena` is only read.
pub fn count_conjunction(
    arena: &FormulaArena,
    roots: &[Formula],
    scope: &VarSet,
    assumptions: &[Literal],
    cfg: &CounterConfig,
) -> Result<CountResult, CountError> {
    let start = Instant::now();
    check_scope(arena, roots, scope)?;
    if let Some(l) = assumptions.iter().find(|l| !scope.contains(l.var)) {
        let name = arena
            .pool()
            .iter()
            .find(|(v, _)| *v == l.var)
            .map(|(_, n)| n.to_string())
            .unwrap_or_else(|| format!("#{}", l.var.id()));
        return Err(CountError::AssumptionOutsideScope(name));
    }
    let Ok(fixed) = Assignment::from_literals(assumptions) else {
        return Ok(CountResult {
            count: Some(BigUint::zero()),
            scope_size: scope.len(),
            status: CountStatus::Complete,
            trivially_inconsistent: true,
            stats: CountStats {
                elapsed: start.elapsed(),
                ..CountStats::default()
            },
        });
    };

    let outcome = std::thread::scope(|s| {
        std::thread::Builder::new()
            .name("model-count".into())
            .stack_size(SEARCH_STACK_BYTES)
            .spawn_scoped(s, || {
                let mut search = Search::new(cfg, start);
                let imported: Vec<Formula> = roots
                    .iter()
                    .map(|&r| search.store.import(arena.store(), r))
                    .collect();
                let root = search.store.and(imported);
                let root = search.store.condition(root, &fixed);
                let n = search.count_formula(root, scope.len() - fixed.len());
                (n, search.stats)
            })
            .expect("spawn counting thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    });
    let (n, mut stats) = outcome;
    stats.elapsed = start.elapsed();
    let (count, status) = match n {
        Ok(n) => (Some(n), CountStatus::Complete),
        Err(Abort::Timeout) => (None, CountStatus::Timeout),
        Err(Abort::MemoryLimit) => (None, CountStatus::MemoryLimit),
    };
    Ok(CountResult {
        count,
        scope_size: scope.len(),
        status,
        trivially_inconsistent: false,
        stats,
    })
}

/// Number of total assignments over `scope` satisfying `f`.
pub fn count_models(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
    cfg: &CounterConfig,
) -> Result<CountResult, CountError> {
    count_conjunction(arena, &[f], scope, &[], cfg)
}

/// Counts `f ∧ assumptions` over `scope`.
pub fn count_with_assumptions(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
    assumptions: &[Literal],
    cfg: &CounterConfig,
) -> Result<CountResult, CountError> {
    count_conjunction(arena, &[f], scope, assumptions, cfg)
}
