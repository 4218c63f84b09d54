use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, RngCore};

use crate::formula::{Formula, Node, NodeStore, Var};

/// Strategy for picking the decision variable inside a component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchHeuristic {
    /// Most distinct parent gates (counting both polarities), lowest id on ties.
    #[default]
    MostParents,
    /// Lowest variable id.
    LowestId,
    /// Like `MostParents`, with ties broken by the seeded generator.
    MostParentsRandomTies,
}

impl BranchHeuristic {
    pub fn name(self) -> &'static str {
        match self {
            BranchHeuristic::MostParents => "most-parents",
            BranchHeuristic::LowestId => "lowest-id",
            BranchHeuristic::MostParentsRandomTies => "most-parents-random",
        }
    }
}

impl FromStr for BranchHeuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "most-parents" => Ok(BranchHeuristic::MostParents),
            "lowest-id" => Ok(BranchHeuristic::LowestId),
            "most-parents-random" => Ok(BranchHeuristic::MostParentsRandomTies),
            other => Err(format!(
                "unknown heuristic `{other}` (expected most-parents, lowest-id or most-parents-random)"
            )),
        }
    }
}

fn literal_var(store: &NodeStore, f: Formula) -> Option<Var> {
    match store.node(f) {
        Node::Var(v) => Some(*v),
        Node::Not(c) => match store.node(*c) {
            Node::Var(v) => Some(*v),
            _ => None,
        },
        _ => None,
    }
}

/// Picks an unassigned variable of `component`, or `None` if it has none.
pub fn select_branch_variable(
    store: &NodeStore,
    component: Formula,
    heuristic: BranchHeuristic,
    rng: Option<&mut dyn RngCore>,
) -> Option<Var> {
    let vars = store.vars_of(component);
    let lowest = *vars.first()?;
    if heuristic == BranchHeuristic::LowestId || vars.len() == 1 {
        return Some(lowest);
    }
    let mut score: BTreeMap<Var, usize> = BTreeMap::new();
    for f in store.cone(&[component]) {
        if let Node::And(cs) | Node::Or(cs) = store.node(f) {
            let mut seen: Vec<Var> = cs.iter().filter_map(|&c| literal_var(store, c)).collect();
            seen.sort_unstable();
            seen.dedup();
            for v in seen {
                *score.entry(v).or_default() += 1;
            }
        }
    }
    let Some(&best) = score.values().max() else {
        return Some(lowest);
    };
    let tied: Vec<Var> = score
        .iter()
        .filter(|&(_, &s)| s == best)
        .map(|(&v, _)| v)
        .collect();
    match (heuristic, rng) {
        (BranchHeuristic::MostParentsRandomTies, Some(rng)) if tied.len() > 1 => {
            Some(tied[rng.random_range(0..tied.len())])
        }
        _ => Some(tied[0]),
    }
}
