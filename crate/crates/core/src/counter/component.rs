use std::collections::HashMap;

use crate::formula::{Formula, Node, NodeStore, Var};

/// Splits the top-level conjuncts of `residual` into groups that share no
/// variable, ordered by the smallest variable each group contains.
pub fn decompose(store: &mut NodeStore, residual: Formula) -> Vec<Formula> {
    if residual == Formula::TRUE {
        return Vec::new();
    }
    let conjuncts: Vec<Formula> = match store.node(residual) {
        Node::And(cs) => cs.to_vec(),
        _ => return vec![residual],
    };

    let mut parent: Vec<usize> = (0..conjuncts.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut owner: HashMap<Var, usize> = HashMap::new();
    for (i, &c) in conjuncts.iter().enumerate() {
        for &v in store.vars_of(c) {
            match owner.get(&v) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
                None => {
                    owner.insert(v, i);
                }
            }
        }
    }

    let mut groups: HashMap<usize, Vec<Formula>> = HashMap::new();
    for (i, &c) in conjuncts.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(c);
    }
    if groups.len() == 1 {
        return vec![residual];
    }
    let mut keyed: Vec<(Var, Vec<Formula>)> = groups
        .into_values()
        .map(|g| {
            let min = g
                .iter()
                .filter_map(|&c| store.vars_of(c).first().copied())
                .min()
                .expect("simplified conjuncts mention a variable");
            (min, g)
        })
        .collect();
    keyed.sort_by_key(|(v, _)| *v);
    keyed.into_iter().map(|(_, g)| store.and(g)).collect()
}

/// Exact structural signature of a residual component.
///
/// The encoding lists the component's DAG in post-order with local node
/// numbering, node kinds, children in stored (canonical) order and original
/// variable ids, prefixed by the number of free variables the cached count
/// covers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentKey(Box<[u8]>);

impl ComponentKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

pub fn component_key(store: &NodeStore, component: Formula, free_vars: usize) -> ComponentKey {
    let cone = store.cone(&[component]);
    let local: HashMap<Formula, u32> = cone
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, i as u32))
        .collect();
    let mut out = Vec::with_capacity(8 + cone.len() * 8);
    out.extend_from_slice(&(free_vars as u64).to_le_bytes());
    for &f in &cone {
        match store.node(f) {
            Node::True => out.push(0),
            Node::False => out.push(1),
            Node::Var(v) => {
                out.push(2);
                out.extend_from_slice(&v.id().to_le_bytes());
            }
            Node::Not(c) => {
                out.push(3);
                out.extend_from_slice(&local[c].to_le_bytes());
            }
            Node::And(cs) | Node::Or(cs) => {
                out.push(if matches!(store.node(f), Node::And(_)) { 4 } else { 5 });
                out.extend_from_slice(&(cs.len() as u32).to_le_bytes());
                for c in cs.iter() {
                    out.extend_from_slice(&local[c].to_le_bytes());
                }
            }
        }
    }
    ComponentKey(out.into_boxed_slice())
}
