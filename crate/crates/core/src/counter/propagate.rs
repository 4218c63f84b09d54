//! Gate-local propagation over a formula DAG with the root asserted true.

use std::collections::HashMap;

use crate::formula::{Formula, Literal, Node, NodeStore};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Some node was forced to both values.
    Conflict,
    /// Variables forced by the fixpoint, sorted by variable, excluding the
    /// literals that were passed in as assumptions.
    Forced(Vec<Literal>),
}

struct State<'a> {
    store: &'a NodeStore,
    cone: Vec<Formula>,
    local: HashMap<Formula, usize>,
    parents: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    queue: Vec<usize>,
}

struct Conflict;

impl State<'_> {
    fn set(&mut self, i: usize, v: bool) -> Result<(), Conflict> {
        match self.value[i] {
            Some(old) if old != v => Err(Conflict),
            Some(_) => Ok(()),
            None => {
                self.value[i] = Some(v);
                self.queue.push(i);
                Ok(())
            }
        }
    }

    fn children(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.store
            .node(self.cone[i])
            .children()
            .iter()
            .map(|c| self.local[c])
    }

    /// `i` is an AND at false or an OR at true: if exactly one child is
    /// still open and every other child has the neutral value, force it.
    fn last_open_child(&mut self, i: usize, neutral: bool) -> Result<(), Conflict> {
        let mut open = None;
        let mut n_open = 0;
        for c in self.children(i) {
            match self.value[c] {
                None => {
                    n_open += 1;
                    open = Some(c);
                }
                Some(v) if v != neutral => return Ok(()),
                Some(_) => {}
            }
        }
        match (n_open, open) {
            (0, _) => Err(Conflict),
            (1, Some(c)) => self.set(c, !neutral),
            _ => Ok(()),
        }
    }

    fn all_children(&self, i: usize, v: bool) -> bool {
        self.children(i).all(|c| self.value[c] == Some(v))
    }

    fn run(&mut self) -> Result<(), Conflict> {
        while let Some(i) = self.queue.pop() {
            let v = self.value[i].expect("queued nodes are assigned");
            match self.store.node(self.cone[i]) {
                Node::Not(_) => {
                    let c = self.children(i).next().expect("not has a child");
                    self.set(c, !v)?;
                }
                Node::And(_) => {
                    if v {
                        let cs: Vec<usize> = self.children(i).collect();
                        for c in cs {
                            self.set(c, true)?;
                        }
                    } else {
                        self.last_open_child(i, true)?;
                    }
                }
                Node::Or(_) => {
                    if !v {
                        let cs: Vec<usize> = self.children(i).collect();
                        for c in cs {
                            self.set(c, false)?;
                        }
                    } else {
                        self.last_open_child(i, false)?;
                    }
                }
                Node::True | Node::False | Node::Var(_) => {}
            }
            for k in 0..self.parents[i].len() {
                let p = self.parents[i][k];
                match self.store.node(self.cone[p]) {
                    Node::Not(_) => self.set(p, !v)?,
                    Node::And(_) => {
                        if !v {
                            self.set(p, false)?;
                        } else if self.all_children(p, true) {
                            self.set(p, true)?;
                        } else if self.value[p] == Some(false) {
                            self.last_open_child(p, true)?;
                        }
                    }
                    Node::Or(_) => {
                        if v {
                            self.set(p, true)?;
                        } else if self.all_children(p, false) {
                            self.set(p, false)?;
                        } else if self.value[p] == Some(true) {
                            self.last_open_child(p, false)?;
                        }
                    }
                    _ => unreachable!("leaves have no children"),
                }
            }
        }
        Ok(())
    }
}

/// Asserts `root` and the `assumed` literals, then applies the gate rules to
/// a fixpoint.
pub fn propagate(store: &NodeStore, root: Formula, assumed: &[Literal]) -> Propagation {
    let cone = store.cone(&[root]);
    let local: HashMap<Formula, usize> = cone.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut parents = vec![Vec::new(); cone.len()];
    for (i, &f) in cone.iter().enumerate() {
        for c in store.node(f).children() {
            parents[local[c]].push(i);
        }
    }
    let n = cone.len();
    let mut st = State {
        store,
        cone,
        local,
        parents,
        value: vec![None; n],
        queue: Vec::new(),
    };
    let mut init = || -> Result<(), Conflict> {
        for i in 0..n {
            match st.store.node(st.cone[i]) {
                Node::True => st.set(i, true)?,
                Node::False => st.set(i, false)?,
                _ => {}
            }
        }
        for lit in assumed {
            let node = Node::Var(lit.var);
            if let Some(i) = (0..n).find(|&i| *st.store.node(st.cone[i]) == node) {
                st.set(i, lit.positive)?;
            }
        }
        st.set(n - 1, true)?;
        st.run()
    };
    if init().is_err() {
        return Propagation::Conflict;
    }
    let mut forced: Vec<Literal> = st
        .cone
        .iter()
        .zip(&st.value)
        .filter_map(|(&f, &v)| match (store.node(f), v) {
            (Node::Var(var), Some(b)) => Some(Literal::new(*var, b)),
            _ => None,
        })
        .filter(|l| !assumed.iter().any(|a| a.var == l.var))
        .collect();
    forced.sort();
    Propagation::Forced(forced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::FormulaArena;

    fn lit(ar: &FormulaArena, name: &str, b: bool) -> Literal {
        Literal::new(ar.pool().get(name).unwrap(), b)
    }

    #[test]
    fn and_forces_children() {
        let mut ar = FormulaArena::new();
        let f = ar.parse("a & b").unwrap();
        assert_eq!(
            propagate(ar.store(), f, &[]),
            Propagation::Forced(vec![lit(&ar, "a", true), lit(&ar, "b", true)])
        );
    }

    #[test]
    fn or_last_open_child() {
        let mut ar = FormulaArena::new();
        let f = ar.parse("a | b").unwrap();
        let a_false = lit(&ar, "a", false);
        assert_eq!(
            propagate(ar.store(), f, &[a_false]),
            Propagation::Forced(vec![lit(&ar, "b", true)])
        );
        assert_eq!(propagate(ar.store(), f, &[]), Propagation::Forced(vec![]));
    }

    #[test]
    fn complementary_conjunction_conflicts() {
        let mut ar = FormulaArena::new();
        let f = ar.parse("a & !a").unwrap();
        assert_eq!(propagate(ar.store(), f, &[]), Propagation::Conflict);
    }

    #[test]
    fn upward_rules_reach_shared_nodes() {
        let mut ar = FormulaArena::new();
        // c forced false by the second conjunct, so (a & c) is false and the
        // disjunction's last open child b must hold.
        let f = ar.parse("((a & c) | b) & !c").unwrap();
        assert_eq!(
            propagate(ar.store(), f, &[]),
            Propagation::Forced(vec![lit(&ar, "c", false), lit(&ar, "b", true)])
        );
    }

    #[test]
    fn and_false_with_one_open_child() {
        let mut ar = FormulaArena::new();
        let f = ar.parse("!(a & b) & a").unwrap();
        assert_eq!(
            propagate(ar.store(), f, &[]),
            Propagation::Forced(vec![lit(&ar, "a", true), lit(&ar, "b", false)])
        );
    }

    #[test]
    fn constant_roots() {
        let ar = FormulaArena::new();
        assert_eq!(propagate(ar.store(), Formula::FALSE, &[]), Propagation::Conflict);
        assert_eq!(propagate(ar.store(), Formula::TRUE, &[]), Propagation::Forced(vec![]));
    }

    #[test]
    fn assumption_conflict() {
        let mut ar = FormulaArena::new();
        let f = ar.parse("a -> b").unwrap();
        let assumed = [lit(&ar, "a", true), lit(&ar, "b", false)];
        assert_eq!(propagate(ar.store(), f, &assumed), Propagation::Conflict);
    }
}
