//! Tseitin encodings of formula DAGs into CNF, and DIMACS output.
//!
//! One auxiliary variable is introduced per AND/OR node of the DAG. NOT nodes
//! get no auxiliary: they flip the sign of the literal standing for their
//! child. The equivalence variant defines every auxiliary in both directions
//! and so preserves the model count; the implication variant only emits the
//! direction required by the polarity under which a node occurs, which keeps
//! satisfiability but may admit extra models.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{DimacsCnf, Formula, FormulaArena, Node, Var, VarSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("variable `{0}` occurs in the formula but not in the scope")]
    ScopeViolation(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TseitinVariant {
    /// `aux -> definition` (or the converse under negative polarity).
    Implication,
    /// `aux <-> definition`.
    Equivalence,
}

/// A CNF in DIMACS numbering. Source variables take indices `1..=n` in id
/// order; auxiliaries follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfDocument {
    pub clauses: Vec<Vec<i64>>,
    pub var_count: usize,
    /// `source_vars[i]` is DIMACS variable `i + 1`.
    pub source_vars: Vec<Var>,
    /// DIMACS index of each auxiliary and the node it stands for.
    pub aux: Vec<(usize, Formula)>,
    /// Literal asserting the whole formula; `None` for constant roots.
    pub root: Option<i64>,
}

impl CnfDocument {
    pub fn to_dimacs(&self) -> DimacsCnf {
        DimacsCnf {
            var_count: self.var_count,
            clauses: self.clauses.clone(),
        }
    }
}

const POS: u8 = 1;
const NEG: u8 = 2;

fn encode(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
    variant: TseitinVariant,
) -> Result<CnfDocument, TransformError> {
    let store = arena.store();
    if let Some(&v) = store.vars_of(f).iter().find(|&&v| !scope.contains(v)) {
        return Err(TransformError::ScopeViolation(arena.name(v).to_string()));
    }
    let source_vars: Vec<Var> = scope.iter().collect();
    let source_index: HashMap<Var, i64> = source_vars
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as i64 + 1))
        .collect();

    let mut doc = CnfDocument {
        clauses: Vec::new(),
        var_count: source_vars.len(),
        source_vars,
        aux: Vec::new(),
        root: None,
    };
    if f == Formula::TRUE {
        return Ok(doc);
    }
    if f == Formula::FALSE {
        doc.clauses.push(Vec::new());
        return Ok(doc);
    }

    // Parents before children.
    let mut order = store.cone(&[f]);
    order.reverse();

    let mut polarity: HashMap<Formula, u8> = HashMap::new();
    polarity.insert(f, POS);
    let mut aux_index: HashMap<Formula, i64> = HashMap::new();
    for &n in &order {
        let p = polarity.get(&n).copied().unwrap_or(0);
        let flip = |p: u8| ((p & POS) << 1) | ((p & NEG) >> 1);
        match store.node(n) {
            Node::Not(c) => *polarity.entry(*c).or_default() |= flip(p),
            Node::And(cs) | Node::Or(cs) => {
                for c in cs.iter() {
                    *polarity.entry(*c).or_default() |= p;
                }
                doc.var_count += 1;
                aux_index.insert(n, doc.var_count as i64);
                doc.aux.push((doc.var_count, n));
            }
            _ => {}
        }
    }

    fn lit(store: &crate::formula::NodeStore, src: &HashMap<Var, i64>, aux: &HashMap<Formula, i64>, g: Formula) -> i64 {
        match store.node(g) {
            Node::Var(v) => src[v],
            Node::Not(c) => -lit(store, src, aux, *c),
            _ => aux[&g],
        }
    }

    let root = lit(store, &source_index, &aux_index, f);
    doc.root = Some(root);
    doc.clauses.push(vec![root]);
    for &n in &order {
        let (is_and, cs) = match store.node(n) {
            Node::And(cs) => (true, cs),
            Node::Or(cs) => (false, cs),
            _ => continue,
        };
        let a = aux_index[&n];
        let kids: Vec<i64> = cs
            .iter()
            .map(|&c| lit(store, &source_index, &aux_index, c))
            .collect();
        let p = polarity[&n];
        let (forward, backward) = match variant {
            TseitinVariant::Equivalence => (true, true),
            TseitinVariant::Implication => (p & POS != 0, p & NEG != 0),
        };
        if forward {
            if is_and {
                doc.clauses.extend(kids.iter().map(|&k| vec![-a, k]));
            } else {
                let mut c = vec![-a];
                c.extend(&kids);
                doc.clauses.push(c);
            }
        }
        if backward {
            if is_and {
                let mut c = vec![a];
                c.extend(kids.iter().map(|k| -k));
                doc.clauses.push(c);
            } else {
                doc.clauses.extend(kids.iter().map(|&k| vec![a, -k]));
            }
        }
    }
    Ok(doc)
}

pub fn tseitin_implication(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
) -> Result<CnfDocument, TransformError> {
    encode(arena, f, scope, TseitinVariant::Implication)
}

pub fn tseitin_equivalence(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
) -> Result<CnfDocument, TransformError> {
    encode(arena, f, scope, TseitinVariant::Equivalence)
}

pub fn tseitin(
    arena: &FormulaArena,
    f: Formula,
    scope: &VarSet,
    variant: TseitinVariant,
) -> Result<CnfDocument, TransformError> {
    encode(arena, f, scope, variant)
}

pub fn write_dimacs(doc: &CnfDocument) -> String {
    let mut out = format!("p cnf {} {}\n", doc.var_count, doc.clauses.len());
    for clause in &doc.clauses {
        for l in clause {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// DIMACS text preceded by `c var <index> <name>` and `c aux <index> <node-id>`
/// comment lines.
pub fn write_dimacs_annotated(doc: &CnfDocument, arena: &FormulaArena) -> String {
    let mut out = String::new();
    for (i, &v) in doc.source_vars.iter().enumerate() {
        let _ = writeln!(out, "c var {} {}", i + 1, arena.name(v));
    }
    for (idx, node) in &doc.aux {
        let _ = writeln!(out, "c aux {idx} {}", node.id());
    }
    out.push_str(&write_dimacs(doc));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_dimacs_clauses;

    fn setup(text: &str, names: &[&str]) -> (FormulaArena, Formula, VarSet) {
        let mut ar = FormulaArena::new();
        let scope = names
            .iter()
            .map(|n| ar.pool_mut().intern(n).unwrap())
            .collect();
        let f = ar.parse(text).unwrap();
        (ar, f, scope)
    }

    #[test]
    fn equivalence_clause_listing() {
        let (ar, f, s) = setup("a | (b & c)", &["a", "b", "c"]);
        let doc = tseitin_equivalence(&ar, f, &s).unwrap();
        // a=1 b=2 c=3, or-aux=4, and-aux=5
        assert_eq!(doc.var_count, 5);
        assert_eq!(doc.root, Some(4));
        assert_eq!(
            doc.clauses,
            vec![
                vec![4],
                vec![-4, 1, 5],
                vec![4, -1],
                vec![4, -5],
                vec![-5, 2],
                vec![-5, 3],
                vec![5, -2, -3],
            ]
        );
    }

    #[test]
    fn implication_clause_listing() {
        let (ar, f, s) = setup("a | (b & c)", &["a", "b", "c"]);
        let doc = tseitin_implication(&ar, f, &s).unwrap();
        assert_eq!(
            doc.clauses,
            vec![vec![4], vec![-4, 1, 5], vec![-5, 2], vec![-5, 3]]
        );
    }

    #[test]
    fn negated_gates_get_the_reverse_direction() {
        let (ar, f, s) = setup("!(a & b)", &["a", "b"]);
        let doc = tseitin_implication(&ar, f, &s).unwrap();
        assert_eq!(doc.clauses, vec![vec![-3], vec![3, -1, -2]]);
    }

    #[test]
    fn leaf_and_constant_roots() {
        let (ar, f, s) = setup("a", &["a"]);
        let doc = tseitin_implication(&ar, f, &s).unwrap();
        assert_eq!(doc.clauses, vec![vec![1]]);
        assert!(doc.aux.is_empty());

        let (ar, f, s) = setup("!a", &["a"]);
        assert_eq!(tseitin_equivalence(&ar, f, &s).unwrap().clauses, vec![vec![-1]]);

        let (ar, _, s) = setup("true", &["a", "b"]);
        let doc = tseitin_equivalence(&ar, Formula::TRUE, &s).unwrap();
        assert!(doc.clauses.is_empty());
        assert_eq!(doc.var_count, 2);
        assert_eq!(write_dimacs(&doc), "p cnf 2 0\n");

        let doc = tseitin_equivalence(&ar, Formula::FALSE, &s).unwrap();
        assert_eq!(doc.clauses, vec![Vec::<i64>::new()]);
    }

    #[test]
    fn scope_must_cover_formula() {
        let (ar, f, s) = setup("a & b", &["a"]);
        assert_eq!(
            tseitin_equivalence(&ar, f, &s),
            Err(TransformError::ScopeViolation("b".into()))
        );
    }

    #[test]
    fn free_scope_variables_are_declared() {
        let (ar, f, s) = setup("b", &["a", "b", "c"]);
        let doc = tseitin_equivalence(&ar, f, &s).unwrap();
        assert_eq!(doc.var_count, 3);
        assert_eq!(doc.clauses, vec![vec![2]]);
    }

    #[test]
    fn write_examples() {
        let doc = CnfDocument {
            clauses: vec![vec![1, -2]],
            var_count: 2,
            source_vars: vec![Var::new(0), Var::new(1)],
            aux: vec![],
            root: None,
        };
        assert_eq!(write_dimacs(&doc), "p cnf 2 1\n1 -2 0\n");
    }

    #[test]
    fn dimacs_round_trip() {
        let (ar, f, s) = setup("a | (b & c)", &["a", "b", "c"]);
        let doc = tseitin_equivalence(&ar, f, &s).unwrap();
        let back = parse_dimacs_clauses(&write_dimacs(&doc)).unwrap();
        assert_eq!(back, doc.to_dimacs());
        let annotated = write_dimacs_annotated(&doc, &ar);
        assert!(annotated.starts_with("c var 1 a\n"));
        assert_eq!(parse_dimacs_clauses(&annotated).unwrap(), doc.to_dimacs());
    }
}
