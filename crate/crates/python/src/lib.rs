//! Python bindings for the model counter and the documentation analyses.

use std::time::Duration;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pofcount::config::{self, Order, ProductDocumentation, Redundancy};
use pofcount::counter::{count_conjunction, BranchHeuristic, CountResult, CountStatus, CounterConfig};
use pofcount::oracle::{enumerate_count, enumerate_models, OracleLimit};
use pofcount::transform::{tseitin, write_dimacs, CnfDocument, TseitinVariant};
use pofcount::{Formula, FormulaArena, Literal, VarSet};

create_exception!(pypofcount, PofcountError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    PofcountError::new_err(e.to_string())
}

fn status_name(s: CountStatus) -> &'static str {
    match s {
        CountStatus::Complete => "complete",
        CountStatus::Timeout => "timeout",
        CountStatus::MemoryLimit => "memory_limit",
    }
}

/// Counter options shared by every counting entry point.
#[pyclass(name = "CounterOptions", from_py_object)]
#[derive(Clone)]
pub struct PyCounterOptions {
    #[pyo3(get, set)]
    timeout: Option<f64>,
    #[pyo3(get, set)]
    cache_max: Option<usize>,
    #[pyo3(get, set)]
    heuristic: String,
    #[pyo3(get, set)]
    seed: u64,
    #[pyo3(get, set)]
    node_limit: Option<usize>,
}

#[pymethods]
impl PyCounterOptions {
    #[new]
    #[pyo3(signature = (timeout=None, cache_max=None, heuristic="most-parents".to_string(), seed=0, node_limit=None))]
    fn new(
        timeout: Option<f64>,
        cache_max: Option<usize>,
        heuristic: String,
        seed: u64,
        node_limit: Option<usize>,
    ) -> PyResult<Self> {
        let opts = PyCounterOptions {
            timeout,
            cache_max,
            heuristic,
            seed,
            node_limit,
        };
        opts.config()?;
        Ok(opts)
    }
}

impl PyCounterOptions {
    fn config(&self) -> PyResult<CounterConfig> {
        let branch_heuristic = match self.heuristic.as_str() {
            "most-parents" => BranchHeuristic::MostParents,
            "lowest-id" => BranchHeuristic::LowestId,
            "most-parents-random" => BranchHeuristic::MostParentsRandomTies,
            other => return Err(PyValueError::new_err(format!("unknown heuristic `{other}`"))),
        };
        let timeout = match self.timeout {
            Some(t) if !(t.is_finite() && t >= 0.0) => {
                return Err(PyValueError::new_err("timeout must be a non-negative number of seconds"))
            }
            t => t.map(Duration::from_secs_f64),
        };
        Ok(CounterConfig {
            timeout,
            cache_capacity: self.cache_max,
            branch_heuristic,
            seed: self.seed,
            node_limit: self.node_limit,
        })
    }
}

fn config_of(options: Option<&PyCounterOptions>) -> PyResult<CounterConfig> {
    options.map_or_else(|| Ok(CounterConfig::default()), PyCounterOptions::config)
}

/// Outcome of one counting run. `count` is `None` unless `status` is
/// `"complete"`.
#[pyclass(name = "CountResult", frozen, skip_from_py_object)]
pub struct PyCountResult {
    #[pyo3(get)]
    count: Option<BigUint>,
    #[pyo3(get)]
    scope_size: usize,
    #[pyo3(get)]
    status: &'static str,
    #[pyo3(get)]
    trivially_inconsistent: bool,
    #[pyo3(get)]
    decisions: u64,
    #[pyo3(get)]
    cache_hits: u64,
    #[pyo3(get)]
    component_splits: u64,
    #[pyo3(get)]
    elapsed_seconds: f64,
}

impl From<&CountResult> for PyCountResult {
    fn from(r: &CountResult) -> Self {
        PyCountResult {
            count: r.count.clone(),
            scope_size: r.scope_size,
            status: status_name(r.status),
            trivially_inconsistent: r.trivially_inconsistent,
            decisions: r.stats.decisions,
            cache_hits: r.stats.cache_hits,
            component_splits: r.stats.component_splits,
            elapsed_seconds: r.stats.elapsed.as_secs_f64(),
        }
    }
}

#[pymethods]
impl PyCountResult {
    fn __repr__(&self) -> String {
        match &self.count {
            Some(n) => format!("CountResult(count={n}, scope_size={})", self.scope_size),
            None => format!("CountResult(status='{}', scope_size={})", self.status, self.scope_size),
        }
    }
}

/// A propositional formula over a fixed scope of named variables.
#[pyclass(name = "Expression", frozen, skip_from_py_object)]
pub struct PyExpression {
    arena: FormulaArena,
    root: Formula,
    scope: VarSet,
}

#[pymethods]
impl PyExpression {
    /// Parses `text`. Without `scope` the variables occurring in the text
    /// form the scope; extra names in `scope` count as free variables.
    #[new]
    #[pyo3(signature = (text, scope=None))]
    fn new(text: &str, scope: Option<Vec<String>>) -> PyResult<Self> {
        let mut arena = FormulaArena::new();
        let mut listed = VarSet::new();
        for name in scope.iter().flatten() {
            listed.insert(arena.pool_mut().intern(name).map_err(err)?);
        }
        let root = arena.parse(text).map_err(err)?;
        let scope = if scope.is_some() { listed } else { arena.pool().all() };
        if let Some(v) = arena.vars(root).iter().find(|&v| !scope.contains(v)) {
            return Err(err(format!("variable `{}` is not in the scope", arena.name(v))));
        }
        Ok(PyExpression { arena, root, scope })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.scope.iter().map(|v| self.arena.name(v).to_string()).collect()
    }

    /// Exact model count, optionally under assumed literals such as `"!b"`.
    #[pyo3(signature = (assume=None, options=None))]
    fn count(&self, py: Python<'_>, assume: Option<Vec<String>>, options: Option<PyCounterOptions>) -> PyResult<PyCountResult> {
        let cfg = config_of(options.as_ref())?;
        let mut lits = Vec::new();
        for text in assume.iter().flatten() {
            let (positive, name) = match text.strip_prefix(['!', '-']) {
                Some(rest) => (false, rest.trim()),
                None => (true, text.trim()),
            };
            let var = self
                .arena
                .pool()
                .get(name)
                .ok_or_else(|| err(format!("unknown variable `{name}`")))?;
            lits.push(Literal::new(var, positive));
        }
        let r = py
            .detach(|| count_conjunction(&self.arena, &[self.root], &self.scope, &lits, &cfg))
            .map_err(err)?;
        Ok(PyCountResult::from(&r))
    }

    /// Brute-force count, refused above `max_vars` variables.
    #[pyo3(signature = (max_vars=30))]
    fn oracle_count(&self, max_vars: usize) -> PyResult<BigUint> {
        let lim = OracleLimit {
            max_scope_size: max_vars,
        };
        enumerate_count(&self.arena, self.root, &self.scope, lim).map_err(err)
    }

    /// The first `limit` models as `{name: bool}` dictionaries.
    #[pyo3(signature = (limit, max_vars=30))]
    fn models<'py>(&self, py: Python<'py>, limit: usize, max_vars: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let lim = OracleLimit {
            max_scope_size: max_vars,
        };
        let found = enumerate_models(&self.arena, self.root, &self.scope, limit, lim).map_err(err)?;
        found
            .iter()
            .map(|m| {
                let d = PyDict::new(py);
                for (v, value) in m.iter() {
                    d.set_item(self.arena.name(v), value)?;
                }
                Ok(d)
            })
            .collect()
    }

    /// Tseitin encoding, `"equiv"` (count preserving) or `"impl"`.
    #[pyo3(signature = (variant="equiv"))]
    fn to_cnf(&self, variant: &str) -> PyResult<PyCnf> {
        let variant = match variant {
            "equiv" => TseitinVariant::Equivalence,
            "impl" => TseitinVariant::Implication,
            other => return Err(PyValueError::new_err(format!("unknown variant `{other}`"))),
        };
        let doc = tseitin(&self.arena, self.root, &self.scope, variant).map_err(err)?;
        Ok(PyCnf { doc })
    }

    fn __str__(&self) -> String {
        self.arena.display(self.root).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expression({:?})", self.__str__())
    }
}

#[pyclass(name = "Cnf", frozen, skip_from_py_object)]
pub struct PyCnf {
    doc: CnfDocument,
}

#[pymethods]
impl PyCnf {
    #[getter]
    fn var_count(&self) -> usize {
        self.doc.var_count
    }

    #[getter]
    fn aux_count(&self) -> usize {
        self.doc.aux.len()
    }

    #[getter]
    fn clauses(&self) -> Vec<Vec<i64>> {
        self.doc.clauses.clone()
    }

    fn dimacs(&self) -> String {
        write_dimacs(&self.doc)
    }
}

/// A product documentation: codes, rules and the parts list.
#[pyclass(name = "Documentation", frozen, skip_from_py_object)]
pub struct PyDocumentation {
    doc: ProductDocumentation,
}

fn frequency_dict<'py>(py: Python<'py>, f: &config::Frequency) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("numerator", f.numerator.clone())?;
    d.set_item("denominator", f.denominator.clone())?;
    d.set_item("rational", &f.rational)?;
    d.set_item("decimal", &f.decimal)?;
    Ok(d)
}

#[pymethods]
impl PyDocumentation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyDocumentation {
            doc: ProductDocumentation::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| err(format!("{path}: {e}")))?;
        Self::new(&text)
    }

    #[getter]
    fn codes(&self) -> Vec<String> {
        self.doc.codes().iter().map(|&v| self.doc.code_name(v).to_string()).collect()
    }

    #[getter]
    fn positions(&self) -> Vec<String> {
        self.doc.bom().iter().map(|p| p.id.clone()).collect()
    }

    /// The rules as one formula.
    fn formula(&self) -> PyResult<PyExpression> {
        let scope: Vec<String> = self.codes();
        PyExpression::new(&self.doc.arena().display(self.doc.pof()).to_string(), Some(scope))
    }

    #[pyo3(signature = (options=None))]
    fn total(&self, py: Python<'_>, options: Option<PyCounterOptions>) -> PyResult<PyCountResult> {
        let cfg = config_of(options.as_ref())?;
        let r = py.detach(|| config::total_configurations(&self.doc, &cfg)).map_err(err)?;
        Ok(PyCountResult::from(&r))
    }

    /// Share of configurations containing `code`, as a dictionary with
    /// exact `numerator` and `denominator`.
    #[pyo3(signature = (code, options=None))]
    fn frequency<'py>(&self, py: Python<'py>, code: &str, options: Option<PyCounterOptions>) -> PyResult<Bound<'py, PyDict>> {
        let cfg = config_of(options.as_ref())?;
        let f = py.detach(|| config::option_frequency(&self.doc, code, &cfg)).map_err(err)?;
        frequency_dict(py, &f)
    }

    /// Runs an order (a list of chosen codes) through the rules.
    fn order<'py>(&self, py: Python<'py>, codes: Vec<String>) -> PyResult<Bound<'py, PyDict>> {
        let names: Vec<&str> = codes.iter().map(String::as_str).collect();
        let order = Order::from_codes(&self.doc, &names).map_err(err)?;
        let v = config::process_order(&self.doc, &order);
        let d = PyDict::new(py);
        d.set_item("constructible", v.is_constructible())?;
        d.set_item("supplemented", v.supplemented)?;
        d.set_item("added", v.added)?;
        d.set_item("violated", v.violated)?;
        Ok(d)
    }

    /// Per-variant counts and pairwise overlaps for one parts-list position.
    #[pyo3(signature = (position, options=None))]
    fn parts<'py>(&self, py: Python<'py>, position: &str, options: Option<PyCounterOptions>) -> PyResult<Bound<'py, PyDict>> {
        let cfg = config_of(options.as_ref())?;
        let r = py.detach(|| config::position_report(&self.doc, position, &cfg)).map_err(err)?;
        let d = PyDict::new(py);
        let variants = PyDict::new(py);
        for v in &r.variants {
            variants.set_item(&v.variant, v.count.count.clone())?;
        }
        let overlaps: Vec<(String, String, Option<BigUint>, bool)> = r
            .overlaps
            .iter()
            .map(|o| (o.first.clone(), o.second.clone(), o.count.count.clone(), o.error))
            .collect();
        d.set_item("variants", variants)?;
        d.set_item("overlaps", overlaps)?;
        d.set_item("errors", r.errors)?;
        Ok(d)
    }

    /// Whether adding `condition` as a rule would leave the count unchanged.
    #[pyo3(signature = (condition, options=None))]
    fn is_redundant(&self, py: Python<'_>, condition: &str, options: Option<PyCounterOptions>) -> PyResult<bool> {
        let cfg = config_of(options.as_ref())?;
        // Parsing needs a mutable arena; work on a private copy.
        let mut doc = self.doc.clone();
        let f = doc.parse_condition(condition).map_err(err)?;
        let r = py.detach(|| config::redundancy_check(&doc, f, &cfg)).map_err(err)?;
        Ok(matches!(r, Redundancy::RedundantCandidate { .. }))
    }

    /// Compares against another version; returns the count ratio
    /// (self over other) and per-code frequency deltas.
    #[pyo3(signature = (other, codes=Vec::new(), options=None))]
    fn compare<'py>(
        &self,
        py: Python<'py>,
        other: &PyDocumentation,
        codes: Vec<String>,
        options: Option<PyCounterOptions>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = config_of(options.as_ref())?;
        let names: Vec<&str> = codes.iter().map(String::as_str).collect();
        let r = py
            .detach(|| config::compare_versions(&self.doc, &other.doc, &names, &cfg))
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("union_size", r.union_size)?;
        d.set_item("first", r.first.count.clone())?;
        d.set_item("second", r.second.count.clone())?;
        match &r.ratio {
            Some(f) => d.set_item("ratio", frequency_dict(py, f)?)?,
            None => d.set_item("ratio", py.None())?,
        }
        let deltas = PyDict::new(py);
        for delta in &r.deltas {
            deltas.set_item(&delta.code, &delta.delta)?;
        }
        d.set_item("deltas", deltas)?;
        d.set_item("status", status_name(r.status))?;
        Ok(d)
    }
}

#[pymodule]
fn pypofcount(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PofcountError", m.py().get_type::<PofcountError>())?;
    m.add_class::<PyCounterOptions>()?;
    m.add_class::<PyCountResult>()?;
    m.add_class::<PyExpression>()?;
    m.add_class::<PyCnf>()?;
    m.add_class::<PyDocumentation>()?;
    Ok(())
}
