use super::{Formula, FormulaArena, FormulaError};

/// Raw clause view of a DIMACS CNF file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimacsCnf {
    pub var_count: usize,
    pub clauses: Vec<Vec<i64>>,
}

fn err(line: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Dimacs {
        line,
        message: message.into(),
    }
}

pub fn parse_dimacs_clauses(text: &str) -> Result<DimacsCnf, FormulaError> {
    let mut header: Option<usize> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        // SATLIB-style end marker
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(err(line_no, "malformed header, expected `p cnf <vars> <clauses>`"));
            }
            let vars = fields[2]
                .parse::<usize>()
                .map_err(|_| err(line_no, format!("bad variable count `{}`", fields[2])))?;
            fields[3]
                .parse::<usize>()
                .map_err(|_| err(line_no, format!("bad clause count `{}`", fields[3])))?;
            header = Some(vars);
            continue;
        }
        let Some(var_count) = header else {
            return Err(err(line_no, "clause before `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > var_count {
                    return Err(err(
                        line_no,
                        format!("literal {lit} exceeds declared variable count {var_count}"),
                    ));
                }
                current.push(lit);
            }
        }
        last_line = line_no;
    }
    let Some(var_count) = header else {
        return Err(err(1, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(err(last_line, "last clause is missing its terminating 0"));
    }
    Ok(DimacsCnf { var_count, clauses })
}

/// Parses DIMACS text into a conjunction of clauses over variables `x1..xN`.
///
/// All `N` declared variables are interned, in order, so undeclared-but-counted
/// variables are present in the pool as free variables.
pub fn parse_dimacs(text: &str, arena: &mut FormulaArena) -> Result<(Formula, usize), FormulaError> {
    let cnf = parse_dimacs_clauses(text)?;
    let f = cnf.to_formula(arena)?;
    Ok((f, cnf.var_count))
}

impl DimacsCnf {
    pub fn to_formula(&self, arena: &mut FormulaArena) -> Result<Formula, FormulaError> {
        let mut vars = Vec::with_capacity(self.var_count);
        for i in 1..=self.var_count {
            vars.push(arena.pool_mut().intern(&format!("x{i}"))?);
        }
        let store = arena.store_mut();
        let mut conj = Vec::with_capacity(self.clauses.len());
        for clause in &self.clauses {
            let lits: Vec<Formula> = clause
                .iter()
                .map(|&l| {
                    let v = store.var(vars[l.unsigned_abs() as usize - 1]);
                    if l > 0 {
                        v
                    } else {
                        store.not(v)
                    }
                })
                .collect();
            let c = store.or(lits);
            conj.push(c);
        }
        Ok(store.and(conj))
    }
}
