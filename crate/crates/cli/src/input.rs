//! Reading inputs: files or stdin, digests, and formula loading.

use std::fs;
use std::io::Read;

use serde::Serialize;
use sha2::{Digest, Sha256};

use pofcount::formula::{parse_dimacs, Formula, FormulaArena, VarSet};

use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
    #[serde(skip)]
    pub text: String,
}

pub fn read(path: &str, stdin: &mut dyn Read) -> Result<Input, CliError> {
    let io = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    let bytes = if path == "-" {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(io)?;
        buf
    } else {
        fs::read(path).map_err(io)?
    };
    let sha256 = Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let text = String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{path}: input is not UTF-8")))?;
    Ok(Input {
        path: path.to_string(),
        sha256,
        text,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// DIMACS when a `p cnf` header is present, formula text otherwise.
    Auto,
    Bool,
    Dimacs,
}

pub struct Loaded {
    pub arena: FormulaArena,
    pub formula: Formula,
    pub scope: VarSet,
    pub format: &'static str,
}

fn looks_like_dimacs(text: &str) -> bool {
    text.lines().any(|l| {
        let mut words = l.split_whitespace();
        words.next() == Some("p") && words.next() == Some("cnf")
    })
}

/// Parses `input` and resolves the scope: `declared` takes every variable
/// the input introduces (for DIMACS, all header variables), anything else is
/// a comma- or space-separated list of names.
pub fn load_formula(input: &Input, format: Format, scope: &str) -> Result<Loaded, CliError> {
    let dimacs = match format {
        Format::Auto => looks_like_dimacs(&input.text),
        Format::Bool => false,
        Format::Dimacs => true,
    };
    let mut arena = FormulaArena::new();
    let explicit = scope != "declared";
    let mut listed = VarSet::new();
    if explicit {
        for name in scope.split([',', ' ']).map(str::trim).filter(|s| !s.is_empty()) {
            let v = arena.pool_mut().intern(name).map_err(|source| CliError::Formula {
                path: "--scope".into(),
                source,
            })?;
            listed.insert(v);
        }
    }
    let err = |source| CliError::Formula {
        path: input.path.clone(),
        source,
    };
    let formula = if dimacs {
        parse_dimacs(&input.text, &mut arena).map_err(err)?.0
    } else {
        arena.parse(&input.text).map_err(err)?
    };
    let scope = if explicit { listed } else { arena.pool().all() };
    Ok(Loaded {
        arena,
        formula,
        scope,
        format: if dimacs { "dimacs" } else { "bool" },
    })
}
