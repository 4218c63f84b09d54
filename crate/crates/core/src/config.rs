//! Product documentation: codes, supplementary rules, constructibility
//! conditions and bill-of-materials positions, together with the analytics
//! computed from them (configuration counts, option frequencies, part counts,
//! overlap checks, redundancy checks, version comparison and order
//! processing).
//!
//! Rules file format, one directive per line, `#` starts a comment:
//!
//! ```text
//! codes: e1 e2 g1 g2            # repeatable, the union is taken
//! sr: e1 -> g1                  # when the condition holds, add the code
//! cc: e1 -> !e2                 # choosing the code requires the condition
//! cc: true -> g1 | g2           # applies to every order
//! part: gearbox.10 : g1         # position.variant : selection condition
//! ```
//!
//! All counts range over the full declared code set, so codes no rule
//! mentions contribute a factor of two each.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::counter::{count_conjunction, CountError, CountResult, CountStatus, CounterConfig};
use crate::formula::{Formula, FormulaArena, FormulaError, Literal, Var, VarSet};
use crate::render::{self, decimal_ratio};

/// Variant id reserved for the "nothing installed" variant of a position.
pub const NULL_VARIANT: &str = "999";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: FormulaError },
    #[error("line {line}: `codes:` declares nothing")]
    EmptyCodes { line: usize },
    #[error("the documentation declares no codes")]
    NoCodes,
    #[error("line {line}: undeclared code `{name}`")]
    UndeclaredCode { name: String, line: usize },
    #[error("line {line}: variant `{variant}` of position `{position}` is defined twice")]
    DuplicateVariant {
        position: String,
        variant: String,
        line: usize,
    },
    #[error("unknown code `{0}`")]
    UnknownCode(String),
    #[error("unknown position `{0}`")]
    UnknownPosition(String),
    #[error("position `{position}` has no variant `{variant}`")]
    UnknownVariant { position: String, variant: String },
    #[error("documentation void: no valid configuration exists")]
    DocumentationVoid,
    #[error("count did not complete ({0:?})")]
    Incomplete(CountStatus),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Head of a constructibility condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Head {
    /// `true -> C`: checked for every order.
    Always,
    Code(Var),
}

#[derive(Clone, Debug)]
pub struct SupplementaryRule {
    pub condition: Formula,
    pub code: Var,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct ConstructibilityCondition {
    pub head: Head,
    pub condition: Formula,
    /// Line of the first directive for this head.
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct BomVariant {
    pub id: String,
    pub selection: Formula,
}

#[derive(Clone, Debug)]
pub struct BomPosition {
    pub id: String,
    pub variants: Vec<BomVariant>,
}

impl BomPosition {
    pub fn has_null_variant(&self) -> bool {
        self.variants.iter().any(|v| v.id == NULL_VARIANT)
    }

    pub fn variant(&self, id: &str) -> Option<&BomVariant> {
        self.variants.iter().find(|v| v.id == id)
    }
}

/// A parsed and validated rules file. Immutable after parsing apart from
/// [`ProductDocumentation::parse_condition`], which only adds nodes.
#[derive(Clone, Debug)]
pub struct ProductDocumentation {
    arena: FormulaArena,
    codes: Vec<Var>,
    scope: VarSet,
    supplementary: Vec<SupplementaryRule>,
    constructibility: Vec<ConstructibilityCondition>,
    bom: Vec<BomPosition>,
    pof: Formula,
}

pub fn parse_documentation(text: &str) -> Result<ProductDocumentation, ConfigError> {
    ProductDocumentation::parse(text)
}

enum Directive<'a> {
    Codes(&'a str),
    Supplementary(&'a str),
    Constructibility(&'a str),
    Part(&'a str),
}

fn directive(line: &str, no: usize) -> Result<Option<Directive<'_>>, ConfigError> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return Ok(None);
    }
    let Some((kw, rest)) = line.split_once(':') else {
        return Err(ConfigError::Syntax {
            line: no,
            message: format!("expected `codes:`, `sr:`, `cc:` or `part:`, found `{line}`"),
        });
    };
    let rest = rest.trim();
    Ok(Some(match kw.trim() {
        "codes" => Directive::Codes(rest),
        "sr" => Directive::Supplementary(rest),
        "cc" => Directive::Constructibility(rest),
        "part" => Directive::Part(rest),
        other => {
            return Err(ConfigError::Syntax {
                line: no,
                message: format!("unknown directive `{other}`"),
            })
        }
    }))
}

/// Byte offsets of `->` arrows that are not the tail of `<->`.
fn arrows(s: &str) -> Vec<usize> {
    s.match_indices("->")
        .map(|(i, _)| i)
        .filter(|&i| i == 0 || s.as_bytes()[i - 1] != b'<')
        .collect()
}

impl ProductDocumentation {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let lines: Vec<(usize, Directive)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| directive(l, i + 1).transpose().map(|d| d.map(|d| (i + 1, d))))
            .collect::<Result<_, _>>()?;

        let mut arena = FormulaArena::new();
        let mut codes = Vec::new();
        let mut scope = VarSet::new();
        for (no, d) in &lines {
            if let Directive::Codes(list) = d {
                let names: Vec<&str> = list.split_whitespace().collect();
                if names.is_empty() {
                    return Err(ConfigError::EmptyCodes { line: *no });
                }
                for name in names {
                    let v = arena
                        .pool_mut()
                        .intern(name)
                        .map_err(|source| ConfigError::Formula { line: *no, source })?;
                    if scope.insert(v) {
                        codes.push(v);
                    }
                }
            }
        }
        if codes.is_empty() {
            return Err(ConfigError::NoCodes);
        }

        let mut doc = ProductDocumentation {
            arena,
            codes,
            scope,
            supplementary: Vec::new(),
            constructibility: Vec::new(),
            bom: Vec::new(),
            pof: Formula::TRUE,
        };
        let mut head_index: HashMap<Var, usize> = HashMap::new();
        for (no, d) in lines {
            match d {
                Directive::Codes(_) => {}
                Directive::Supplementary(body) => {
                    let Some(&at) = arrows(body).last() else {
                        return Err(ConfigError::Syntax {
                            line: no,
                            message: "supplementary rule needs `<condition> -> <code>`".into(),
                        });
                    };
                    let code = doc.code_at(body[at + 2..].trim(), no)?;
                    let condition = doc.formula_at(&body[..at], no)?;
                    doc.supplementary.push(SupplementaryRule {
                        condition,
                        code,
                        line: no,
                    });
                }
                Directive::Constructibility(body) => {
                    let Some(&at) = arrows(body).first() else {
                        return Err(ConfigError::Syntax {
                            line: no,
                            message: "constructibility condition needs `<code> -> <condition>`".into(),
                        });
                    };
                    let head_text = body[..at].trim();
                    let condition = doc.formula_at(&body[at + 2..], no)?;
                    if head_text == "true" {
                        doc.constructibility.push(ConstructibilityCondition {
                            head: Head::Always,
                            condition,
                            line: no,
                        });
                        continue;
                    }
                    let code = doc.code_at(head_text, no)?;
                    match head_index.get(&code) {
                        Some(&i) => {
                            let prev = doc.constructibility[i].condition;
                            doc.constructibility[i].condition =
                                doc.arena.store_mut().and2(prev, condition);
                        }
                        None => {
                            head_index.insert(code, doc.constructibility.len());
                            doc.constructibility.push(ConstructibilityCondition {
                                head: Head::Code(code),
                                condition,
                                line: no,
                            });
                        }
                    }
                }
                Directive::Part(body) => {
                    let Some((label, selection)) = body.split_once(':') else {
                        return Err(ConfigError::Syntax {
                            line: no,
                            message: "part needs `<position>.<variant> : <condition>`".into(),
                        });
                    };
                    let label = label.trim();
                    let (position, variant) = match label.rsplit_once('.') {
                        Some((p, v)) if !p.is_empty() && !v.is_empty() => (p, v),
                        _ => {
                            return Err(ConfigError::Syntax {
                                line: no,
                                message: format!("part label `{label}` is not `<position>.<variant>`"),
                            })
                        }
                    };
                    let selection = doc.formula_at(selection, no)?;
                    let pos = match doc.bom.iter().position(|p| p.id == position) {
                        Some(i) => i,
                        None => {
                            doc.bom.push(BomPosition {
                                id: position.to_string(),
                                variants: Vec::new(),
                            });
                            doc.bom.len() - 1
                        }
                    };
                    if doc.bom[pos].variant(variant).is_some() {
                        return Err(ConfigError::DuplicateVariant {
                            position: position.to_string(),
                            variant: variant.to_string(),
                            line: no,
                        });
                    }
                    doc.bom[pos].variants.push(BomVariant {
                        id: variant.to_string(),
                        selection,
                    });
                }
            }
        }
        doc.pof = doc.assemble_pof();
        Ok(doc)
    }

    fn code_at(&self, name: &str, line: usize) -> Result<Var, ConfigError> {
        self.code(name).ok_or_else(|| ConfigError::UndeclaredCode {
            name: name.to_string(),
            line,
        })
    }

    fn formula_at(&mut self, text: &str, line: usize) -> Result<Formula, ConfigError> {
        let f = self
            .arena
            .parse(text)
            .map_err(|source| ConfigError::Formula { line, source })?;
        if let Some(&v) = self.arena.store().vars_of(f).iter().find(|&&v| !self.scope.contains(v)) {
            return Err(ConfigError::UndeclaredCode {
                name: self.arena.name(v).to_string(),
                line,
            });
        }
        Ok(f)
    }

    fn assemble_pof(&mut self) -> Formula {
        let store = self.arena.store_mut();
        let mut parts = Vec::new();
        for r in &self.supplementary {
            let x = store.var(r.code);
            parts.push(store.implies(r.condition, x));
        }
        for c in &self.constructibility {
            parts.push(match c.head {
                Head::Always => c.condition,
                Head::Code(v) => {
                    let x = store.var(v);
                    store.implies(x, c.condition)
                }
            });
        }
        store.and(parts)
    }

    /// Parses a condition over the declared codes, e.g. a redundancy
    /// candidate or an ad-hoc selection.
    pub fn parse_condition(&mut self, text: &str) -> Result<Formula, ConfigError> {
        self.formula_at(text, 1)
    }

    pub fn arena(&self) -> &FormulaArena {
        &self.arena
    }

    /// Declared codes in declaration order.
    pub fn codes(&self) -> &[Var] {
        &self.codes
    }

    pub fn code_scope(&self) -> &VarSet {
        &self.scope
    }

    pub fn code(&self, name: &str) -> Option<Var> {
        self.arena.pool().get(name).filter(|&v| self.scope.contains(v))
    }

    pub fn code_name(&self, v: Var) -> &str {
        self.arena.name(v)
    }

    pub fn supplementary_rules(&self) -> &[SupplementaryRule] {
        &self.supplementary
    }

    pub fn constructibility_conditions(&self) -> &[ConstructibilityCondition] {
        &self.constructibility
    }

    pub fn bom(&self) -> &[BomPosition] {
        &self.bom
    }

    pub fn position(&self, id: &str) -> Result<&BomPosition, ConfigError> {
        self.bom
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| ConfigError::UnknownPosition(id.to_string()))
    }

    pub fn selection(&self, position: &str, variant: &str) -> Result<Formula, ConfigError> {
        self.position(position)?
            .variant(variant)
            .map(|v| v.selection)
            .ok_or_else(|| ConfigError::UnknownVariant {
                position: position.to_string(),
                variant: variant.to_string(),
            })
    }

    /// The conjunction of every supplementary-rule and constructibility
    /// implication.
    pub fn pof(&self) -> Formula {
        self.pof
    }

    fn count(&self, extra: &[Formula], assumptions: &[Literal], cfg: &CounterConfig) -> Result<CountResult, ConfigError> {
        let mut roots = vec![self.pof];
        roots.extend_from_slice(extra);
        Ok(count_conjunction(&self.arena, &roots, &self.scope, assumptions, cfg)?)
    }

    fn literal(&self, name: &str, value: bool) -> Result<Literal, ConfigError> {
        self.code(name)
            .map(|v| Literal::new(v, value))
            .ok_or_else(|| ConfigError::UnknownCode(name.to_string()))
    }
}

pub fn build_pof(doc: &ProductDocumentation) -> Formula {
    doc.pof()
}

fn complete(r: &CountResult) -> Result<&BigUint, ConfigError> {
    r.count.as_ref().ok_or(ConfigError::Incomplete(r.status))
}

pub fn total_configurations(doc: &ProductDocumentation, cfg: &CounterConfig) -> Result<CountResult, ConfigError> {
    doc.count(&[], &[], cfg)
}

/// Counts configurations with each named code forced to the given value.
pub fn count_with_options(
    doc: &ProductDocumentation,
    forced: &[(&str, bool)],
    cfg: &CounterConfig,
) -> Result<CountResult, ConfigError> {
    let lits = forced
        .iter()
        .map(|&(n, b)| doc.literal(n, b))
        .collect::<Result<Vec<_>, _>>()?;
    doc.count(&[], &lits, cfg)
}

/// An exact ratio with a rounded decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Frequency {
    #[serde(serialize_with = "render::serialize_decimal")]
    pub numerator: BigUint,
    #[serde(serialize_with = "render::serialize_decimal")]
    pub denominator: BigUint,
    /// Reduced `p/q`.
    pub rational: String,
    pub decimal: String,
}

impl Frequency {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        assert!(!denominator.is_zero());
        let r = BigRational::new(BigInt::from(numerator.clone()), BigInt::from(denominator.clone()));
        Frequency {
            rational: format!("{}/{}", r.numer(), r.denom()),
            decimal: decimal_ratio(&numerator, &denominator, 4),
            numerator,
            denominator,
        }
    }

    pub fn as_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator.clone()),
        )
    }
}

/// Share of valid configurations that contain `code`.
pub fn option_frequency(doc: &ProductDocumentation, code: &str, cfg: &CounterConfig) -> Result<Frequency, ConfigError> {
    let lit = doc.literal(code, true)?;
    let total = total_configurations(doc, cfg)?;
    let total = complete(&total)?;
    if total.is_zero() {
        return Err(ConfigError::DocumentationVoid);
    }
    let with = doc.count(&[], &[lit], cfg)?;
    Ok(Frequency::new(complete(&with)?.clone(), total.clone()))
}

pub fn part_inclusion_count(
    doc: &ProductDocumentation,
    position: &str,
    variant: &str,
    cfg: &CounterConfig,
) -> Result<CountResult, ConfigError> {
    let sel = doc.selection(position, variant)?;
    doc.count(&[sel], &[], cfg)
}

/// Number of configurations in which both selections hold.
pub fn overlap_count(
    doc: &ProductDocumentation,
    first: Formula,
    second: Formula,
    cfg: &CounterConfig,
) -> Result<CountResult, ConfigError> {
    doc.count(&[first, second], &[], cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantCount {
    pub variant: String,
    pub count: CountResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantOverlap {
    pub first: String,
    pub second: String,
    pub count: CountResult,
    /// Nonzero overlap: some valid order would install both parts.
    pub error: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PositionReport {
    pub position: String,
    pub has_null_variant: bool,
    pub variants: Vec<VariantCount>,
    pub overlaps: Vec<VariantOverlap>,
    pub errors: usize,
}

/// Per-variant inclusion counts and all pairwise overlaps of one position.
pub fn position_report(
    doc: &ProductDocumentation,
    position: &str,
    cfg: &CounterConfig,
) -> Result<PositionReport, ConfigError> {
    let pos = doc.position(position)?;
    let variants = pos
        .variants
        .iter()
        .map(|v| {
            Ok(VariantCount {
                variant: v.id.clone(),
                count: doc.count(&[v.selection], &[], cfg)?,
            })
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    let mut overlaps = Vec::new();
    for (i, a) in pos.variants.iter().enumerate() {
        for b in &pos.variants[i + 1..] {
            let count = overlap_count(doc, a.selection, b.selection, cfg)?;
            let error = count.count.as_ref().is_some_and(|n| !n.is_zero());
            overlaps.push(VariantOverlap {
                first: a.id.clone(),
                second: b.id.clone(),
                count,
                error,
            });
        }
    }
    Ok(PositionReport {
        position: pos.id.clone(),
        has_null_variant: pos.has_null_variant(),
        errors: overlaps.iter().filter(|o| o.error).count(),
        variants,
        overlaps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Redundancy {
    /// The count is unchanged, so every valid configuration already
    /// satisfies the candidate.
    RedundantCandidate {
        #[serde(serialize_with = "render::serialize_decimal")]
        count: BigUint,
    },
    CountChanged {
        #[serde(serialize_with = "render::serialize_decimal")]
        before: BigUint,
        #[serde(serialize_with = "render::serialize_decimal")]
        after: BigUint,
    },
}

pub fn redundancy_check(
    doc: &ProductDocumentation,
    candidate: Formula,
    cfg: &CounterConfig,
) -> Result<Redundancy, ConfigError> {
    let before = total_configurations(doc, cfg)?;
    let before = complete(&before)?.clone();
    let after = doc.count(&[candidate], &[], cfg)?;
    let after = complete(&after)?.clone();
    Ok(if before == after {
        Redundancy::RedundantCandidate { count: before }
    } else {
        Redundancy::CountChanged { before, after }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FrequencyDelta {
    pub code: String,
    pub first: Option<Frequency>,
    pub second: Option<Frequency>,
    /// `second - first`, rounded; absent when either side is unknown.
    pub delta: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QualityReport {
    /// Size of the union of both code sets; both counts range over it.
    pub union_size: usize,
    pub only_in_first: Vec<String>,
    pub only_in_second: Vec<String>,
    pub first: CountResult,
    pub second: CountResult,
    /// `first / second` when both counts are known and the second is nonzero.
    pub ratio: Option<Frequency>,
    pub deltas: Vec<FrequencyDelta>,
    pub status: CountStatus,
}

fn rescale(mut r: CountResult, union: usize) -> CountResult {
    let extra = union - r.scope_size;
    r.count = r.count.map(|n| n << extra);
    r.scope_size = union;
    r
}

fn names(doc: &ProductDocumentation) -> Vec<String> {
    doc.codes().iter().map(|&v| doc.code_name(v).to_string()).collect()
}

/// Compares two versions of a documentation over the union of their codes.
/// `codes` selects which per-code frequency deltas to report.
pub fn compare_versions(
    first: &ProductDocumentation,
    second: &ProductDocumentation,
    codes: &[&str],
    cfg: &CounterConfig,
) -> Result<QualityReport, ConfigError> {
    let a_names = names(first);
    let b_names = names(second);
    let a_set: HashSet<&str> = a_names.iter().map(String::as_str).collect();
    let b_set: HashSet<&str> = b_names.iter().map(String::as_str).collect();
    let only_in_first: Vec<String> = a_names.iter().filter(|n| !b_set.contains(n.as_str())).cloned().collect();
    let only_in_second: Vec<String> = b_names.iter().filter(|n| !a_set.contains(n.as_str())).cloned().collect();
    let union_size = a_names.len() + only_in_second.len();
    for c in codes {
        if !a_set.contains(c) && !b_set.contains(c) {
            return Err(ConfigError::UnknownCode(c.to_string()));
        }
    }

    let a = rescale(total_configurations(first, cfg)?, union_size);
    let b = rescale(total_configurations(second, cfg)?, union_size);
    let status = if a.is_complete() { b.status } else { a.status };
    let ratio = match (&a.count, &b.count) {
        (Some(x), Some(y)) if !y.is_zero() => Some(Frequency::new(x.clone(), y.clone())),
        _ => None,
    };
    let mut deltas = Vec::new();
    for &c in codes {
        let fa = union_frequency(first, c, &a, union_size, cfg)?;
        let fb = union_frequency(second, c, &b, union_size, cfg)?;
        let delta = match (&fa, &fb) {
            (Some(x), Some(y)) => Some(signed_decimal(&(y.as_rational() - x.as_rational()))),
            _ => None,
        };
        deltas.push(FrequencyDelta {
            code: c.to_string(),
            first: fa,
            second: fb,
            delta,
        });
    }
    Ok(QualityReport {
        union_size,
        only_in_first,
        only_in_second,
        first: a,
        second: b,
        ratio,
        deltas,
        status,
    })
}

/// Frequency of `code` among `doc`'s configurations over the union scope,
/// where `total` is `doc`'s rescaled total. A code `doc` does not declare is
/// free in it and has frequency 1/2.
fn union_frequency(
    doc: &ProductDocumentation,
    code: &str,
    total: &CountResult,
    union_size: usize,
    cfg: &CounterConfig,
) -> Result<Option<Frequency>, ConfigError> {
    let Some(total) = total.count.as_ref().filter(|n| !n.is_zero()) else {
        return Ok(None);
    };
    if doc.code(code).is_none() {
        return Ok(Some(Frequency::new(total >> 1u32, total.clone())));
    }
    let extra = union_size - doc.codes().len();
    let with = count_with_options(doc, &[(code, true)], cfg)?;
    Ok(with.count.map(|n| Frequency::new(n << extra, total.clone())))
}

fn signed_decimal(r: &BigRational) -> String {
    let num = r.numer().abs().to_biguint().expect("absolute value");
    let den = r.denom().to_biguint().expect("positive denominator");
    let body = decimal_ratio(&num, &den, 4);
    if r.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// A customer's chosen codes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Order {
    pub chosen: VarSet,
}

impl Order {
    /// Reads whitespace-separated code names.
    pub fn parse(doc: &ProductDocumentation, text: &str) -> Result<Order, ConfigError> {
        let names: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .collect();
        Self::from_codes(doc, &names)
    }

    pub fn from_codes(doc: &ProductDocumentation, names: &[&str]) -> Result<Order, ConfigError> {
        let mut chosen = VarSet::new();
        for n in names {
            chosen.insert(doc.code(n).ok_or_else(|| ConfigError::UnknownCode(n.to_string()))?);
        }
        Ok(Order { chosen })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderStatus {
    Constructible,
    Refused,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: OrderStatus,
    /// Chosen plus supplemented codes, in declaration order.
    pub supplemented: Vec<String>,
    /// Codes added by supplementary rules, in the order they were added.
    pub added: Vec<String>,
    /// Heads of failed constructibility conditions in file order; `true`
    /// for conditions that apply to every order.
    pub violated: Vec<String>,
}

impl Verdict {
    pub fn is_constructible(&self) -> bool {
        self.status == OrderStatus::Constructible
    }
}

/// Supplements the order with full passes over the supplementary rules in
/// file order until nothing changes, then checks the constructibility
/// conditions of every selected code and every `true`-headed condition.
/// Codes outside the order read as false throughout.
pub fn process_order(doc: &ProductDocumentation, order: &Order) -> Verdict {
    let store = doc.arena.store();
    let mut selected: HashSet<Var> = order.chosen.iter().collect();
    let mut added = Vec::new();
    loop {
        let mut changed = false;
        for rule in &doc.supplementary {
            if selected.contains(&rule.code) {
                continue;
            }
            let holds = store
                .evaluate_with(rule.condition, &|v| Some(selected.contains(&v)))
                .expect("closed-world evaluation is total");
            if holds {
                selected.insert(rule.code);
                added.push(doc.code_name(rule.code).to_string());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut violated = Vec::new();
    for c in &doc.constructibility {
        let name = match c.head {
            Head::Always => "true",
            Head::Code(v) if selected.contains(&v) => doc.code_name(v),
            Head::Code(_) => continue,
        };
        let holds = store
            .evaluate_with(c.condition, &|v| Some(selected.contains(&v)))
            .expect("closed-world evaluation is total");
        if !holds {
            violated.push(name.to_string());
        }
    }
    Verdict {
        status: if violated.is_empty() {
            OrderStatus::Constructible
        } else {
            OrderStatus::Refused
        },
        supplemented: doc
            .codes
            .iter()
            .filter(|v| selected.contains(v))
            .map(|&v| doc.code_name(v).to_string())
            .collect(),
        added,
        violated,
    }
}
