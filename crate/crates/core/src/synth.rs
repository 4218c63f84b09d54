//! Seeded generators for synthetic inputs: block-structured documentation
//! whose configuration count is known in closed form, and random clause sets
//! that are hard for the counter.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A generated rules file and its exact number of valid configurations.
#[derive(Clone, Debug)]
pub struct SyntheticDocumentation {
    pub text: String,
    pub code_count: usize,
    pub block_count: usize,
    pub expected_total: BigUint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    /// One code with no rules.
    Free,
    /// Exactly one of `k` codes.
    ExactlyOne(usize),
    /// At most one of `k` codes.
    AtMostOne(usize),
    /// `c1 -> c2 -> ... -> ck` as constructibility conditions.
    Chain(usize),
    /// `c1 -> c2 -> c3` as supplementary rules.
    Supplements,
    /// `c1 -> c2 | c3`.
    Requires,
    /// Three mutually exclusive engines, two exclusive gearboxes and three
    /// accessories wired together by supplementary rules.
    Drivetrain,
}

impl Block {
    fn size(self) -> usize {
        match self {
            Block::Free => 1,
            Block::ExactlyOne(k) | Block::AtMostOne(k) | Block::Chain(k) => k,
            Block::Supplements | Block::Requires => 3,
            Block::Drivetrain => 8,
        }
    }

    fn count(self) -> u64 {
        match self {
            Block::Free => 2,
            Block::ExactlyOne(k) => k as u64,
            Block::AtMostOne(k) | Block::Chain(k) => k as u64 + 1,
            Block::Supplements => 4,
            Block::Requires => 7,
            Block::Drivetrain => 16,
        }
    }

    fn random(rng: &mut ChaCha8Rng) -> Block {
        match rng.random_range(0..7) {
            0 => Block::Free,
            1 => Block::ExactlyOne(rng.random_range(2..=6)),
            2 => Block::AtMostOne(rng.random_range(2..=5)),
            3 => Block::Chain(rng.random_range(2..=6)),
            4 => Block::Supplements,
            5 => Block::Requires,
            _ => Block::Drivetrain,
        }
    }

    fn write(self, c: &[String], out: &mut String) {
        let others = |i: usize| {
            c.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, n)| format!("!{n}"))
                .collect::<Vec<_>>()
                .join(" & ")
        };
        match self {
            Block::Free => {}
            Block::ExactlyOne(_) | Block::AtMostOne(_) => {
                if let Block::ExactlyOne(_) = self {
                    let _ = writeln!(out, "cc: true -> {}", c.join(" | "));
                }
                for (i, n) in c.iter().enumerate() {
                    let _ = writeln!(out, "cc: {n} -> {}", others(i));
                }
            }
            Block::Chain(_) => {
                for w in c.windows(2) {
                    let _ = writeln!(out, "cc: {} -> {}", w[0], w[1]);
                }
            }
            Block::Supplements => {
                let _ = writeln!(out, "sr: {} -> {}", c[0], c[1]);
                let _ = writeln!(out, "sr: {} -> {}", c[1], c[2]);
            }
            Block::Requires => {
                let _ = writeln!(out, "cc: {} -> {} | {}", c[0], c[1], c[2]);
            }
            Block::Drivetrain => {
                let (e, g, a) = (&c[0..3], &c[3..5], &c[5..8]);
                let _ = writeln!(out, "sr: {} -> {}", e[0], g[0]);
                let _ = writeln!(out, "sr: {} -> {}", e[1], g[1]);
                let _ = writeln!(out, "sr: {} & {} -> {}", e[2], g[0], a[1]);
                let _ = writeln!(out, "sr: {} & {} -> {}", e[2], g[1], a[2]);
                let _ = writeln!(out, "cc: true -> {} | {} | {}", e[0], e[1], e[2]);
                for i in 0..3 {
                    let rest: Vec<String> = (0..3).filter(|&j| j != i).map(|j| format!("!{}", e[j])).collect();
                    let _ = writeln!(out, "cc: {} -> {}", e[i], rest.join(" & "));
                }
                let _ = writeln!(out, "cc: true -> {} | {}", g[0], g[1]);
                let _ = writeln!(out, "cc: {} -> !{}", g[0], g[1]);
                let _ = writeln!(out, "cc: {} -> !{}", g[1], g[0]);
                let _ = writeln!(out, "cc: {} -> !{}", a[1], a[2]);
            }
        }
    }
}

/// Generates a documentation with exactly `code_count` codes split into
/// variable-disjoint blocks. Codes are named `b<block>_<index>`.
pub fn synthetic_documentation(code_count: usize, seed: u64) -> SyntheticDocumentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();
    let mut used = 0;
    while used < code_count {
        let mut b = Block::random(&mut rng);
        if used + b.size() > code_count {
            b = Block::Free;
        }
        used += b.size();
        blocks.push(b);
    }

    let mut codes = String::new();
    let mut rules = String::new();
    let mut expected = BigUint::from(1u32);
    for (i, &b) in blocks.iter().enumerate() {
        let names: Vec<String> = (0..b.size()).map(|j| format!("b{i}_{j}")).collect();
        let _ = writeln!(codes, "codes: {}", names.join(" "));
        b.write(&names, &mut rules);
        expected *= b.count();
    }
    SyntheticDocumentation {
        text: format!("{codes}{rules}"),
        code_count,
        block_count: blocks.len(),
        expected_total: expected,
    }
}

/// A random `width`-literal clause set over `x1..x<vars>` written in the
/// formula syntax, one clause per line joined with `&`.
pub fn random_clauses(vars: usize, clauses: usize, width: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..clauses {
        let lits: Vec<String> = (0..width)
            .map(|_| {
                let v = rng.random_range(1..=vars);
                if rng.random_bool(0.5) {
                    format!("x{v}")
                } else {
                    format!("!x{v}")
                }
            })
            .collect();
        let sep = if i + 1 < clauses { " &" } else { "" };
        let _ = writeln!(out, "({}){sep}", lits.join(" | "));
    }
    out
}
