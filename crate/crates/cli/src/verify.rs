//! Batch sweep over witness pairs for `verify-theorem`.

use std::ops::RangeInclusive;

use anyhow::{bail, Context, Result};
use factorfree::{
    make_a, make_b, minimize, product, theorem_formula, witness::THEOREM_MIN, BoolOp,
};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationRow {
    pub n: usize,
    pub m: usize,
    pub reachable: usize,
    pub minimal: usize,
    pub formula: i64,
    #[serde(rename = "match")]
    pub matches: bool,
    /// Only rows with `THEOREM_MIN <= n <= m` decide the exit status.
    pub asserted: bool,
    pub symdiff_minimal: usize,
}

pub const CSV_HEADER: [&str; 8] = [
    "n",
    "m",
    "reachable",
    "minimal",
    "formula",
    "match",
    "asserted",
    "symdiff_minimal",
];

impl VerificationRow {
    pub fn compute(n: usize, m: usize) -> Result<Self> {
        let a = make_a(n)?;
        let b = make_b(m)?;
        let union = product(&a, &b, BoolOp::Union)?;
        let minimal = minimize(&union.dfa).minimal.n_states();
        let symdiff = product(&a, &b, BoolOp::SymmetricDifference)?;
        let formula = theorem_formula(n as i64, m as i64);
        Ok(VerificationRow {
            n,
            m,
            reachable: union.pairs.len(),
            minimal,
            formula,
            matches: minimal as i64 == formula,
            asserted: THEOREM_MIN <= n && n <= m,
            symdiff_minimal: minimize(&symdiff.dfa).minimal.n_states(),
        })
    }

    pub fn record(&self) -> [String; 8] {
        [
            self.n.to_string(),
            self.m.to_string(),
            self.reachable.to_string(),
            self.minimal.to_string(),
            self.formula.to_string(),
            self.matches.to_string(),
            self.asserted.to_string(),
            self.symdiff_minimal.to_string(),
        ]
    }

    pub fn failed(&self) -> bool {
        self.asserted && !self.matches
    }
}

/// Rows in row-major order (n outer, m inner).
pub fn sweep(ns: RangeInclusive<usize>, ms: RangeInclusive<usize>) -> Result<Vec<VerificationRow>> {
    let mut rows = Vec::new();
    for n in ns {
        for m in ms.clone() {
            rows.push(
                VerificationRow::compute(n, m).with_context(|| format!("pair n={n}, m={m}"))?,
            );
        }
    }
    Ok(rows)
}

/// Accepts `10..14` and `10..=14` (both inclusive), or a single number.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let parse = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .with_context(|| format!("bad range bound {s:?}"))
    };
    let range = match text.split_once("..") {
        Some((lo, hi)) => parse(lo)?..=parse(hi.strip_prefix('=').unwrap_or(hi))?,
        None => {
            let v = parse(text)?;
            v..=v
        }
    };
    if range.is_empty() {
        bail!("empty range {text:?}");
    }
    Ok(range)
}
