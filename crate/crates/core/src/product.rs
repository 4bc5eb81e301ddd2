//! Reachable-only cross products for boolean operations, language
//! equivalence, and complexity reports.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dfa::{Dfa, StateId, Word};
use crate::error::{Error, Result};
use crate::minimize::minimize;
use crate::witness::{bound_conjectured, bound_paper, bound_ternary, theorem_formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    Union,
    Intersection,
    #[serde(rename = "symdiff")]
    SymmetricDifference,
    Difference,
}

impl BoolOp {
    pub const ALL: [BoolOp; 4] = [
        BoolOp::Union,
        BoolOp::Intersection,
        BoolOp::SymmetricDifference,
        BoolOp::Difference,
    ];

    pub fn apply(self, left: bool, right: bool) -> bool {
        match self {
            BoolOp::Union => left || right,
            BoolOp::Intersection => left && right,
            BoolOp::SymmetricDifference => left != right,
            BoolOp::Difference => left && !right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoolOp::Union => "union",
            BoolOp::Intersection => "intersection",
            BoolOp::SymmetricDifference => "symdiff",
            BoolOp::Difference => "difference",
        }
    }
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoolOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "union" => Ok(BoolOp::Union),
            "intersection" => Ok(BoolOp::Intersection),
            "symdiff" | "symmetric-difference" => Ok(BoolOp::SymmetricDifference),
            "difference" => Ok(BoolOp::Difference),
            other => Err(Error::Parameter(format!("unknown boolean mode {other:?}"))),
        }
    }
}

/// A state `(p, q)` of a cross product: `p` from the left operand, `q` from
/// the right one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairState {
    pub left: StateId,
    pub right: StateId,
}

impl PairState {
    pub fn new(left: StateId, right: StateId) -> Self {
        PairState { left, right }
    }
}

impl fmt::Display for PairState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

/// A product automaton together with the pair each of its states stands for.
#[derive(Clone, Debug)]
pub struct Product {
    pub dfa: Dfa,
    pub op: BoolOp,
    /// `pairs[i]` is product state `i + 1`, in breadth-first discovery order.
    pub pairs: Vec<PairState>,
}

impl Product {
    pub fn pair(&self, q: StateId) -> PairState {
        self.pairs[q - 1]
    }

    pub fn state_of(&self, pair: PairState) -> Option<StateId> {
        self.pairs.iter().position(|&p| p == pair).map(|i| i + 1)
    }

    pub fn pair_index(&self) -> BTreeMap<PairState, StateId> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i + 1))
            .collect()
    }

    pub fn final_pairs(&self) -> Vec<PairState> {
        self.dfa.finals().map(|q| self.pair(q)).collect()
    }

    pub fn to_dot(&self) -> String {
        crate::io::to_dot_labeled(&self.dfa, |q| {
            let p = self.pair(q);
            format!("{},{}", p.left, p.right)
        })
    }
}

struct Exploration {
    pairs: Vec<PairState>,
    // parent[i] = (index of predecessor pair, symbol); None for the start pair
    parent: Vec<Option<(usize, usize)>>,
    delta: Vec<StateId>,
}

fn check_alphabets(d1: &Dfa, d2: &Dfa) -> Result<()> {
    if d1.alphabet() != d2.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: d1.alphabet().to_vec(),
            right: d2.alphabet().to_vec(),
        });
    }
    Ok(())
}

fn explore(d1: &Dfa, d2: &Dfa) -> Exploration {
    let k = d1.alphabet_size();
    let start = PairState::new(d1.start(), d2.start());
    let mut index: HashMap<PairState, usize> = HashMap::new();
    let mut pairs = vec![start];
    let mut parent = vec![None];
    let mut delta = Vec::new();
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let p = pairs[i];
        for s in 0..k {
            let next = PairState::new(d1.step(p.left, s), d2.step(p.right, s));
            let j = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                parent.push(Some((i, s)));
                queue.push_back(pairs.len() - 1);
                pairs.len() - 1
            });
            delta.push(j + 1);
        }
    }
    Exploration {
        pairs,
        parent,
        delta,
    }
}

/// Cross product of `d1` and `d2` restricted to pairs reachable from the
/// start pair. A pair is final when `op` holds of its components' finality.
pub fn product(d1: &Dfa, d2: &Dfa, op: BoolOp) -> Result<Product> {
    check_alphabets(d1, d2)?;
    let ex = explore(d1, d2);
    let finals = ex
        .pairs
        .iter()
        .map(|p| op.apply(d1.is_final(p.left), d2.is_final(p.right)))
        .collect();
    Ok(Product {
        dfa: Dfa::from_parts(d1.alphabet().to_vec(), 1, finals, ex.delta),
        op,
        pairs: ex.pairs,
    })
}

/// A shortest word accepted by exactly one of the two automata, or `None`
/// if they recognize the same language.
pub fn distinguishing_word(d1: &Dfa, d2: &Dfa) -> Result<Option<Word>> {
    check_alphabets(d1, d2)?;
    let ex = explore(d1, d2);
    let hit = ex
        .pairs
        .iter()
        .position(|p| d1.is_final(p.left) != d2.is_final(p.right));
    Ok(hit.map(|mut i| {
        let mut symbols = Vec::new();
        while let Some((prev, s)) = ex.parent[i] {
            symbols.push(s);
            i = prev;
        }
        symbols.reverse();
        Word::from_symbols(symbols)
    }))
}

pub fn language_equivalent(d1: &Dfa, d2: &Dfa) -> Result<bool> {
    Ok(distinguishing_word(d1, d2)?.is_none())
}

/// Bound formulas evaluated at the operand sizes, and the gap
/// `minimal_count - bound` for each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTable {
    pub conjectured: i64,
    pub paper: i64,
    pub ternary: i64,
    /// `mn - (m + n) - 2 - floor((n - 2) / 2)` with `n` the left operand size.
    pub theorem: i64,
    pub gap_conjectured: i64,
    pub gap_paper: i64,
    pub gap_ternary: i64,
    pub gap_theorem: i64,
}

impl BoundTable {
    pub fn new(n_left: usize, n_right: usize, minimal: usize) -> Self {
        let (n, m) = (n_left as i64, n_right as i64);
        let minimal = minimal as i64;
        let conjectured = bound_conjectured(m, n);
        let paper = bound_paper(m, n);
        let ternary = bound_ternary(m, n);
        let theorem = theorem_formula(n, m);
        BoundTable {
            conjectured,
            paper,
            ternary,
            theorem,
            gap_conjectured: minimal - conjectured,
            gap_paper: minimal - paper,
            gap_ternary: minimal - ternary,
            gap_theorem: minimal - theorem,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexityReport {
    /// State complexity of the left operand.
    pub n_left: usize,
    /// State complexity of the right operand.
    pub n_right: usize,
    pub mode: BoolOp,
    pub reachable_count: usize,
    pub minimal_count: usize,
    /// Reachable pairs of the product of the minimized operands; pair `i`
    /// is product state `i + 1`.
    pub pairs: Vec<PairState>,
    pub bound_table: BoundTable,
}

impl ComplexityReport {
    pub const CSV_HEADER: [&'static str; 8] = [
        "n",
        "m",
        "mode",
        "reachable",
        "minimal",
        "bound_conjectured",
        "bound_paper",
        "bound_ternary",
    ];

    pub fn pair_index(&self) -> BTreeMap<PairState, StateId> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i + 1))
            .collect()
    }

    pub fn csv_record(&self) -> [String; 8] {
        [
            self.n_left.to_string(),
            self.n_right.to_string(),
            self.mode.to_string(),
            self.reachable_count.to_string(),
            self.minimal_count.to_string(),
            self.bound_table.conjectured.to_string(),
            self.bound_table.paper.to_string(),
            self.bound_table.ternary.to_string(),
        ]
    }

    /// The report as a single CSV line without a trailing newline.
    pub fn csv_row(&self) -> String {
        self.csv_record().join(",")
    }
}

/// Minimize both operands, build their product under `op`, and compare the
/// product's state complexity against the bound formulas.
pub fn complexity_report(d1: &Dfa, d2: &Dfa, op: BoolOp) -> Result<ComplexityReport> {
    check_alphabets(d1, d2)?;
    let left = minimize(d1).minimal;
    let right = minimize(d2).minimal;
    let prod = product(&left, &right, op)?;
    let minimal_count = minimize(&prod.dfa).minimal.n_states();
    Ok(ComplexityReport {
        n_left: left.n_states(),
        n_right: right.n_states(),
        mode: op,
        reachable_count: prod.pairs.len(),
        minimal_count,
        bound_table: BoundTable::new(left.n_states(), right.n_states(), minimal_count),
        pairs: prod.pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // minimal DFA of "words ending in a" and of "words of even length"
    fn ends_in_a() -> Dfa {
        Dfa::new(vec!['a', 'b'], 2, 1, [2], vec![vec![2, 1], vec![2, 1]]).unwrap()
    }

    fn even_length() -> Dfa {
        Dfa::new(vec!['a', 'b'], 2, 1, [1], vec![vec![2, 2], vec![1, 1]]).unwrap()
    }

    #[test]
    fn modes_follow_truth_tables() {
        for op in BoolOp::ALL {
            let p = product(&ends_in_a(), &even_length(), op).unwrap();
            assert_eq!(p.pairs.len(), 4);
            for q in p.dfa.states() {
                let pair = p.pair(q);
                assert_eq!(
                    p.dfa.is_final(q),
                    op.apply(
                        ends_in_a().is_final(pair.left),
                        even_length().is_final(pair.right)
                    )
                );
            }
        }
    }

    #[test]
    fn alphabet_mismatch() {
        let other = Dfa::new(vec!['a', 'c'], 1, 1, [], vec![vec![1, 1]]).unwrap();
        assert!(matches!(
            product(&ends_in_a(), &other, BoolOp::Union),
            Err(Error::AlphabetMismatch { .. })
        ));
        assert!(language_equivalent(&ends_in_a(), &other).is_err());
    }

    #[test]
    fn shortest_distinguishing_word() {
        let w = distinguishing_word(&ends_in_a(), &even_length())
            .unwrap()
            .unwrap();
        // ε is in the even-length language only
        assert!(w.is_empty());
        assert!(language_equivalent(&ends_in_a(), &ends_in_a()).unwrap());
    }

    #[test]
    fn mode_parsing() {
        for op in BoolOp::ALL {
            assert_eq!(op.name().parse::<BoolOp>().unwrap(), op);
        }
        assert!("xor".parse::<BoolOp>().is_err());
    }

    #[test]
    fn csv_row_layout() {
        let r = complexity_report(&ends_in_a(), &even_length(), BoolOp::Union).unwrap();
        assert_eq!(r.csv_record().len(), ComplexityReport::CSV_HEADER.len());
        assert!(r.csv_row().starts_with("2,2,union,4,"));
        assert!(r.minimal_count <= r.reachable_count);
        assert_eq!(r.pair_index()[&PairState::new(1, 1)], 1);
    }
}
