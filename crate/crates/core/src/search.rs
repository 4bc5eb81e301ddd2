//! Exhaustive and random search over small binary factor-free DFAs.
//!
//! Reduced factor-free recognizers with more than one state have a start
//! state without incoming edges, a single final state, and a trap that
//! absorbs the final state. Up to isomorphism the start is 1, the final
//! state `k - 1` and the trap `k`, so only the rows of states
//! `1..=k-2` are free, and their targets range over `2..=k`.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfa::{Dfa, StateId};
use crate::error::{Error, Result};
use crate::factor_free::check_structural;
use crate::minimize::{is_reduced, minimize};
use crate::product::{product, BoolOp};
use crate::witness::{bound_conjectured, bound_paper};

pub const EXHAUSTIVE_MAX_STATES: usize = 6;
pub const RANDOM_MAX_STATES: usize = 64;

const ALPHABET: [char; 2] = ['a', 'b'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_states: usize,
    pub mode: SearchMode,
    /// Candidate pairs drawn in random mode.
    pub budget: usize,
    pub seed: u64,
    pub alphabet_size: usize,
}

impl SearchConfig {
    pub fn exhaustive(n_states: usize) -> Self {
        SearchConfig {
            n_states,
            mode: SearchMode::Exhaustive,
            budget: 1,
            seed: 0,
            alphabet_size: 2,
        }
    }

    pub fn random(n_states: usize, budget: usize, seed: u64) -> Self {
        SearchConfig {
            n_states,
            mode: SearchMode::Random,
            budget,
            seed,
            alphabet_size: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet_size != 2 {
            return Err(Error::Parameter(
                "search is only defined over a binary alphabet".into(),
            ));
        }
        if self.budget == 0 {
            return Err(Error::Parameter("budget must be at least 1".into()));
        }
        let max = match self.mode {
            SearchMode::Exhaustive => EXHAUSTIVE_MAX_STATES,
            SearchMode::Random => RANDOM_MAX_STATES,
        };
        if self.n_states < 2 || self.n_states > max {
            return Err(Error::Parameter(format!(
                "{:?} search supports 2..={max} states, got {}",
                self.mode, self.n_states
            )));
        }
        Ok(())
    }
}

/// One evaluated pair of operands.
#[derive(Clone, Debug)]
pub struct SearchRecord {
    pub left_id: usize,
    pub right_id: usize,
    pub left: Arc<Dfa>,
    pub right: Arc<Dfa>,
    pub union_complexity: usize,
    pub gap_conjectured: i64,
    pub gap_paper: i64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    /// Distinct canonical operands, sorted; `left_id`/`right_id` index here.
    pub candidates: Vec<Arc<Dfa>>,
    /// Sorted by union complexity descending, then by operand ids.
    pub records: Vec<SearchRecord>,
    /// Transition tables drawn (random mode) or enumerated (exhaustive).
    pub tables_examined: usize,
    /// Tables discarded by the reachability/reducedness/structural filter.
    pub tables_rejected: usize,
}

struct Shape {
    k: usize,
    free_states: Vec<StateId>,
}

impl Shape {
    fn new(k: usize) -> Self {
        Shape {
            k,
            free_states: (1..=k.saturating_sub(2)).collect(),
        }
    }

    fn free_cells(&self) -> usize {
        self.free_states.len() * ALPHABET.len()
    }

    /// `choices[i]` in `0..k-1` picks target `choices[i] + 2` for free cell `i`.
    fn build(&self, choices: &[usize]) -> Dfa {
        let k = self.k;
        let mut delta = vec![vec![k, k]; k];
        for (i, &q) in self.free_states.iter().enumerate() {
            for s in 0..ALPHABET.len() {
                delta[q - 1][s] = choices[i * ALPHABET.len() + s] + 2;
            }
        }
        Dfa::new(ALPHABET.to_vec(), k, 1, [k - 1], delta).expect("shape tables are valid")
    }
}

fn accept_candidate(dfa: &Dfa) -> Option<Dfa> {
    if dfa.reachable_order().len() != dfa.n_states() || !is_reduced(dfa) {
        return None;
    }
    match check_structural(dfa) {
        Ok(v) if v.is_factor_free() => Some(dfa.canonical_form()),
        _ => None,
    }
}

struct Enumeration {
    candidates: BTreeSet<Dfa>,
    examined: usize,
    rejected: usize,
}

fn enumerate(k: usize) -> Enumeration {
    let shape = Shape::new(k);
    let cells = shape.free_cells();
    let radix = k - 1;
    let total = radix.pow(cells as u32);
    let accepted: Vec<Dfa> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut choices = vec![0; cells];
            for c in choices.iter_mut() {
                *c = code % radix;
                code /= radix;
            }
            accept_candidate(&shape.build(&choices))
        })
        .collect();
    let rejected = total - accepted.len();
    Enumeration {
        candidates: accepted.into_iter().collect(),
        examined: total,
        rejected,
    }
}

/// Every reduced, complete, binary, `k`-state DFA recognizing a
/// factor-free language, once per isomorphism class, in canonical form and
/// sorted. Requires `2 <= k <= 6`.
pub fn enumerate_factor_free(k: usize) -> Result<Vec<Dfa>> {
    if !(2..=EXHAUSTIVE_MAX_STATES).contains(&k) {
        return Err(Error::Parameter(format!(
            "enumeration supports 2..={EXHAUSTIVE_MAX_STATES} states, got {k}"
        )));
    }
    Ok(enumerate(k).candidates.into_iter().collect())
}

/// Every complete binary DFA on `k` states with start state 1 and any set
/// of final states. Every complete DFA is isomorphic to one of these.
pub fn all_binary_dfas(k: usize) -> impl Iterator<Item = Dfa> {
    let cells = 2 * k;
    let tables = k.pow(cells as u32);
    let final_sets = 1usize << k;
    (0..tables).flat_map(move |mut code| {
        let mut delta = vec![vec![0; 2]; k];
        for row in delta.iter_mut() {
            for cell in row.iter_mut() {
                *cell = code % k + 1;
                code /= k;
            }
        }
        (0..final_sets).map(move |mask| {
            let finals = (1..=k).filter(|q| mask & (1 << (q - 1)) != 0);
            Dfa::new(ALPHABET.to_vec(), k, 1, finals, delta.clone())
                .expect("generated tables are complete")
        })
    })
}

fn union_complexity(left: &Dfa, right: &Dfa) -> usize {
    let p = product(left, right, BoolOp::Union).expect("search operands share an alphabet");
    minimize(&p.dfa).minimal.n_states()
}

/// Evaluate union complexities of candidate pairs and rank them.
///
/// The result is deterministic for a fixed configuration: pair evaluation
/// runs in parallel but the leaderboard is sorted after merging.
pub fn search(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let k = config.n_states;
    let (candidates, pairs, examined, rejected) = match config.mode {
        SearchMode::Exhaustive => {
            let e = enumerate(k);
            let candidates: Vec<Dfa> = e.candidates.into_iter().collect();
            let n = candidates.len();
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
            (candidates, pairs, e.examined, e.rejected)
        }
        SearchMode::Random => {
            let shape = Shape::new(k);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let draw = |rng: &mut ChaCha8Rng| {
                let choices: Vec<usize> = (0..shape.free_cells())
                    .map(|_| rng.gen_range(0..k - 1))
                    .collect();
                accept_candidate(&shape.build(&choices))
            };
            let mut drawn_pairs = Vec::with_capacity(config.budget);
            let mut rejected = 0;
            for _ in 0..config.budget {
                let left = draw(&mut rng);
                let right = draw(&mut rng);
                rejected += left.is_none() as usize + right.is_none() as usize;
                if let (Some(l), Some(r)) = (left, right) {
                    drawn_pairs.push((l, r));
                }
            }
            let candidates: Vec<Dfa> = drawn_pairs
                .iter()
                .flat_map(|(l, r)| [l.clone(), r.clone()])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let id = |d: &Dfa| candidates.binary_search(d).expect("candidate present");
            let pairs: Vec<(usize, usize)> = drawn_pairs
                .iter()
                .map(|(l, r)| (id(l), id(r)))
                .collect::<HashSet<_>>()
                .into_iter()
                .collect();
            (candidates, pairs, 2 * config.budget, rejected)
        }
    };

    let candidates: Vec<Arc<Dfa>> = candidates.into_iter().map(Arc::new).collect();
    let conjectured = bound_conjectured(k as i64, k as i64);
    let paper = bound_paper(k as i64, k as i64);
    let mut records: Vec<SearchRecord> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let sc = union_complexity(&candidates[i], &candidates[j]);
            SearchRecord {
                left_id: i,
                right_id: j,
                left: Arc::clone(&candidates[i]),
                right: Arc::clone(&candidates[j]),
                union_complexity: sc,
                gap_conjectured: sc as i64 - conjectured,
                gap_paper: sc as i64 - paper,
            }
        })
        .collect();
    records.sort_by(|a, b| {
        b.union_complexity
            .cmp(&a.union_complexity)
            .then(a.left_id.cmp(&b.left_id))
            .then(a.right_id.cmp(&b.right_id))
    });

    Ok(SearchOutcome {
        config: config.clone(),
        candidates,
        records,
        tables_examined: examined,
        tables_rejected: rejected,
    })
}

impl SearchOutcome {
    pub const CSV_HEADER: [&'static str; 8] = [
        "k",
        "left_id",
        "right_id",
        "union_sc",
        "bound_conjectured",
        "bound_paper",
        "gap_conjectured",
        "gap_paper",
    ];

    pub fn best(&self) -> Option<&SearchRecord> {
        self.records.first()
    }

    /// Write up to `limit` leaderboard rows as CSV (all rows if `None`).
    pub fn write_csv<W: Write>(&self, out: W, limit: Option<usize>) -> Result<()> {
        let k = self.config.n_states as i64;
        let conjectured = bound_conjectured(k, k);
        let paper = bound_paper(k, k);
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::CSV_HEADER)?;
        let limit = limit.unwrap_or(self.records.len());
        for r in self.records.iter().take(limit) {
            w.write_record([
                k.to_string(),
                r.left_id.to_string(),
                r.right_id.to_string(),
                r.union_complexity.to_string(),
                conjectured.to_string(),
                paper.to_string(),
                r.gap_conjectured.to_string(),
                r.gap_paper.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Write the operands of the top `top` records as interchange files
    /// `candidate_<id>.json` into `dir`. Returns the written paths.
    pub fn write_top_dfas(&self, dir: &Path, top: usize) -> Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let ids: BTreeSet<usize> = self
            .records
            .iter()
            .take(top)
            .flat_map(|r| [r.left_id, r.right_id])
            .collect();
        let mut paths = Vec::new();
        for id in ids {
            let path = dir.join(format!("candidate_{id}.json"));
            crate::io::write_dfa(&path, &self.candidates[id])?;
            paths.push(path);
        }
        Ok(paths)
    }
}
