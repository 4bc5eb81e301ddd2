//! Complete deterministic automata with 1-based state ids.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A state of a [`Dfa`]. Ids run from 1 to `n_states` inclusive.
pub type StateId = usize;

/// A word over a DFA's alphabet, stored as symbol indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of occurrences of `symbol` in the word.
    pub fn letter_count(&self, symbol: usize) -> usize {
        self.0.iter().filter(|&&s| s == symbol).count()
    }

    pub fn push(&mut self, symbol: usize) {
        self.0.push(symbol);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    /// The factor covering symbol positions `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Render the word with the given alphabet; the empty word renders as `ε`.
    pub fn render(&self, alphabet: &[char]) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        self.0
            .iter()
            .map(|&s| alphabet.get(s).copied().unwrap_or('?'))
            .collect()
    }
}

impl From<Vec<usize>> for Word {
    fn from(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }
}

/// A complete DFA over an ordered alphabet.
///
/// The transition table is total: every (state, symbol) cell holds a state
/// id in range. All values are immutable once constructed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dfa {
    alphabet: Vec<char>,
    n_states: usize,
    start: StateId,
    finals: Vec<bool>,
    // row-major, (q - 1) * k + symbol
    delta: Vec<StateId>,
}

impl Dfa {
    /// Build a DFA, validating completeness and ranges.
    ///
    /// `delta[i][j]` is the target of state `i + 1` on `alphabet[j]`.
    pub fn new(
        alphabet: Vec<char>,
        n_states: usize,
        start: StateId,
        finals: impl IntoIterator<Item = StateId>,
        delta: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::InvalidDfa("alphabet must not be empty".into()));
        }
        let distinct: BTreeSet<char> = alphabet.iter().copied().collect();
        if distinct.len() != alphabet.len() {
            return Err(Error::InvalidDfa(
                "alphabet symbols must be distinct".into(),
            ));
        }
        if n_states == 0 {
            return Err(Error::InvalidDfa("a DFA needs at least one state".into()));
        }
        check_state(start, n_states)?;
        let mut final_flags = vec![false; n_states];
        for f in finals {
            check_state(f, n_states)?;
            final_flags[f - 1] = true;
        }
        if delta.len() != n_states {
            return Err(Error::InvalidDfa(format!(
                "transition table has {} rows, expected {}",
                delta.len(),
                n_states
            )));
        }
        let k = alphabet.len();
        let mut flat = Vec::with_capacity(n_states * k);
        for (i, row) in delta.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidDfa(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    k
                )));
            }
            for &t in row {
                check_state(t, n_states)?;
                flat.push(t);
            }
        }
        Ok(Dfa {
            alphabet,
            n_states,
            start,
            finals: final_flags,
            delta: flat,
        })
    }

    /// Internal constructor for tables already known to be valid.
    pub(crate) fn from_parts(
        alphabet: Vec<char>,
        start: StateId,
        finals: Vec<bool>,
        delta: Vec<StateId>,
    ) -> Self {
        let n_states = finals.len();
        debug_assert_eq!(delta.len(), n_states * alphabet.len());
        debug_assert!(delta.iter().all(|&t| t >= 1 && t <= n_states));
        Dfa {
            alphabet,
            n_states,
            start,
            finals,
            delta,
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn states(&self) -> std::ops::RangeInclusive<StateId> {
        1..=self.n_states
    }

    pub fn is_final(&self, q: StateId) -> bool {
        q >= 1 && q <= self.n_states && self.finals[q - 1]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| i + 1)
    }

    /// Single transition. Panics on out-of-range input; use [`Dfa::run`]
    /// for checked access.
    #[inline]
    pub fn step(&self, q: StateId, symbol: usize) -> StateId {
        self.delta[(q - 1) * self.alphabet.len() + symbol]
    }

    /// The transition row of `q`, one target per alphabet symbol.
    pub fn row(&self, q: StateId) -> &[StateId] {
        let k = self.alphabet.len();
        &self.delta[(q - 1) * k..q * k]
    }

    pub fn symbol_index(&self, c: char) -> Option<usize> {
        self.alphabet.iter().position(|&a| a == c)
    }

    /// Parse a word written with alphabet characters. `""` and `"ε"` denote
    /// the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text == "ε" {
            return Ok(Word::empty());
        }
        text.chars()
            .map(|c| self.symbol_index(c).ok_or(Error::UnknownSymbol(c)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.alphabet)
    }

    /// Extended transition function: the state reached from `from` after
    /// reading `w`.
    pub fn run(&self, from: StateId, w: &Word) -> Result<StateId> {
        check_state(from, self.n_states)?;
        let k = self.alphabet.len();
        let mut q = from;
        for &s in w.symbols() {
            if s >= k {
                return Err(Error::SymbolOutOfRange {
                    symbol: s,
                    alphabet_size: k,
                });
            }
            q = self.step(q, s);
        }
        Ok(q)
    }

    pub fn accepts(&self, w: &Word) -> Result<bool> {
        Ok(self.is_final(self.run(self.start, w)?))
    }

    /// Whether `w` leads from `from` to a final state.
    pub fn accepts_from(&self, from: StateId, w: &Word) -> Result<bool> {
        Ok(self.is_final(self.run(from, w)?))
    }

    /// Reachable states listed in breadth-first discovery order, scanning
    /// symbols in alphabet order.
    pub fn reachable_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.n_states + 1];
        let mut order = Vec::with_capacity(self.n_states);
        let mut queue = VecDeque::new();
        seen[self.start] = true;
        queue.push_back(self.start);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &t in self.row(q) {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    pub fn reachable_states(&self) -> BTreeSet<StateId> {
        self.reachable_order().into_iter().collect()
    }

    /// States from which no final state can be reached.
    pub fn empty_states(&self) -> BTreeSet<StateId> {
        let live = self.co_reachable();
        self.states().filter(|&q| !live[q]).collect()
    }

    /// `live[q]` is true iff some word leads from `q` to a final state.
    /// Indexed by state id; slot 0 is unused.
    pub(crate) fn co_reachable(&self) -> Vec<bool> {
        let k = self.alphabet.len();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); self.n_states + 1];
        for q in self.states() {
            for s in 0..k {
                preds[self.step(q, s)].push(q);
            }
        }
        let mut live = vec![false; self.n_states + 1];
        let mut stack: Vec<StateId> = self.finals().collect();
        for &f in &stack {
            live[f] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// A trap is a non-final state that every symbol maps to itself.
    pub fn is_trap(&self, q: StateId) -> bool {
        q >= 1 && q <= self.n_states && !self.is_final(q) && self.row(q).iter().all(|&t| t == q)
    }

    pub fn traps(&self) -> Vec<StateId> {
        self.states().filter(|&q| self.is_trap(q)).collect()
    }

    /// Number of transitions entering `q`, counting self-loops.
    pub fn indegree(&self, q: StateId) -> usize {
        self.delta.iter().filter(|&&t| t == q).count()
    }

    /// Relabel the reachable part in breadth-first discovery order starting
    /// from the start state. Unreachable states are dropped; the result's
    /// start state is 1. Two DFAs have equal canonical forms iff their
    /// reachable parts are isomorphic.
    pub fn canonical_form(&self) -> Dfa {
        let order = self.reachable_order();
        let mut new_id = vec![0usize; self.n_states + 1];
        for (i, &q) in order.iter().enumerate() {
            new_id[q] = i + 1;
        }
        let k = self.alphabet.len();
        let mut delta = Vec::with_capacity(order.len() * k);
        let mut finals = Vec::with_capacity(order.len());
        for &q in &order {
            finals.push(self.is_final(q));
            delta.extend(self.row(q).iter().map(|&t| new_id[t]));
        }
        Dfa::from_parts(self.alphabet.clone(), 1, finals, delta)
    }

    /// Apply a state permutation: state `q` becomes `perm[q - 1]`.
    pub fn relabel(&self, perm: &[StateId]) -> Result<Dfa> {
        let n = self.n_states;
        let targets: BTreeSet<StateId> = perm.iter().copied().collect();
        if perm.len() != n || targets.len() != n || targets.iter().any(|&t| t < 1 || t > n) {
            return Err(Error::InvalidDfa(format!(
                "relabeling must be a permutation of 1..={n}"
            )));
        }
        let k = self.alphabet.len();
        let mut delta = vec![0; n * k];
        let mut finals = vec![false; n];
        for q in self.states() {
            let nq = perm[q - 1];
            finals[nq - 1] = self.is_final(q);
            for s in 0..k {
                delta[(nq - 1) * k + s] = perm[self.step(q, s) - 1];
            }
        }
        Ok(Dfa::from_parts(
            self.alphabet.clone(),
            perm[self.start - 1],
            finals,
            delta,
        ))
    }

    /// Transition table as rows, the same layout [`Dfa::new`] accepts.
    pub fn table(&self) -> Vec<Vec<StateId>> {
        self.states().map(|q| self.row(q).to_vec()).collect()
    }
}

fn check_state(q: StateId, n_states: usize) -> Result<()> {
    if q == 0 || q > n_states {
        Err(Error::StateOutOfRange { state: q, n_states })
    } else {
        Ok(())
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finals: Vec<String> = self.finals().map(|q| q.to_string()).collect();
        writeln!(
            f,
            "states: {}, start: {}, finals: {{{}}}",
            self.n_states,
            self.start,
            finals.join(",")
        )?;
        for q in self.states() {
            let cells: Vec<String> = self
                .alphabet
                .iter()
                .zip(self.row(q))
                .map(|(c, t)| format!("{c}->{t}"))
                .collect();
            writeln!(f, "  {q}: {}", cells.join(" "))?;
        }
        Ok(())
    }
}
