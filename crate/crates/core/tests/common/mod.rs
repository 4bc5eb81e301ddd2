//! Test-only oracles, kept independent of the library's algorithms.
#![allow(dead_code, clippy::needless_range_loop)]

use factorfree::{Dfa, StateId, Word};
use proptest::prelude::*;

/// Table-filling distinguishability: `marked[p][q]` iff some word separates
/// `p` and `q`. Indexed by state id, slot 0 unused.
pub fn distinguishability_table(d: &Dfa) -> Vec<Vec<bool>> {
    let n = d.n_states();
    let mut marked = vec![vec![false; n + 1]; n + 1];
    for p in 1..=n {
        for q in 1..=n {
            marked[p][q] = d.is_final(p) != d.is_final(q);
        }
    }
    loop {
        let mut changed = false;
        for p in 1..=n {
            for q in 1..=n {
                if marked[p][q] {
                    continue;
                }
                if (0..d.alphabet_size()).any(|s| marked[d.step(p, s)][d.step(q, s)]) {
                    marked[p][q] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return marked;
        }
    }
}

/// Reachable states by depth-first search from the start.
pub fn reachable_dfs(d: &Dfa) -> Vec<StateId> {
    let mut seen = vec![false; d.n_states() + 1];
    let mut stack = vec![d.start()];
    seen[d.start()] = true;
    let mut out = Vec::new();
    while let Some(q) = stack.pop() {
        out.push(q);
        for s in 0..d.alphabet_size() {
            let t = d.step(q, s);
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of indistinguishability classes among reachable states.
pub fn oracle_state_complexity(d: &Dfa) -> usize {
    let marked = distinguishability_table(d);
    let mut reps: Vec<StateId> = Vec::new();
    for q in reachable_dfs(d) {
        if reps.iter().all(|&r| marked[r][q]) {
            reps.push(q);
        }
    }
    reps.len()
}

/// All words over `k` symbols of length at most `max_len`, shortest first.
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<usize>::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * k);
        for w in &layer {
            for s in 0..k {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::from_symbols));
        layer = next;
    }
    out
}

/// Accepted words up to `max_len`, found by walking only through states
/// from which the remaining budget can still be spent.
pub fn accepted_words(d: &Dfa, max_len: usize) -> Vec<Word> {
    fn walk(d: &Dfa, q: StateId, w: &mut Vec<usize>, left: usize, out: &mut Vec<Word>) {
        if d.is_final(q) {
            out.push(Word::from_symbols(w.clone()));
        }
        if left == 0 || d.is_trap(q) {
            return;
        }
        for s in 0..d.alphabet_size() {
            w.push(s);
            walk(d, d.step(q, s), w, left - 1, out);
            w.pop();
        }
    }
    let mut out = Vec::new();
    walk(d, d.start(), &mut Vec::new(), max_len, &mut out);
    out
}

pub fn binary_dfa(n: usize, start: StateId, finals: &[bool], cells: &[StateId]) -> Dfa {
    let delta = cells.chunks(2).map(|c| c.to_vec()).collect();
    let finals = (1..=n).filter(|&q| finals[q - 1]);
    Dfa::new(vec!['a', 'b'], n, start, finals, delta).unwrap()
}

/// Random complete binary DFAs with 1..=max_states states.
pub fn arb_dfa(max_states: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_states).prop_flat_map(|n| {
        (
            1..=n,
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(1..=n, 2 * n),
        )
            .prop_map(move |(start, finals, cells)| binary_dfa(n, start, &finals, &cells))
    })
}

pub fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2usize, 0..=max_len).prop_map(Word::from_symbols)
}

pub fn word(d: &Dfa, text: &str) -> Word {
    d.parse_word(text).unwrap()
}
