//! Deciding factor-freeness.
//!
//! A language is factor-free when `u ∈ L` and `xuy ∈ L` force `x = y = ε`.
//! Three independent procedures are provided:
//!
//! * [`check_structural`] tests the four structural conditions that
//!   characterize reduced recognizers of factor-free languages: the start
//!   state has no incoming edges; there is exactly one final state; a trap
//!   distinct from it absorbs every transition leaving the final state; and
//!   no accepted word leads from a non-start state anywhere but the trap.
//! * [`check_semantic`] decides emptiness of `{xuy ∈ L : u ∈ L, xy ≠ ε}`
//!   exactly, by a shortest-path search over (whole-word run, phase, flag)
//!   configurations.
//! * [`check_bruteforce`] explores every word up to a length bound.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::dfa::{Dfa, StateId, Word};
use crate::error::{Error, Result};
use crate::minimize::is_reduced;

/// A factorization `xuy` with `u` and `xuy` both accepted and `xy ≠ ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub x: Word,
    pub u: Word,
    pub y: Word,
}

impl Decomposition {
    pub fn word(&self) -> Word {
        self.x.concat(&self.u).concat(&self.y)
    }

    /// Re-check the decomposition against `dfa` by direct runs.
    pub fn validate(&self, dfa: &Dfa) -> Result<bool> {
        Ok((!self.x.is_empty() || !self.y.is_empty())
            && dfa.accepts(&self.u)?
            && dfa.accepts(&self.word())?)
    }
}

/// Which structural condition failed, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralFailure {
    /// (i) an edge enters the start state.
    StartIndegree { from: StateId, symbol: usize },
    /// (ii) the final states, when there is not exactly one.
    FinalCount { finals: Vec<StateId> },
    /// (iii) no trap other than the final state exists.
    NoTrap { final_state: StateId },
    /// (iii) a transition out of the final state misses the trap.
    FinalEscapesTrap {
        trap: StateId,
        symbol: usize,
        target: StateId,
    },
    /// (iv) the accepted word `word` leads from `state` to the non-trap
    /// `reached`.
    InnerOccurrence {
        state: StateId,
        word: Word,
        reached: StateId,
    },
}

impl StructuralFailure {
    pub fn condition(&self) -> &'static str {
        match self {
            StructuralFailure::StartIndegree { .. } => "i",
            StructuralFailure::FinalCount { .. } => "ii",
            StructuralFailure::NoTrap { .. } | StructuralFailure::FinalEscapesTrap { .. } => "iii",
            StructuralFailure::InnerOccurrence { .. } => "iv",
        }
    }

    pub fn describe(&self, dfa: &Dfa) -> String {
        let sym = |s: usize| dfa.alphabet()[s];
        match self {
            StructuralFailure::StartIndegree { from, symbol } => format!(
                "start state {} has an incoming edge {from} --{}--> {}",
                dfa.start(),
                sym(*symbol),
                dfa.start()
            ),
            StructuralFailure::FinalCount { finals } => {
                format!("expected exactly one final state, found {finals:?}")
            }
            StructuralFailure::NoTrap { final_state } => {
                format!("no trap state distinct from final state {final_state}")
            }
            StructuralFailure::FinalEscapesTrap {
                trap,
                symbol,
                target,
            } => {
                let qf = dfa.finals().next().unwrap_or(0);
                format!(
                    "final state {qf} --{}--> {target}, expected trap {trap}",
                    sym(*symbol)
                )
            }
            StructuralFailure::InnerOccurrence {
                state,
                word,
                reached,
            } => format!(
                "accepted word {} leads from state {state} to {reached}, not the trap",
                dfa.render_word(word)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Structural(StructuralFailure),
    Decomposition(Decomposition),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorFreeVerdict {
    pub failure: Option<Failure>,
}

/// Serializable view of a verdict with words rendered as strings.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerdictReport {
    pub factor_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
}

impl FactorFreeVerdict {
    pub fn factor_free() -> Self {
        FactorFreeVerdict { failure: None }
    }

    fn structural(failure: StructuralFailure) -> Self {
        FactorFreeVerdict {
            failure: Some(Failure::Structural(failure)),
        }
    }

    fn decomposition(d: Decomposition) -> Self {
        FactorFreeVerdict {
            failure: Some(Failure::Decomposition(d)),
        }
    }

    pub fn is_factor_free(&self) -> bool {
        self.failure.is_none()
    }

    pub fn condition(&self) -> Option<&'static str> {
        match &self.failure {
            Some(Failure::Structural(f)) => Some(f.condition()),
            _ => None,
        }
    }

    pub fn decomposition_witness(&self) -> Option<&Decomposition> {
        match &self.failure {
            Some(Failure::Decomposition(d)) => Some(d),
            _ => None,
        }
    }

    pub fn report(&self, dfa: &Dfa) -> VerdictReport {
        let mut report = VerdictReport {
            factor_free: self.is_factor_free(),
            condition: None,
            detail: None,
            state: None,
            word: None,
            x: None,
            u: None,
            y: None,
        };
        match &self.failure {
            None => {}
            Some(Failure::Structural(f)) => {
                report.condition = Some(f.condition().to_string());
                report.detail = Some(f.describe(dfa));
                if let StructuralFailure::InnerOccurrence { state, word, .. } = f {
                    report.state = Some(*state);
                    report.word = Some(dfa.render_word(word));
                }
            }
            Some(Failure::Decomposition(d)) => {
                report.word = Some(dfa.render_word(&d.word()));
                report.x = Some(dfa.render_word(&d.x));
                report.u = Some(dfa.render_word(&d.u));
                report.y = Some(dfa.render_word(&d.y));
            }
        }
        report
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factor_free {
            return f.write_str("factor-free");
        }
        f.write_str("not factor-free")?;
        if let Some(c) = &self.condition {
            write!(f, ": condition ({c}) fails")?;
        }
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        if let (Some(x), Some(u), Some(y)) = (&self.x, &self.u, &self.y) {
            write!(f, ": x={x} u={u} y={y}")?;
        }
        Ok(())
    }
}

/// Check the structural characterization. The input must be reduced and
/// have more than one state; otherwise a precondition error is returned.
pub fn check_structural(dfa: &Dfa) -> Result<FactorFreeVerdict> {
    if dfa.n_states() < 2 {
        return Err(Error::Precondition(
            "structural check needs more than one state".into(),
        ));
    }
    if !is_reduced(dfa) {
        return Err(Error::Precondition(
            "structural check needs a reduced automaton; minimize first".into(),
        ));
    }
    let k = dfa.alphabet_size();
    let start = dfa.start();

    for q in dfa.states() {
        for s in 0..k {
            if dfa.step(q, s) == start {
                return Ok(FactorFreeVerdict::structural(
                    StructuralFailure::StartIndegree { from: q, symbol: s },
                ));
            }
        }
    }

    let finals: Vec<StateId> = dfa.finals().collect();
    if finals.len() != 1 {
        return Ok(FactorFreeVerdict::structural(
            StructuralFailure::FinalCount { finals },
        ));
    }
    let qf = finals[0];

    // a reduced automaton has at most one trap, and it is never final
    let Some(trap) = dfa.traps().into_iter().next() else {
        return Ok(FactorFreeVerdict::structural(StructuralFailure::NoTrap {
            final_state: qf,
        }));
    };
    for s in 0..k {
        let target = dfa.step(qf, s);
        if target != trap {
            return Ok(FactorFreeVerdict::structural(
                StructuralFailure::FinalEscapesTrap {
                    trap,
                    symbol: s,
                    target,
                },
            ));
        }
    }

    // (iv): search pairs (run from start, run from p) for p != start until the
    // first component is final while the second is not the trap
    let n = dfa.n_states();
    let idx = |outer: StateId, inner: StateId| (outer - 1) * n + (inner - 1);
    let mut parent: Vec<Option<Option<(usize, usize)>>> = vec![None; n * n];
    let mut queue = VecDeque::new();
    for p in dfa.states().filter(|&p| p != start) {
        parent[idx(start, p)] = Some(None);
        queue.push_back((start, p));
    }
    while let Some((outer, inner)) = queue.pop_front() {
        if outer == qf && inner != trap {
            let mut symbols = Vec::new();
            let mut at = idx(outer, inner);
            while let Some(Some((prev, s))) = parent[at] {
                symbols.push(s);
                at = prev;
            }
            symbols.reverse();
            let state = at % n + 1;
            return Ok(FactorFreeVerdict::structural(
                StructuralFailure::InnerOccurrence {
                    state,
                    word: Word::from_symbols(symbols),
                    reached: inner,
                },
            ));
        }
        let here = idx(outer, inner);
        for s in 0..k {
            let next = (dfa.step(outer, s), dfa.step(inner, s));
            let j = idx(next.0, next.1);
            if parent[j].is_none() {
                parent[j] = Some(Some((here, s)));
                queue.push_back(next);
            }
        }
    }

    Ok(FactorFreeVerdict::factor_free())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Before,
    Inside(StateId),
    After,
}

/// Decide factor-freeness of any complete DFA exactly. On failure the
/// witness is a shortest word `xuy` violating the definition.
pub fn check_semantic(dfa: &Dfa) -> FactorFreeVerdict {
    let start = dfa.start();
    if dfa.is_final(start) {
        // ε ∈ L: any other accepted word has ε as a proper factor
        if let Some(w) = shortest_nonempty_accepted(dfa) {
            return FactorFreeVerdict::decomposition(Decomposition {
                x: Word::empty(),
                u: Word::empty(),
                y: w,
            });
        }
        return FactorFreeVerdict::factor_free();
    }

    let n = dfa.n_states();
    let k = dfa.alphabet_size();
    let phases = n + 2;
    let encode = |outer: StateId, phase: Phase, flag: bool| {
        let ph = match phase {
            Phase::Before => 0,
            Phase::Inside(q) => q,
            Phase::After => n + 1,
        };
        ((outer - 1) * phases + ph) * 2 + flag as usize
    };
    let decode = |code: usize| {
        let flag = code % 2 == 1;
        let rest = code / 2;
        let ph = rest % phases;
        let outer = rest / phases + 1;
        let phase = match ph {
            0 => Phase::Before,
            p if p == n + 1 => Phase::After,
            q => Phase::Inside(q),
        };
        (outer, phase, flag)
    };

    let total = n * phases * 2;
    let mut dist = vec![usize::MAX; total];
    // predecessor code and the symbol read (None for a phase change)
    let mut parent: Vec<Option<(usize, Option<usize>)>> = vec![None; total];
    let mut deque = VecDeque::new();
    let init = encode(start, Phase::Before, false);
    dist[init] = 0;
    deque.push_back(init);

    let mut goal = None;
    while let Some(code) = deque.pop_front() {
        let (outer, phase, flag) = decode(code);
        if phase == Phase::After && flag && dfa.is_final(outer) {
            goal = Some(code);
            break;
        }
        let d = dist[code];
        let mut relax =
            |next: usize, cost: usize, sym: Option<usize>, deque: &mut VecDeque<usize>| {
                if d + cost < dist[next] {
                    dist[next] = d + cost;
                    parent[next] = Some((code, sym));
                    if cost == 0 {
                        deque.push_front(next);
                    } else {
                        deque.push_back(next);
                    }
                }
            };
        match phase {
            Phase::Before => {
                relax(
                    encode(outer, Phase::Inside(start), flag),
                    0,
                    None,
                    &mut deque,
                );
                for s in 0..k {
                    relax(
                        encode(dfa.step(outer, s), Phase::Before, true),
                        1,
                        Some(s),
                        &mut deque,
                    );
                }
            }
            Phase::Inside(inner) => {
                if dfa.is_final(inner) {
                    relax(encode(outer, Phase::After, flag), 0, None, &mut deque);
                }
                for s in 0..k {
                    let next = encode(dfa.step(outer, s), Phase::Inside(dfa.step(inner, s)), flag);
                    relax(next, 1, Some(s), &mut deque);
                }
            }
            Phase::After => {
                for s in 0..k {
                    relax(
                        encode(dfa.step(outer, s), Phase::After, true),
                        1,
                        Some(s),
                        &mut deque,
                    );
                }
            }
        }
    }

    let Some(mut code) = goal else {
        return FactorFreeVerdict::factor_free();
    };
    let (mut x, mut u, mut y) = (Vec::new(), Vec::new(), Vec::new());
    while let Some((prev, sym)) = parent[code] {
        if let Some(s) = sym {
            // the phase of the source config says which part consumed s
            match decode(prev).1 {
                Phase::Before => x.push(s),
                Phase::Inside(_) => u.push(s),
                Phase::After => y.push(s),
            }
        }
        code = prev;
    }
    for part in [&mut x, &mut u, &mut y] {
        part.reverse();
    }
    FactorFreeVerdict::decomposition(Decomposition {
        x: x.into(),
        u: u.into(),
        y: y.into(),
    })
}

fn shortest_nonempty_accepted(dfa: &Dfa) -> Option<Word> {
    let n = dfa.n_states();
    let mut parent: Vec<Option<(StateId, usize)>> = vec![None; n + 1];
    let mut seen = vec![false; n + 1];
    let mut queue = VecDeque::new();
    for s in 0..dfa.alphabet_size() {
        let t = dfa.step(dfa.start(), s);
        if !seen[t] {
            seen[t] = true;
            parent[t] = Some((0, s));
            queue.push_back(t);
        }
    }
    while let Some(q) = queue.pop_front() {
        if dfa.is_final(q) {
            let mut symbols = Vec::new();
            let mut at = q;
            loop {
                let (prev, s) = parent[at].expect("visited states have parents");
                symbols.push(s);
                if prev == 0 {
                    break;
                }
                at = prev;
            }
            symbols.reverse();
            return Some(Word::from_symbols(symbols));
        }
        for (s, &t) in dfa.row(q).iter().enumerate() {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((q, s));
                queue.push_back(t);
            }
        }
    }
    None
}

/// Look for an accepted word of length at most `max_len` that has an
/// accepted proper factor.
///
/// Words are generated length by length. Words reaching the same
/// configuration (run from the start, set of runs started at every later
/// position, whether an accepted proper factor has been completed) have
/// identical futures and are explored once. The answer is exact up to the
/// bound and says nothing about longer words.
pub fn check_bruteforce(dfa: &Dfa, max_len: usize) -> Option<Decomposition> {
    #[derive(Clone, PartialEq, Eq, Hash)]
    struct Config {
        outer: StateId,
        runs: Vec<StateId>,
        found: bool,
    }

    let live = dfa.co_reachable();
    let k = dfa.alphabet_size();
    let violates =
        |c: &Config| dfa.is_final(c.outer) && (c.found || c.runs.iter().any(|&q| dfa.is_final(q)));

    // layers[len] holds (config, parent index in layers[len - 1], symbol)
    let mut layers: Vec<Vec<(Config, usize, usize)>> = vec![vec![(
        Config {
            outer: dfa.start(),
            runs: Vec::new(),
            found: false,
        },
        0,
        0,
    )]];

    for len in 0..=max_len {
        if let Some(hit) = layers[len].iter().position(|(c, _, _)| violates(c)) {
            let mut symbols = Vec::with_capacity(len);
            let mut at = hit;
            for l in (1..=len).rev() {
                let (_, prev, s) = &layers[l][at];
                symbols.push(*s);
                at = *prev;
            }
            symbols.reverse();
            return Some(split_violation(dfa, &Word::from_symbols(symbols)));
        }
        if len == max_len {
            break;
        }
        let mut next: Vec<(Config, usize, usize)> = Vec::new();
        let mut index: HashMap<Config, usize> = HashMap::new();
        for (i, (c, _, _)) in layers[len].iter().enumerate() {
            let found = c.found || dfa.is_final(c.outer) || c.runs.iter().any(|&q| dfa.is_final(q));
            for s in 0..k {
                let outer = dfa.step(c.outer, s);
                if !live[outer] {
                    continue;
                }
                let mut runs: Vec<StateId> = c.runs.iter().map(|&q| dfa.step(q, s)).collect();
                runs.push(dfa.start());
                runs.sort_unstable();
                runs.dedup();
                let config = Config { outer, runs, found };
                if !index.contains_key(&config) {
                    index.insert(config.clone(), next.len());
                    next.push((config, i, s));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    None
}

/// Find the accepted proper factor of an accepted word `v` with the
/// leftmost start, shortest first.
fn split_violation(dfa: &Dfa, v: &Word) -> Decomposition {
    let len = v.len();
    for i in 0..=len {
        for j in i..=len {
            if i == 0 && j == len {
                continue;
            }
            let u = v.slice(i, j);
            if dfa.accepts(&u).unwrap_or(false) {
                return Decomposition {
                    x: v.slice(0, i),
                    u,
                    y: v.slice(j, len),
                };
            }
        }
    }
    unreachable!("violating word without an accepted proper factor")
}
