//! JSON interchange format and Graphviz export.
//!
//! ```json
//! {"alphabet": ["a", "b"], "states": 3, "start": 1, "finals": [2],
//!  "delta": [[2, 3], [3, 3], [3, 3]]}
//! ```
//!
//! Row `i` of `delta`, column `j` is the target of state `i + 1` on
//! `alphabet[j]`. All state ids are 1-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dfa::{Dfa, StateId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DfaFile {
    pub alphabet: Vec<String>,
    pub states: usize,
    pub start: StateId,
    pub finals: Vec<StateId>,
    pub delta: Vec<Vec<StateId>>,
}

impl From<&Dfa> for DfaFile {
    fn from(dfa: &Dfa) -> Self {
        DfaFile {
            alphabet: dfa.alphabet().iter().map(|c| c.to_string()).collect(),
            states: dfa.n_states(),
            start: dfa.start(),
            finals: dfa.finals().collect(),
            delta: dfa.table(),
        }
    }
}

impl TryFrom<DfaFile> for Dfa {
    type Error = Error;

    fn try_from(file: DfaFile) -> Result<Dfa> {
        let alphabet = file
            .alphabet
            .iter()
            .map(|s| {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::InvalidDfa(format!(
                        "alphabet entry {s:?} is not a single character"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(alphabet, file.states, file.start, file.finals, file.delta)
    }
}

pub fn to_json(dfa: &Dfa) -> String {
    serde_json::to_string_pretty(&DfaFile::from(dfa)).expect("DfaFile always serializes")
}

pub fn from_json(text: &str) -> Result<Dfa> {
    let file: DfaFile = serde_json::from_str(text)?;
    Dfa::try_from(file)
}

pub fn read_dfa(path: impl AsRef<Path>) -> Result<Dfa> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write_dfa(path: impl AsRef<Path>, dfa: &Dfa) -> Result<()> {
    let mut text = to_json(dfa);
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Graphviz rendering with numeric state labels.
pub fn to_dot(dfa: &Dfa) -> String {
    to_dot_labeled(dfa, |q| q.to_string())
}

/// Graphviz rendering with caller-supplied node labels. Finals are drawn
/// as double circles, the start state gets an arrow from an invisible point
/// node, and parallel edges are merged into one edge with a label like
/// `a,b`.
pub fn to_dot_labeled(dfa: &Dfa, label: impl Fn(StateId) -> String) -> String {
    let mut out = String::new();
    out.push_str("digraph dfa {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  __start [shape=point];\n");
    for q in dfa.states() {
        let shape = if dfa.is_final(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  {q} [shape={shape}, label=\"{}\"];", label(q));
    }
    let _ = writeln!(out, "  __start -> {};", dfa.start());
    for q in dfa.states() {
        let mut edges: BTreeMap<StateId, Vec<char>> = BTreeMap::new();
        for (s, &t) in dfa.row(q).iter().enumerate() {
            edges.entry(t).or_default().push(dfa.alphabet()[s]);
        }
        for (t, symbols) in edges {
            let text: Vec<String> = symbols.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "  {q} -> {t} [label=\"{}\"];", text.join(","));
        }
    }
    out.push_str("}\n");
    out
}
