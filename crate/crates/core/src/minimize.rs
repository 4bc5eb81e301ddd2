//! Moore-style partition refinement.

use std::collections::{BTreeMap, HashMap};

use crate::dfa::{Dfa, StateId};

/// Outcome of [`minimize`].
#[derive(Clone, Debug)]
pub struct MinimizationResult {
    /// Blocks of indistinguishable reachable states. Block `i` becomes
    /// state `i + 1` of `minimal`; states inside a block are sorted.
    pub partition: Vec<Vec<StateId>>,
    pub minimal: Dfa,
    /// Reachable state of the input to state of `minimal`.
    pub state_map: BTreeMap<StateId, StateId>,
}

impl MinimizationResult {
    pub fn block_of(&self, q: StateId) -> Option<&[StateId]> {
        self.state_map
            .get(&q)
            .map(|&b| self.partition[b - 1].as_slice())
    }

    /// Blocks with more than one state.
    pub fn merged_blocks(&self) -> impl Iterator<Item = &[StateId]> {
        self.partition
            .iter()
            .filter(|b| b.len() > 1)
            .map(Vec::as_slice)
    }
}

/// Quotient of the reachable part by indistinguishability.
///
/// Unreachable states are discarded first. Refinement starts from the
/// final/non-final split and refines on successor classes until the number
/// of classes stops growing. Block ids are assigned in breadth-first
/// discovery order, so the start state's block is always 1.
pub fn minimize(dfa: &Dfa) -> MinimizationResult {
    let order = dfa.reachable_order();
    let k = dfa.alphabet_size();
    let n = dfa.n_states();

    let mut class = vec![usize::MAX; n + 1];
    let mut count = {
        let mut ids: HashMap<bool, usize> = HashMap::new();
        for &q in &order {
            let next = ids.len();
            class[q] = *ids.entry(dfa.is_final(q)).or_insert(next);
        }
        ids.len()
    };

    let mut signature = Vec::with_capacity(k + 1);
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::with_capacity(order.len());
        let mut next_class = vec![usize::MAX; n + 1];
        for &q in &order {
            signature.clear();
            signature.push(class[q]);
            signature.extend(dfa.row(q).iter().map(|&t| class[t]));
            let fresh = ids.len();
            next_class[q] = *ids.entry(signature.clone()).or_insert(fresh);
        }
        let next_count = ids.len();
        class = next_class;
        if next_count == count {
            break;
        }
        count = next_count;
    }

    let mut partition: Vec<Vec<StateId>> = vec![Vec::new(); count];
    let mut state_map = BTreeMap::new();
    for &q in &order {
        partition[class[q]].push(q);
        state_map.insert(q, class[q] + 1);
    }
    for block in &mut partition {
        block.sort_unstable();
    }

    let mut finals = vec![false; count];
    let mut delta = vec![0; count * k];
    for (b, block) in partition.iter().enumerate() {
        let rep = block[0];
        finals[b] = dfa.is_final(rep);
        for (s, &t) in dfa.row(rep).iter().enumerate() {
            delta[b * k + s] = class[t] + 1;
        }
    }
    let minimal = Dfa::from_parts(dfa.alphabet().to_vec(), 1, finals, delta);

    MinimizationResult {
        partition,
        minimal,
        state_map,
    }
}

/// Number of states of the minimal DFA of `L(dfa)`.
pub fn state_complexity(dfa: &Dfa) -> usize {
    minimize(dfa).minimal.n_states()
}

/// True iff every state is reachable and all states are pairwise
/// distinguishable.
pub fn is_reduced(dfa: &Dfa) -> bool {
    state_complexity(dfa) == dfa.n_states()
}
