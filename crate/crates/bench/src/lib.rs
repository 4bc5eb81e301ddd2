//! Shared inputs for the benchmarks.

use factorfree::{make_a, make_b, Dfa};

/// The witness pair `(A_n, B_m)`.
pub fn witness_pair(n: usize, m: usize) -> (Dfa, Dfa) {
    (
        make_a(n).expect("A_n size in range"),
        make_b(m).expect("B_m size in range"),
    )
}
