//! A workbench for deterministic finite automata over small alphabets,
//! aimed at the state complexity of boolean operations on factor-free
//! (infix-free) regular languages.
//!
//! The crate provides complete DFAs with 1-based state ids, Moore-style
//! minimization, reachable-only cross products for the four boolean
//! operations, three independent factor-freeness deciders, the binary
//! witness families `A_n` / `B_m` with their bound formulas, and an
//! exhaustive/random search over small factor-free DFAs.

pub mod dfa;
pub mod error;
pub mod factor_free;
pub mod io;
pub mod minimize;
pub mod product;
pub mod search;
pub mod witness;

pub use dfa::{Dfa, StateId, Word};
pub use error::{Error, Result};
pub use factor_free::{
    check_bruteforce, check_semantic, check_structural, Decomposition, FactorFreeVerdict, Failure,
    StructuralFailure,
};
pub use minimize::{minimize, state_complexity, MinimizationResult};
pub use product::{
    complexity_report, distinguishing_word, language_equivalent, product, BoolOp, BoundTable,
    ComplexityReport, PairState, Product,
};
pub use search::{
    all_binary_dfas, enumerate_factor_free, search, SearchConfig, SearchMode, SearchOutcome,
    SearchRecord,
};
pub use witness::{
    bound_conjectured, bound_paper, bound_ternary, make_a, make_b, theorem_formula, Family,
    WitnessParams,
};
