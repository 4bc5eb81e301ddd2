//! The binary witness families `A_n` and `B_m` and the bound formulas they
//! are measured against.
//!
//! Both families live on states `1..=n`, start in 1, accept only in `n - 1`
//! and use `n` as the trap. `1a = 2` and `1b = n`; every cell not listed
//! below goes to the trap.
//!
//! * `A_n`: `b` cycles through `2 -> 3 -> ... -> n-2 -> 2`. On `a`, odd
//!   states `3 <= p <= n-3` loop, even states `2 <= p <= n-3` fall into the
//!   trap, and `(n-2)a = n-1`.
//! * `B_m`: `pa = p + 1` for `2 <= p <= m-2` and `pb = p` for the same
//!   range.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dfa::Dfa;
use crate::error::{Error, Result};

pub const MIN_A: usize = 6;
pub const MIN_B: usize = 4;

/// Smallest operand size for which the union formula is claimed.
pub const THEOREM_MIN: usize = 10;

const A: usize = 0;
const B: usize = 1;

/// `A_n`. Requires `n >= 6`.
pub fn make_a(n: usize) -> Result<Dfa> {
    if n < MIN_A {
        return Err(Error::Parameter(format!(
            "family A needs n >= {MIN_A}, got {n}"
        )));
    }
    let trap = n;
    let mut delta = vec![vec![trap, trap]; n];
    delta[0] = vec![2, trap];
    for p in 2..n - 2 {
        delta[p - 1][B] = p + 1;
        delta[p - 1][A] = if p % 2 == 1 { p } else { trap };
    }
    delta[n - 3] = vec![n - 1, 2];
    Dfa::new(vec!['a', 'b'], n, 1, [n - 1], delta)
}

/// `B_m`. Requires `m >= 4`.
pub fn make_b(m: usize) -> Result<Dfa> {
    if m < MIN_B {
        return Err(Error::Parameter(format!(
            "family B needs m >= {MIN_B}, got {m}"
        )));
    }
    let trap = m;
    let mut delta = vec![vec![trap, trap]; m];
    delta[0] = vec![2, trap];
    for p in 2..=m - 2 {
        delta[p - 1] = vec![p + 1, p];
    }
    Dfa::new(vec!['a', 'b'], m, 1, [m - 1], delta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            other => Err(Error::Parameter(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessParams {
    pub family: Family,
    pub size: usize,
}

impl WitnessParams {
    pub fn new(family: Family, size: usize) -> Result<Self> {
        let min = match family {
            Family::A => MIN_A,
            Family::B => MIN_B,
        };
        if size < min {
            return Err(Error::Parameter(format!(
                "family {family} needs size >= {min}, got {size}"
            )));
        }
        Ok(WitnessParams { family, size })
    }

    pub fn build(&self) -> Result<Dfa> {
        match self.family {
            Family::A => make_a(self.size),
            Family::B => make_b(self.size),
        }
    }
}

fn floor_half(x: i64) -> i64 {
    x.div_euclid(2)
}

/// `mn - (m + n) + 3 - min{m, n}`.
pub fn bound_conjectured(m: i64, n: i64) -> i64 {
    m * n - (m + n) + 3 - m.min(n)
}

/// `mn - (m + n) - 2 - floor((min{m, n} - 2) / 2)`.
pub fn bound_paper(m: i64, n: i64) -> i64 {
    m * n - (m + n) - 2 - floor_half(m.min(n) - 2)
}

/// `mn - (m + n) - 2 - floor((n - 2) / 2)`, the union complexity claimed
/// for `L(A_n) ∪ L(B_m)`.
pub fn theorem_formula(n: i64, m: i64) -> i64 {
    m * n - (m + n) - 2 - floor_half(n - 2)
}

/// `mn - (m + n)`, tight for alphabets of three or more letters.
pub fn bound_ternary(m: i64, n: i64) -> i64 {
    m * n - (m + n)
}
