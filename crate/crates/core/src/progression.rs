//! Arithmetic progressions `S(a,b)`, their parity structure, the `T1`/`T2`
//! index operators, parity splitting, and the per-branch Collatz steps.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgressionError {
    /// `a = 0` would denote a constant sequence; rejected at construction.
    #[error("common difference must be at least 1")]
    ZeroDifference,
    /// Splitting is only meaningful for odd `a`; even `a` already has
    /// uniform parity.
    #[error("progression with even difference has uniform parity; nothing to split")]
    UniformParity,
    #[error("progression is not uniformly even")]
    NotUniformlyEven,
    #[error("progression is not uniformly odd")]
    NotUniformlyOdd,
}

/// The two index operators. `T1` reads off indices `2j`, `T2` reads off
/// `2j+1`; on progressions they act as `S(a,b) -> S(2a,b)` and
/// `S(a,b) -> S(2a,a+b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    T1,
    T2,
}

impl Operator {
    /// Digit used in the textual word format: '1' for `T1`, '2' for `T2`.
    pub fn digit(self) -> char {
        match self {
            Operator::T1 => '1',
            Operator::T2 => '2',
        }
    }

    /// Bit weight in the seed formula: 0 for `T1`, 1 for `T2`.
    pub fn bit(self) -> u8 {
        match self {
            Operator::T1 => 0,
            Operator::T2 => 1,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.digit())
    }
}

/// Parity of the terms of `S(a,b)`, a pure function of `(a mod 2, b mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    /// `a` even, `b` even: every term is even.
    AllEven,
    /// `a` even, `b` odd: every term is odd.
    AllOdd,
    /// `a` odd, `b` even: even terms at even indices.
    MixedEvenFirst,
    /// `a` odd, `b` odd: even terms at odd indices.
    MixedOddFirst,
}

/// The sequence `a*i + b` over `i >= 0`, with `a >= 1`. Values are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Progression {
    a: BigUint,
    b: BigUint,
}

/// One side of a parity split: the extracted progression together with the
/// operator that produced it (needed by callers for index-map composition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityBranch {
    pub progression: Progression,
    pub operator: Operator,
}

/// Result of [`Progression::split_parity`]: the even-valued and odd-valued
/// subsequences of a progression with odd difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySplit {
    pub even: ParityBranch,
    pub odd: ParityBranch,
}

impl Progression {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>) -> Result<Self, ProgressionError> {
        let a = a.into();
        if a == BigUint::ZERO {
            return Err(ProgressionError::ZeroDifference);
        }
        Ok(Progression { a, b: b.into() })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    /// The term `a*j + b`, exactly.
    pub fn value_at(&self, j: impl Into<BigUint>) -> BigUint {
        &self.a * j.into() + &self.b
    }

    pub fn classify_parity(&self) -> ParityClass {
        match (self.a.is_even(), self.b.is_even()) {
            (true, true) => ParityClass::AllEven,
            (true, false) => ParityClass::AllOdd,
            (false, true) => ParityClass::MixedEvenFirst,
            (false, false) => ParityClass::MixedOddFirst,
        }
    }

    /// `T1: S(a,b) -> S(2a,b)`; keeps the terms at even indices.
    pub fn t1(&self) -> Progression {
        Progression {
            a: &self.a * 2u32,
            b: self.b.clone(),
        }
    }

    /// `T2: S(a,b) -> S(2a,a+b)`; keeps the terms at odd indices.
    pub fn t2(&self) -> Progression {
        Progression {
            a: &self.a * 2u32,
            b: &self.a + &self.b,
        }
    }

    /// Splits a progression with odd difference into its even-valued and
    /// odd-valued subsequences. Which operator lands on which branch depends
    /// on the parity of `b`: for even `b` the even terms sit at even indices
    /// (`T1`), for odd `b` they sit at odd indices (`T2`).
    pub fn split_parity(&self) -> Result<ParitySplit, ProgressionError> {
        match self.classify_parity() {
            ParityClass::AllEven | ParityClass::AllOdd => Err(ProgressionError::UniformParity),
            ParityClass::MixedEvenFirst => Ok(ParitySplit {
                even: ParityBranch {
                    progression: self.t1(),
                    operator: Operator::T1,
                },
                odd: ParityBranch {
                    progression: self.t2(),
                    operator: Operator::T2,
                },
            }),
            ParityClass::MixedOddFirst => Ok(ParitySplit {
                even: ParityBranch {
                    progression: self.t2(),
                    operator: Operator::T2,
                },
                odd: ParityBranch {
                    progression: self.t1(),
                    operator: Operator::T1,
                },
            }),
        }
    }

    /// Halves an all-even progression term by term: `S(a,b) -> S(a/2,b/2)`.
    pub fn step_even(&self) -> Result<Progression, ProgressionError> {
        if self.classify_parity() != ParityClass::AllEven {
            return Err(ProgressionError::NotUniformlyEven);
        }
        Ok(Progression {
            a: &self.a >> 1,
            b: &self.b >> 1,
        })
    }

    /// Applies the compact odd step `n -> (3n+1)/2` term by term:
    /// `S(a,b) -> S(3a/2,(3b+1)/2)`. Requires every term odd, i.e. `a`
    /// even and `b` odd, so both divisions are exact.
    pub fn step_odd_compact(&self) -> Result<Progression, ProgressionError> {
        if self.classify_parity() != ParityClass::AllOdd {
            return Err(ProgressionError::NotUniformlyOdd);
        }
        Ok(Progression {
            a: (&self.a * 3u32) >> 1,
            b: (&self.b * 3u32 + 1u32) >> 1,
        })
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.a, self.b)
    }
}
