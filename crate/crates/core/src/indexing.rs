//! Affine index maps from node-local indices back to root seeds, their
//! composition under `T1`/`T2` extractions, the closed-form seed formula,
//! and the seed-density corollary.
//!
//! A word of `k` operators sends the root index `i` to a local index `j`
//! with `i = 2^k * j + beta` where `beta` accumulates one bit per `T2`.
//! Both the step-by-step composition ([`IndexMap::compose`]) and the direct
//! power-sum formula ([`OperatorWord::seed_at`]) are implemented, so each
//! can check the other.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use thiserror::Error;

use crate::progression::{Operator, Progression};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordParseError {
    #[error("invalid operator digit {0:?} (expected '1' or '2')")]
    InvalidDigit(char),
}

/// The affine map `i = alpha*j + beta` from a node-local index `j` to the
/// root seed `i`. After `k` compositions `alpha = 2^k` and `0 <= beta < alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexMap {
    alpha: BigUint,
    beta: BigUint,
}

impl IndexMap {
    /// The map of the root: `i = j`.
    pub fn identity() -> Self {
        IndexMap {
            alpha: BigUint::one(),
            beta: BigUint::ZERO,
        }
    }

    /// Composes one more extraction onto the map. Substituting `i = 2j + s`
    /// (s = 0 for `T1`, 1 for `T2`) into `i = alpha*i' + beta` doubles
    /// `alpha` and adds `s*alpha` to `beta`.
    pub fn compose(&self, op: Operator) -> Self {
        let beta = match op {
            Operator::T1 => self.beta.clone(),
            Operator::T2 => &self.beta + &self.alpha,
        };
        IndexMap {
            alpha: &self.alpha * 2u32,
            beta,
        }
    }

    /// Evaluates the map: the seed `alpha*j + beta`.
    pub fn apply(&self, j: impl Into<BigUint>) -> BigUint {
        &self.alpha * j.into() + &self.beta
    }

    pub fn alpha(&self) -> &BigUint {
        &self.alpha
    }

    pub fn beta(&self) -> &BigUint {
        &self.beta
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}j+{}", self.alpha, self.beta)
    }
}

/// A finite sequence of operators, read root to leaf. The textual form uses
/// digits, e.g. `"21112"` for `T2 T1 T1 T1 T2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OperatorWord(Vec<Operator>);

impl OperatorWord {
    pub fn new(ops: Vec<Operator>) -> Self {
        OperatorWord(ops)
    }

    pub fn empty() -> Self {
        OperatorWord(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self, WordParseError> {
        s.chars()
            .map(|c| match c {
                '1' => Ok(Operator::T1),
                '2' => Ok(Operator::T2),
                other => Err(WordParseError::InvalidDigit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OperatorWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn operators(&self) -> &[Operator] {
        &self.0
    }

    /// A copy of the word with one more operator appended at the leaf end.
    pub fn extended(&self, op: Operator) -> Self {
        let mut ops = self.0.clone();
        ops.push(op);
        OperatorWord(ops)
    }

    /// The index map obtained by composing every operator of the word onto
    /// the identity.
    pub fn index_map(&self) -> IndexMap {
        self.0
            .iter()
            .fold(IndexMap::identity(), |m, &op| m.compose(op))
    }

    /// The seed offset `sum of s_t * 2^(t-1)` over the word (t = 1 at the
    /// root), where `s_t` is 1 exactly when the t-th operator is `T2`.
    ///
    /// Read root to leaf, the word is the binary expansion of the offset
    /// least-significant bit first: the root extraction decides the seed's
    /// parity and so must carry bit weight 1.
    pub fn seed_offset(&self) -> BigUint {
        let mut offset = BigUint::ZERO;
        for (t, op) in self.0.iter().enumerate() {
            if op.bit() == 1 {
                offset += BigUint::one() << t;
            }
        }
        offset
    }

    /// Closed form for the seed landing on local index `j`:
    /// `2^k * j + seed_offset`. Equals evaluating the composed index map.
    pub fn seed_at(&self, j: impl Into<BigUint>) -> BigUint {
        (j.into() << self.0.len()) + self.seed_offset()
    }

    /// The exact set of seeds reaching this word's node, as the progression
    /// `S(2^k, seed_offset)`.
    pub fn seed_progression(&self) -> Progression {
        let alpha = BigUint::one() << self.0.len();
        Progression::new(alpha, self.seed_offset())
            .expect("2^k is never zero")
    }

    /// Natural density `1/2^k` of the node's seeds inside the naturals,
    /// as an exact rational.
    pub fn density(&self) -> Ratio<BigUint> {
        Ratio::new(BigUint::one(), BigUint::one() << self.0.len())
    }
}

impl FromIterator<Operator> for OperatorWord {
    fn from_iter<I: IntoIterator<Item = Operator>>(iter: I) -> Self {
        OperatorWord(iter.into_iter().collect())
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.0 {
            write!(f, "{}", op.digit())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(s: &str) -> OperatorWord {
        OperatorWord::parse(s).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn identity_map() {
        let m = IndexMap::identity();
        assert_eq!(m.alpha(), &big(1));
        assert_eq!(m.beta(), &big(0));
        let after_t2 = m.compose(Operator::T2);
        assert_eq!((after_t2.alpha(), after_t2.beta()), (&big(2), &big(1)));
        let after_t1 = m.compose(Operator::T1);
        assert_eq!((after_t1.alpha(), after_t1.beta()), (&big(2), &big(0)));
    }

    #[test]
    fn compose_goldens() {
        let m = IndexMap {
            alpha: big(2),
            beta: big(1),
        };
        let m = m.compose(Operator::T1);
        assert_eq!((m.alpha(), m.beta()), (&big(4), &big(1)));

        let m = IndexMap {
            alpha: big(16),
            beta: big(1),
        };
        let m = m.compose(Operator::T2);
        assert_eq!((m.alpha(), m.beta()), (&big(32), &big(17)));
    }

    #[test]
    fn seed_at_goldens() {
        assert_eq!(word("21112").seed_at(5u32), big(177));
        for k in 0..12usize {
            let all_t1: OperatorWord = std::iter::repeat(Operator::T1).take(k).collect();
            assert_eq!(all_t1.seed_at(9u32), big(9) << k);
            let all_t2: OperatorWord = std::iter::repeat(Operator::T2).take(k).collect();
            assert_eq!(all_t2.seed_at(0u32), (BigUint::one() << k) - 1u32);
        }
    }

    #[test]
    fn seed_progression_goldens() {
        assert_eq!(
            word("21112").seed_progression(),
            Progression::new(32u32, 17u32).unwrap()
        );
        assert_eq!(
            OperatorWord::empty().seed_progression(),
            Progression::new(1u32, 0u32).unwrap()
        );
        assert_eq!(
            word("22").seed_progression(),
            Progression::new(4u32, 3u32).unwrap()
        );
    }

    // Independent check of seed_progression("22"): for each seed below 64,
    // walk two compact Collatz levels picking the branch of the seed's
    // parity, and record which operator each extraction used.
    #[test]
    fn seeds_reaching_double_t2_node() {
        use crate::progression::Progression;
        use num_integer::Integer;

        let mut reached = Vec::new();
        for seed in 0u64..64 {
            let mut value = big(seed);
            let mut node = Progression::new(1u32, 0u32).unwrap();
            let mut ops = Vec::new();
            for _ in 0..2 {
                let split = node.split_parity().unwrap();
                if value.is_even() {
                    ops.push(split.even.operator);
                    node = split.even.progression.step_even().unwrap();
                    value = &value >> 1;
                } else {
                    ops.push(split.odd.operator);
                    node = split.odd.progression.step_odd_compact().unwrap();
                    value = (&value * 3u32 + 1u32) >> 1;
                }
            }
            if ops == [Operator::T2, Operator::T2] {
                reached.push(seed);
            }
        }
        let expected: Vec<u64> = (0..64).filter(|s| s % 4 == 3).collect();
        assert_eq!(reached, expected);
    }

    #[test]
    fn density_goldens() {
        assert_eq!(
            word("21112").density(),
            Ratio::new(big(1), big(32))
        );
        assert_eq!(OperatorWord::empty().density(), Ratio::new(big(1), big(1)));
        assert_eq!(
            word("2121212121").density(),
            Ratio::new(big(1), big(1024))
        );
        assert_eq!(word("21112").density().to_string(), "1/32");
    }

    #[test]
    fn parse_rejects_other_digits() {
        assert_eq!(
            OperatorWord::parse("2103"),
            Err(WordParseError::InvalidDigit('0'))
        );
        assert_eq!(
            OperatorWord::parse("e"),
            Err(WordParseError::InvalidDigit('e'))
        );
        assert_eq!(OperatorWord::parse(""), Ok(OperatorWord::empty()));
    }

    #[test]
    fn closed_form_matches_composition_exhaustive_short() {
        // Every word up to length 10, a few representative indices.
        for k in 0..=10u32 {
            for bits in 0u32..(1 << k) {
                let w: OperatorWord = (0..k)
                    .map(|t| {
                        if bits >> (k - 1 - t) & 1 == 1 {
                            Operator::T2
                        } else {
                            Operator::T1
                        }
                    })
                    .collect();
                let m = w.index_map();
                for j in [0u64, 1, 7, 1000] {
                    assert_eq!(w.seed_at(j), m.apply(j), "word {w} at j={j}");
                }
            }
        }
    }

    fn word_strategy(max_len: usize) -> impl Strategy<Value = OperatorWord> {
        proptest::collection::vec(
            prop_oneof![Just(Operator::T1), Just(Operator::T2)],
            0..=max_len,
        )
        .prop_map(OperatorWord::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn closed_form_matches_composition_random_long(w in word_strategy(64)) {
            let m = w.index_map();
            for j in [0u64, 1, 7, 1000] {
                prop_assert_eq!(w.seed_at(j), m.apply(j));
            }
        }

        #[test]
        fn beta_stays_below_alpha(w in word_strategy(64)) {
            let m = w.index_map();
            prop_assert!(m.beta() < m.alpha());
            prop_assert_eq!(m.alpha().clone(), BigUint::one() << w.len());
        }

        #[test]
        fn parse_display_roundtrip(w in word_strategy(32)) {
            prop_assert_eq!(OperatorWord::parse(&w.to_string()).unwrap(), w);
        }
    }

    #[test]
    fn uniform_words() {
        for k in 0..=16usize {
            let all_t1: OperatorWord = std::iter::repeat(Operator::T1).take(k).collect();
            assert_eq!(all_t1.index_map().beta(), &BigUint::ZERO);
            let all_t2: OperatorWord = std::iter::repeat(Operator::T2).take(k).collect();
            assert_eq!(
                all_t2.index_map().beta(),
                &((BigUint::one() << k) - 1u32)
            );
        }
    }
}
