//! Machine checks for the all-odd path: the affine invariant `b = a - 1`
//! along repeated odd steps, the per-level algebra behind it, and the
//! unbounded growth of the smallest seed that sustains the path.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::indexing::IndexMap;
use crate::progression::Progression;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("the per-level check is stated for odd differences only")]
    NotOdd,
}

/// One level of the all-odd walk: the progression `S(a,b)` and index map
/// `alpha*j + beta` after `level` odd steps, plus whether the `b = a - 1`
/// invariant held there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddPathLevel {
    pub level: u32,
    pub a: BigUint,
    pub b: BigUint,
    pub alpha: BigUint,
    pub beta: BigUint,
    pub invariant_holds: bool,
}

/// Report of a depth-`k` all-odd walk from the root.
///
/// When the invariant holds everywhere the levels read `a = 3^k`,
/// `b = 3^k - 1`, `alpha = 2^k`, `beta = 2^k - 1`; the minimum seed is the
/// final `beta`, which grows without bound in `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllOddReport {
    pub depth: u32,
    pub levels: Vec<OddPathLevel>,
    pub min_seed: BigUint,
}

impl AllOddReport {
    pub fn all_hold(&self) -> bool {
        self.levels.iter().all(|l| l.invariant_holds)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct LevelRecord<'a> {
            level: u32,
            a: String,
            b: String,
            alpha: String,
            beta: String,
            invariant_holds: &'a bool,
        }
        #[derive(Serialize)]
        struct ReportRecord<'a> {
            depth: u32,
            all_hold: bool,
            min_seed: String,
            levels: Vec<LevelRecord<'a>>,
        }
        let record = ReportRecord {
            depth: self.depth,
            all_hold: self.all_hold(),
            min_seed: self.min_seed.to_string(),
            levels: self
                .levels
                .iter()
                .map(|l| LevelRecord {
                    level: l.level,
                    a: l.a.to_string(),
                    b: l.b.to_string(),
                    alpha: l.alpha.to_string(),
                    beta: l.beta.to_string(),
                    invariant_holds: &l.invariant_holds,
                })
                .collect(),
        };
        serde_json::to_string(&record).expect("report always serializes")
    }
}

fn level_from(level: u32, p: &Progression, m: &IndexMap) -> OddPathLevel {
    let invariant_holds = p.a().is_odd() && *p.b() == p.a() - 1u32;
    OddPathLevel {
        level,
        a: p.a().clone(),
        b: p.b().clone(),
        alpha: m.alpha().clone(),
        beta: m.beta().clone(),
        invariant_holds,
    }
}

/// Walks `k` odd-branch expansions from the root, recording progression and
/// index map at every level and checking `a` odd, `b = a - 1` at each.
/// Only a single path is materialized, so large `k` is cheap.
pub fn all_odd_path(k: u32) -> AllOddReport {
    let mut progression = Progression::new(1u32, 0u32).expect("1 >= 1");
    let mut map = IndexMap::identity();
    let mut levels = vec![level_from(0, &progression, &map)];
    for level in 1..=k {
        let split = progression
            .split_parity()
            .expect("difference stays odd along the all-odd path");
        let odd = split.odd;
        progression = odd
            .progression
            .step_odd_compact()
            .expect("the odd branch is uniformly odd");
        map = map.compose(odd.operator);
        levels.push(level_from(level, &progression, &map));
    }
    let min_seed = map.beta().clone();
    AllOddReport {
        depth: k,
        levels,
        min_seed,
    }
}

/// The inductive step in isolation: starting from `S(a, a-1)` with odd `a`,
/// one `T2` extraction followed by the compact odd step must land on
/// `S(3a, 3a-1)` with `3a` odd again.
pub fn lemma_step_check(a: &BigUint) -> Result<bool, InvariantError> {
    if a.is_even() {
        return Err(InvariantError::NotOdd);
    }
    let start = Progression::new(a.clone(), a - 1u32).expect("a >= 1");
    let stepped = start
        .t2()
        .step_odd_compact()
        .expect("t2 of S(a,a-1) with odd a is uniformly odd");
    let three_a = a * 3u32;
    Ok(stepped.a() == &three_a && *stepped.b() == &three_a - 1u32 && three_a.is_odd())
}

/// The smallest seed whose first `k` compact steps are all odd-branch:
/// `2^k - 1`. For `k = 0` the condition is empty and the value is 0.
pub fn min_seed_growth(k: u32) -> BigUint {
    (BigUint::one() << k) - 1u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{run, StepVariant};

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn walk_goldens() {
        let r = all_odd_path(1);
        assert_eq!((&r.levels[1].a, &r.levels[1].b), (&big(3), &big(2)));
        assert_eq!(
            (&r.levels[1].alpha, &r.levels[1].beta),
            (&big(2), &big(1))
        );

        let r = all_odd_path(2);
        assert_eq!((&r.levels[2].a, &r.levels[2].b), (&big(9), &big(8)));
        assert_eq!(
            (&r.levels[2].alpha, &r.levels[2].beta),
            (&big(4), &big(3))
        );
        assert_eq!(r.min_seed, big(3));

        let r = all_odd_path(0);
        assert_eq!(r.levels.len(), 1);
        assert!(r.levels[0].invariant_holds);
        assert_eq!(r.min_seed, big(0));
    }

    #[test]
    fn closed_forms_hold_to_depth_sixteen() {
        let r = all_odd_path(16);
        assert!(r.all_hold());
        let mut pow3 = BigUint::one();
        let mut pow2 = BigUint::one();
        for (k, level) in r.levels.iter().enumerate() {
            assert_eq!(level.level as usize, k);
            assert_eq!(level.a, pow3);
            assert_eq!(level.b, &pow3 - 1u32);
            assert_eq!(level.alpha, pow2);
            assert_eq!(level.beta, &pow2 - 1u32);
            pow3 *= 3u32;
            pow2 *= 2u32;
        }
    }

    #[test]
    fn lemma_step_goldens() {
        assert!(lemma_step_check(&big(1)).unwrap());
        assert!(lemma_step_check(&big(3)).unwrap());
        assert!(lemma_step_check(&big(9)).unwrap());
        assert_eq!(lemma_step_check(&big(4)), Err(InvariantError::NotOdd));
        assert_eq!(
            lemma_step_check(&(BigUint::one() << 201)),
            Err(InvariantError::NotOdd)
        );
        assert!(lemma_step_check(&((BigUint::one() << 201) + 1u32)).unwrap());
    }

    #[test]
    fn min_seed_goldens() {
        assert_eq!(min_seed_growth(3), big(7));
        assert_eq!(min_seed_growth(0), big(0));
        assert_eq!(min_seed_growth(5), big(31));
    }

    // Pre-step values along run(7, 3) are 7, 11, 17: all odd.
    #[test]
    fn min_seed_sustains_odd_steps() {
        use num_integer::Integer;
        let t = run(7u32, 3, StepVariant::Compact).unwrap();
        assert_eq!(
            t.values()
                .iter()
                .map(|v| u64::try_from(v).unwrap())
                .collect::<Vec<_>>(),
            [7, 11, 17, 26]
        );
        for pre in &t.values()[..3] {
            assert!(pre.is_odd());
        }
    }

    // Brute force: for k up to 10, the seeds in 1..2^k sustaining k odd
    // compact steps are exactly those congruent to 2^k - 1 mod 2^k, i.e.
    // only 2^k - 1 itself in that range.
    #[test]
    fn min_seed_is_minimal_by_brute_force() {
        use num_integer::Integer;
        for k in 1..=10u32 {
            let bound = 1u64 << k;
            for seed in 1..=bound {
                let t = run(seed, k as usize, StepVariant::Compact).unwrap();
                let sustains = t.values()[..k as usize].iter().all(|v| v.is_odd());
                let expected = seed % bound == bound - 1;
                assert_eq!(sustains, expected, "seed {seed}, k {k}");
            }
        }
    }

    #[test]
    fn report_serializes_with_string_integers() {
        let r = all_odd_path(2);
        let json = r.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["depth"], 2);
        assert_eq!(parsed["all_hold"], true);
        assert_eq!(parsed["min_seed"], "3");
        assert_eq!(parsed["levels"][2]["a"], "9");
        assert_eq!(parsed["levels"][2]["invariant_holds"], true);
    }
}
