//! Concrete big-integer Collatz iteration, the ground truth every symbolic
//! result is replayed against.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// 0 is a fixed point of halving; trajectories start at `n >= 1`.
    #[error("trajectory seeds must be at least 1")]
    ZeroInput,
}

/// Which step function drives a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepVariant {
    /// `n/2` for even `n`, `3n+1` for odd `n`.
    Full,
    /// `n/2` for even `n`, `(3n+1)/2` for odd `n`; one odd step here equals
    /// two full steps.
    Compact,
}

/// `n/2` if even, `3n+1` if odd.
pub fn step_full(n: &BigUint) -> Result<BigUint, OracleError> {
    if n == &BigUint::ZERO {
        return Err(OracleError::ZeroInput);
    }
    if n.is_even() {
        Ok(n >> 1)
    } else {
        Ok(n * 3u32 + 1u32)
    }
}

/// `n/2` if even, `(3n+1)/2` if odd. For odd `n`, `3n+1` is always even,
/// so the division is exact.
pub fn step_compact(n: &BigUint) -> Result<BigUint, OracleError> {
    if n == &BigUint::ZERO {
        return Err(OracleError::ZeroInput);
    }
    if n.is_even() {
        Ok(n >> 1)
    } else {
        Ok((n * 3u32 + 1u32) >> 1)
    }
}

/// A fixed-length run of the chosen step function. Values are exact and the
/// run never stops early; reaching 1 continues into the 1-2-1-2 compact loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    values: Vec<BigUint>,
    variant: StepVariant,
}

impl Trajectory {
    pub fn seed(&self) -> &BigUint {
        &self.values[0]
    }

    pub fn variant(&self) -> StepVariant {
        self.variant
    }

    /// All values, seed first; `values()[t]` is the value after `t` steps.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// The values after each step, excluding the seed.
    pub fn step_values(&self) -> &[BigUint] {
        &self.values[1..]
    }

    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    /// The earliest pair of positions holding equal values, if any: the
    /// smallest second index, paired with the first occurrence of its value.
    pub fn detect_value_repeat(&self) -> Option<(usize, usize)> {
        let mut first_seen: HashMap<&BigUint, usize> = HashMap::new();
        for (pos, value) in self.values.iter().enumerate() {
            if let Some(&first) = first_seen.get(value) {
                return Some((first, pos));
            }
            first_seen.insert(value, pos);
        }
        None
    }
}

/// Runs exactly `steps` steps of the chosen variant from `seed`.
pub fn run(
    seed: impl Into<BigUint>,
    steps: usize,
    variant: StepVariant,
) -> Result<Trajectory, OracleError> {
    let seed = seed.into();
    if seed == BigUint::ZERO {
        return Err(OracleError::ZeroInput);
    }
    let mut values = Vec::with_capacity(steps + 1);
    values.push(seed);
    for _ in 0..steps {
        let next = match variant {
            StepVariant::Full => step_full(values.last().unwrap())?,
            StepVariant::Compact => step_compact(values.last().unwrap())?,
        };
        values.push(next);
    }
    Ok(Trajectory { values, variant })
}
