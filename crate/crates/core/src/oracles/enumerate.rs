//! Exhaustive enumeration of approval profiles.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{FvrError, Result};
use crate::instance::Instance;

/// Default cap on the number of profiles an exhaustive sweep may visit.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Every profile of `n` voters over `m` candidates, `(2^m)^n` in total.
///
/// Profile number `x` gives voter `i` the approval bitmask formed by bits
/// `m·i .. m·(i+1)` of `x`, so voter 0 varies fastest.
pub fn enumerate_instances(
    n: usize,
    m: usize,
    budget: usize,
) -> Result<impl Iterator<Item = Instance>> {
    if n == 0 || m == 0 {
        return Err(FvrError::InvalidParams(format!(
            "need n >= 1 and m >= 1 (n = {n}, m = {m})"
        )));
    }
    let count = BigUint::from(1u8) << (n * m);
    let total = match count.to_usize() {
        Some(c) if c <= budget => c,
        _ => {
            return Err(FvrError::BudgetExceeded {
                count: count.to_string(),
                budget,
            })
        }
    };
    let mask = (1u64 << m) - 1;
    Ok((0..total).map(move |x| {
        let x = x as u64;
        let masks: Vec<u64> = (0..n).map(|i| (x >> (m * i)) & mask).collect();
        Instance::from_masks(m, &masks).expect("masks fit in m bits")
    }))
}
