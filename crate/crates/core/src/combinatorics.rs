//! Exact counting and subset enumeration.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Binomial coefficient `C(n, k)`, exactly. Zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k.min(n - k)))
}

/// Like [`binomial`], but accepts signed arguments and returns zero whenever
/// either argument is negative.
pub fn binomial_signed(n: i64, k: i64) -> BigCount {
    if n < 0 || k < 0 {
        return BigCount::zero();
    }
    binomial(n as u64, k as u64)
}

/// Binomial coefficient for desk-scale arguments, `None` on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// All `size`-subsets of `universe`, as sorted lists in lexicographic order.
pub fn enumerate_subsets(universe: &[usize], size: usize) -> Result<Vec<Vec<usize>>> {
    let mut sorted = universe.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if size > sorted.len() {
        return Err(Error::Domain(format!(
            "subset size {size} exceeds universe size {}",
            sorted.len()
        )));
    }
    if size == 0 {
        return Ok(vec![Vec::new()]);
    }
    Ok(sorted.into_iter().combinations(size).collect())
}
