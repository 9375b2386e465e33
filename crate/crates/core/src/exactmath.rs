//! Exact integer and rational arithmetic.
//!
//! Binomial coefficients follow the convention used throughout the Johnson
//! scheme formulas: `C(n, k) = 0` whenever `k < 0` or `k > n`. A negative
//! upper argument never arises from a valid parameter triple and is rejected.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::{Error, Result};

/// Rows up to this size are memoized; larger rows are computed on demand.
pub const ROW_CACHE_LIMIT: u64 = 4096;

/// `C(n, k)` for any integer pair with `n >= 0`.
pub fn binom(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::NegativeBinomial { n, k });
    }
    Ok(choose(n as u64, k))
}

/// Infallible binomial for a nonnegative upper argument.
///
/// Served from the shared row cache when `n` is small enough, otherwise by the
/// multiplicative formula.
pub fn choose(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    if n <= ROW_CACHE_LIMIT {
        binom_row_cache(n)[k as usize].clone()
    } else {
        choose_multiplicative(n, k as u64)
    }
}

/// `C(n, 0..=n)`, memoized in a process-wide cache.
pub fn binom_row_cache(n: u64) -> Arc<[BigInt]> {
    static CACHE: OnceLock<BinomialCache> = OnceLock::new();
    CACHE.get_or_init(BinomialCache::new).row(n)
}

/// Concurrent memo of Pascal rows keyed by `n`.
///
/// Reads take a shared lock. A miss computes the row without holding the lock
/// and inserts it; if two threads race on the same row the first insert wins.
#[derive(Debug, Default)]
pub struct BinomialCache {
    rows: RwLock<HashMap<u64, Arc<[BigInt]>>>,
}

impl BinomialCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&self, n: u64) -> Arc<[BigInt]> {
        if let Some(row) = self.rows.read().expect("binomial cache poisoned").get(&n) {
            return Arc::clone(row);
        }
        let row: Arc<[BigInt]> = compute_row(n).into();
        let mut rows = self.rows.write().expect("binomial cache poisoned");
        Arc::clone(rows.entry(n).or_insert(row))
    }

    pub fn len(&self) -> usize {
        self.rows.read().expect("binomial cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn compute_row(n: u64) -> Vec<BigInt> {
    let len = n as usize + 1;
    let mut row = vec![BigInt::zero(); len];
    row[0] = BigInt::one();
    let half = n as usize / 2;
    for k in 0..half {
        row[k + 1] = &row[k] * BigInt::from(n - k as u64) / BigInt::from(k as u64 + 1);
    }
    for k in half + 1..len {
        row[k] = row[len - 1 - k].clone();
    }
    row
}

fn choose_multiplicative(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn integer(value: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(value.into())
}
