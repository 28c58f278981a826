//! Brute-force partition enumeration: the ground truth for SOME(n) and DSOME(n).

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Default ceiling on the number of partitions a single enumeration may produce.
pub const DEFAULT_COUNT_CAP: u64 = 1_000_000_000;

/// Parts in non-increasing order (strictly decreasing for distinct partitions).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub parts: Vec<usize>,
}

impl Partition {
    /// Sum of odd parts minus sum of even parts.
    pub fn odd_minus_even(&self) -> i64 {
        self.parts.iter().map(|&p| if p % 2 == 1 { p as i64 } else { -(p as i64) }).sum()
    }
}

/// Partitions of `n` in descending lexicographic order.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<usize>>,
    distinct: bool,
}

/// Lexicographically largest partition of `total` with every part at most `bound`
/// (and distinct parts below `bound + 1` when `distinct`), appended to `out`.
fn fill_greedy(out: &mut Vec<usize>, mut total: usize, mut bound: usize, distinct: bool) -> bool {
    while total > 0 {
        if bound == 0 {
            return false;
        }
        let p = bound.min(total);
        out.push(p);
        total -= p;
        if distinct {
            bound = p - 1;
        }
    }
    true
}

impl Partitions {
    fn advance(&mut self) {
        let Some(parts) = self.current.as_mut() else { return };
        let mut freed = 0usize;
        while let Some(p) = parts.pop() {
            freed += p;
            if p == 1 {
                continue;
            }
            let v = p - 1;
            let rest = freed - v;
            let fits = if self.distinct { rest <= v * (v - 1) / 2 } else { true };
            if fits {
                parts.push(v);
                let ok = fill_greedy(parts, rest, if self.distinct { v - 1 } else { v }, self.distinct);
                debug_assert!(ok);
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self.current.clone()?;
        self.advance();
        Some(Partition { parts: out })
    }
}

/// Number of partitions of `n` (all parts, or distinct parts).
pub fn partition_count(n: usize, distinct: bool) -> BigInt {
    let mut ways = vec![BigInt::from(0); n + 1];
    ways[0] = BigInt::from(1);
    for p in 1..=n {
        if distinct {
            for i in (p..=n).rev() {
                let add = ways[i - p].clone();
                ways[i] += add;
            }
        } else {
            for i in p..=n {
                let add = ways[i - p].clone();
                ways[i] += add;
            }
        }
    }
    ways.swap_remove(n)
}

/// Brute-force enumeration with a configurable count cap.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub count_cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { count_cap: DEFAULT_COUNT_CAP }
    }
}

impl Oracle {
    pub fn enumerate(&self, n: usize, distinct: bool) -> Result<Partitions> {
        let count = partition_count(n, distinct);
        if count.to_u64().is_none_or(|c| c > self.count_cap) {
            return Err(Error::ResourceLimit(format!(
                "{count} {}partitions of {n} exceed the cap of {}",
                if distinct { "distinct " } else { "" },
                self.count_cap
            )));
        }
        let mut first = Vec::new();
        fill_greedy(&mut first, n, n, distinct);
        Ok(Partitions { current: Some(first), distinct })
    }

    /// DSOME(n): over partitions into distinct parts, odd parts minus even parts.
    pub fn dsome(&self, n: usize) -> Result<i64> {
        Ok(self.enumerate(n, true)?.map(|p| p.odd_minus_even()).sum())
    }

    /// SOME(n): over all partitions, odd parts minus even parts.
    pub fn some(&self, n: usize) -> Result<i64> {
        Ok(self.enumerate(n, false)?.map(|p| p.odd_minus_even()).sum())
    }
}

pub fn dsome_bruteforce(n: usize) -> Result<i64> {
    Oracle::default().dsome(n)
}

pub fn some_bruteforce(n: usize) -> Result<i64> {
    Oracle::default().some(n)
}
