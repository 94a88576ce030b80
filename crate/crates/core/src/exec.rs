//! Sequential / data-parallel execution of the embarrassingly parallel loops
//! (strategy enumeration, sign-tensor sweeps, restarts, sampling).
//!
//! With the `parallel` feature the `Parallel` mode runs on the rayon global
//! pool; without it every mode runs sequentially. Reductions are required to
//! be deterministic: callers combine with an associative, commutative
//! operator that breaks ties on the lowest item index, so results never
//! depend on worker count or scheduling.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to run a data-parallel loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this mode actually fans out to worker threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Map every index in `range` and fold the results with `reduce`.
    pub fn map_reduce<T, M, R>(self, range: Range<u64>, identity: T, map: M, reduce: R) -> T
    where
        T: Send + Clone + Sync,
        M: Fn(u64) -> T + Send + Sync,
        R: Fn(T, T) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(map).reduce(|| identity.clone(), reduce);
        }
        range.map(map).fold(identity, reduce)
    }

    /// Map every index in `range`, collecting results in index order.
    pub fn map_collect<T, M>(self, range: Range<u64>, map: M) -> Vec<T>
    where
        T: Send,
        M: Fn(u64) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(map).collect();
        }
        range.map(map).collect()
    }
}

/// Derive an independent 64-bit stream seed from a base seed and a unit index
/// (SplitMix64 finalizer).
pub fn sub_seed(seed: u64, unit: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(unit.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: u64| (i * 7919) % 1013;
        let max = |a: u64, b: u64| a.max(b);
        let s = Execution::Sequential.map_reduce(0..10_000, 0, f, max);
        let p = Execution::Parallel.map_reduce(0..10_000, 0, f, max);
        assert_eq!(s, p);
        assert_eq!(
            Execution::Sequential.map_collect(0..100, f),
            Execution::Parallel.map_collect(0..100, f)
        );
    }

    #[test]
    fn sub_seeds_differ() {
        assert_ne!(sub_seed(7, 0), sub_seed(7, 1));
        assert_ne!(sub_seed(7, 0), sub_seed(8, 0));
        assert_eq!(sub_seed(42, 3), sub_seed(42, 3));
    }
}
