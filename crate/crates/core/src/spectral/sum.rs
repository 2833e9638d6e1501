//! Fixed-order reductions. Every norm and inner product in the crate goes
//! through these so that results do not depend on thread count.

use crate::real::Real;

const LEAF: usize = 32;

/// Pairwise (cascade) summation with a fixed split.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    if values.len() <= LEAF {
        let mut acc = T::zero();
        for &v in values {
            acc = acc + v;
        }
        acc
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// Pairwise sum of `f(i)` for `i in 0..len`.
pub fn pairwise_sum_by<T: Real>(len: usize, f: impl Fn(usize) -> T) -> T {
    fn go<T: Real>(lo: usize, hi: usize, f: &impl Fn(usize) -> T) -> T {
        if hi - lo <= LEAF {
            let mut acc = T::zero();
            for i in lo..hi {
                acc = acc + f(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, f) + go(mid, hi, f)
        }
    }
    go(0, len, &f)
}
