//! Order-preserving map over slices, parallel when the `parallel` feature is on.
//! Output order always matches input order so reductions stay deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const SEQUENTIAL_BELOW: usize = 64;

#[cfg(feature = "parallel")]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    if items.len() < SEQUENTIAL_BELOW {
        items.iter().map(f).collect()
    } else {
        items.par_iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    let _ = SEQUENTIAL_BELOW;
    items.iter().map(f).collect()
}

/// Maps `0..n` in order.
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(&idx, |&i| f(i))
}
