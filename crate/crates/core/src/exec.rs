//! Thin dispatch layer between the rayon and sequential code paths.
//!
//! With the default `parallel` feature the helpers fan work out over the
//! global rayon pool; without it they run the plain sequential loop. Both
//! paths produce identical results: every caller either works in exact
//! arithmetic or combines per-item results in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Keeps the items satisfying `pred`, preserving input order.
#[cfg(feature = "parallel")]
pub(crate) fn filter<T, F>(items: Vec<T>, pred: F) -> Vec<T>
where
    T: Send,
    F: Fn(&T) -> bool + Send + Sync,
{
    items.into_par_iter().filter(|t| pred(t)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter<T, F>(items: Vec<T>, pred: F) -> Vec<T>
where
    F: Fn(&T) -> bool,
{
    items.into_iter().filter(|t| pred(t)).collect()
}

/// Maps `f` over `0..n`, returning results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
