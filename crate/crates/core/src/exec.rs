//! Index-ordered map over a work range, parallel or sequential.
//!
//! Replicated simulations, sweep cells, per-edge table construction and
//! per-event analyses are all embarrassingly parallel: item `k` depends only
//! on its own derived seed. Routing them through [`map_indexed`] keeps the
//! output a `Vec` in index order, so the `parallel` feature (and the thread
//! count) can never change results, only wall-clock time.
//!
//! [`map_indexed_seq`] is always available; the benchmark suite uses it as the
//! baseline against the rayon path.

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Sequential reference implementation of [`map_indexed`].
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
