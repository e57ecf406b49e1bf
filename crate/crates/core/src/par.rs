//! Data-parallel execution helpers.
//!
//! The heavy sweeps (PGL enumeration, parameter search, census cells) run on
//! rayon when the `parallel` feature is enabled (the default). Results are
//! collected in input order, so parallel and sequential runs produce
//! identical output. Building with `--no-default-features` removes rayon
//! entirely; `Parallelism::Sequential` forces the serial path at runtime,
//! which the benchmarks use for comparison.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runtime choice of execution strategy for the sweep entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Rayon when compiled in, sequential otherwise.
    #[default]
    Auto,
    Sequential,
}

/// Maps `0..n` and collects in index order.
pub(crate) fn map_range<U, F>(par: Parallelism, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Auto {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = par;
    (0..n).map(f).collect()
}

/// Maps a slice and collects in input order.
pub(crate) fn map_slice<T, U, F>(par: Parallelism, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Auto {
        return items.par_iter().map(f).collect();
    }
    let _ = par;
    items.iter().map(f).collect()
}
