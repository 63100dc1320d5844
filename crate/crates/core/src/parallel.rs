//! Map-reduce over work items, on rayon when the `parallel` feature is on.

/// How verification work is scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when built with the `parallel` feature, otherwise runs sequentially.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// True when `Execution::Parallel` actually runs on multiple threads.
pub const PARALLEL_AVAILABLE: bool = cfg!(feature = "parallel");

pub(crate) fn map_reduce<T, R>(
    exec: Execution,
    items: &[T],
    map: impl Fn(&T) -> R + Sync + Send,
    identity: impl Fn() -> R + Sync + Send,
    reduce: impl Fn(R, R) -> R + Sync + Send,
) -> R
where
    T: Sync,
    R: Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(&map).reduce(&identity, &reduce);
    }
    #[cfg(not(feature = "parallel"))]
    let _ = exec;
    items.iter().map(map).fold(identity(), reduce)
}
