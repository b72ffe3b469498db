//! Data-parallel map-reduce with a sequential fallback when the `parallel` feature is off.

/// Maps `f` over `items` and folds the results with `combine`, starting from `identity()`.
#[cfg(feature = "parallel")]
pub fn map_reduce<T, R, F, I, C>(items: &[T], f: F, identity: I, combine: C) -> R
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
    I: Fn() -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).reduce(identity, combine)
}

#[cfg(not(feature = "parallel"))]
pub fn map_reduce<T, R, F, I, C>(items: &[T], f: F, identity: I, combine: C) -> R
where
    F: Fn(&T) -> R,
    I: Fn() -> R,
    C: Fn(R, R) -> R,
{
    items.iter().map(f).fold(identity(), combine)
}

/// Sequential reference used by determinism tests and benches regardless of features.
pub fn map_reduce_seq<T, R, F, I, C>(items: &[T], f: F, identity: I, combine: C) -> R
where
    F: Fn(&T) -> R,
    I: Fn() -> R,
    C: Fn(R, R) -> R,
{
    items.iter().map(f).fold(identity(), combine)
}

/// Number of worker threads in use.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Configures the global pool; a no-op without the `parallel` feature.
pub fn set_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
    }
}
