//! Execution helpers: data-parallel map with a sequential fallback.
//!
//! With the default `parallel` feature the maps run on the global rayon
//! pool; without it they run sequentially. Both paths preserve input order,
//! so results are bit-identical either way. The `QEDPOLY_THREADS`
//! environment variable caps the pool size (read once at CLI startup).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "QEDPOLY_THREADS";

/// Whether this build runs maps on a thread pool.
pub const PARALLEL_ENABLED: bool = cfg!(feature = "parallel");

/// Configures the global thread pool from `QEDPOLY_THREADS`, if set.
/// Silently keeps the existing pool when it was already initialized.
pub fn init_threads_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(raw) = std::env::var(THREADS_ENV) {
            if let Ok(n) = raw.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                }
            }
        }
    }
}

/// Order-preserving map over a slice, parallel when the feature is enabled.
pub fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
