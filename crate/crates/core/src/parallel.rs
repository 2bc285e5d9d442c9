//! Point-grid sweeps. `FTL_THREADS` caps the worker count.

use rayon::prelude::*;

pub fn thread_cap() -> Option<usize> {
    std::env::var("FTL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Maps `f` over `items` in parallel, preserving order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.iter().map(&f).collect(),
        },
        None => items.par_iter().map(&f).collect(),
    }
}
