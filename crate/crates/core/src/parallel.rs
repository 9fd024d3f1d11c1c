//! Deterministic parallel map over a slice.

use rayon::prelude::*;

/// Number of workers for a `jobs` request; `0` means all available cores.
pub fn worker_count(jobs: usize) -> usize {
    if jobs > 0 {
        jobs
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Applies `f` to every item on `jobs` workers with a static block
/// partition. Output order matches input order and each output depends only
/// on its own input, so results are identical for any worker count.
pub fn parallel_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = worker_count(jobs);
    if workers == 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let block = items.len().div_ceil(workers);
    let run = || {
        items
            .par_chunks(block)
            .flat_map_iter(|chunk| chunk.iter().map(&f).collect::<Vec<_>>())
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(run),
        Err(_) => items.iter().map(&f).collect(),
    }
}
