//! Minimal fork-join helper for embarrassingly parallel grids.
//!
//! Worker count is capped by the `CVQKD_THREADS` environment variable
//! (default: available parallelism). Results are returned in input order
//! regardless of scheduling.

pub(crate) fn thread_cap() -> usize {
    std::env::var("CVQKD_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

pub(crate) fn parallel_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let workers = thread_cap().min(items.len().max(1));
    if workers <= 1 || items.len() < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk_len = items.len().div_ceil(workers);
    let mut mapped: Vec<Vec<U>> = Vec::with_capacity(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk_len)
            .map(|chunk| scope.spawn(|| chunk.iter().map(&f).collect::<Vec<U>>()))
            .collect();
        for handle in handles {
            mapped.push(handle.join().expect("worker thread panicked"));
        }
    });
    mapped.into_iter().flatten().collect()
}
