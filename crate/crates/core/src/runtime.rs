//! Worker-pool sizing and a deterministic indexed parallel map.
//!
//! Results are written into pre-assigned slots and reduced in index order, so
//! the outcome of any computation routed through here is identical for every
//! thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

static WORKER_CAP: AtomicUsize = AtomicUsize::new(0);

/// Caps worker parallelism; 0 restores the automatic choice.
pub fn set_worker_threads(n: usize) {
    WORKER_CAP.store(n, Ordering::SeqCst);
}

/// Effective worker count: the configured cap, or the machine parallelism.
pub fn worker_threads() -> usize {
    match WORKER_CAP.load(Ordering::SeqCst) {
        0 => std::thread::available_parallelism()
            .map(|v| v.get())
            .unwrap_or(1),
        n => n,
    }
}

/// Applies `f` to every index in `0..count`, possibly across threads, and
/// returns the results in index order.
pub fn parallel_map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = worker_threads().min(count).max(1);
    if workers == 1 {
        return (0..count).map(f).collect();
    }

    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    let chunk = count.div_ceil(workers);
    std::thread::scope(|scope| {
        let mut rest = slots.as_mut_slice();
        let mut start = 0;
        while !rest.is_empty() {
            let take = chunk.min(rest.len());
            let (head, tail) = rest.split_at_mut(take);
            let base = start;
            let f = &f;
            scope.spawn(move || {
                for (offset, slot) in head.iter_mut().enumerate() {
                    *slot = Some(f(base + offset));
                }
            });
            rest = tail;
            start += take;
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}
