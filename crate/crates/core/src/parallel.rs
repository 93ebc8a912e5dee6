//! Fixed-size worker pools for Monte-Carlo and corpus runs. Results never
//! depend on the thread count because every work item draws from its own
//! seeded substream.

/// Runs `f` on a pool of `threads` workers; 0 means one per core.
pub fn install<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}
