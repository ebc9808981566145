//! Worker-thread configuration.

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "HAUSDORFF_LAB_THREADS";

/// Thread cap from the environment, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Configures the global rayon pool from the environment. Later calls, or
/// calls after the pool has started, keep the existing pool.
pub fn init_from_env() {
    if let Some(n) = thread_cap() {
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::debug!("thread pool already initialized; {THREADS_ENV} ignored");
        }
    }
}
