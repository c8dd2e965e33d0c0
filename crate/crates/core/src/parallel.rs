use rayon::ThreadPoolBuilder;

use crate::error::{Error, Result};

/// Runs `f` inside a dedicated rayon pool of `threads` workers.
///
/// All parallel loops in this crate produce results that depend only on the
/// seed, so the thread count affects wall time and nothing else.
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    if threads == 0 {
        return Err(Error::param("threads", "must be >= 1"));
    }
    let pool = ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param("threads", e.to_string()))?;
    Ok(pool.install(f))
}
