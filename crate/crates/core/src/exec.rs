//! Serial/parallel execution of independent work items.
//!
//! All parallel loops in the crate go through [`map_indexed`], which returns
//! results in index order. Work items derive their own randomness from their
//! index, so the output never depends on the schedule.

/// How independent work items are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Rayon work stealing on the current pool. Falls back to serial when the
    /// crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Runs `f` on a dedicated pool of `threads` workers. `None` uses the global
/// pool. Without the `parallel` feature, `f` runs directly.
pub fn with_threads<T, F>(threads: Option<usize>, f: F) -> crate::Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if n == 0 {
            return Err(crate::error::invalid("jobs", "must be at least 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| crate::error::invalid("jobs", e.to_string()))?;
        return Ok(pool.install(f));
    }
    let _ = threads;
    Ok(f())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_keep_index_order() {
        let serial = map_indexed(100, Execution::Serial, |i| i * i);
        let parallel = map_indexed(100, Execution::Parallel, |i| i * i);
        assert_eq!(serial, parallel);
        assert_eq!(serial[7], 49);
    }

    #[test]
    fn dedicated_pool() {
        let v = with_threads(Some(2), || map_indexed(10, Execution::Parallel, |i| i + 1)).unwrap();
        assert_eq!(v, (1..=10).collect::<Vec<_>>());
    }
}
