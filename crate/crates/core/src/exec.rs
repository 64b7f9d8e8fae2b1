//! Ordered fan-out over independent work items.
//!
//! With the `parallel` feature the items run on the current rayon pool;
//! without it, or with [`Execution::Sequential`], they run in order on the
//! calling thread. Results always come back in item order, so callers that
//! reduce them left to right get identical answers either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// True when work will actually be spread over worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map_indices<R, F>(count: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..count).map(f).collect()
}

pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_indices(items.len(), exec, |i| f(&items[i]))
}

/// Runs `f` inside a dedicated pool of `threads` workers. Falls back to a
/// plain call when the `parallel` feature is off.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indices(100, Execution::Sequential, |i| i * i);
        let par = with_threads(Some(4), || map_indices(100, Execution::Parallel, |i| i * i));
        assert_eq!(seq, par);
        assert_eq!(map_ordered(&[3, 1, 2], Execution::Parallel, |x| x + 1), vec![4, 2, 3]);
    }
}
