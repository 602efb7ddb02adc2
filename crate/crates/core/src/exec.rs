//! Data-parallel sweeps with a sequential fallback.
//!
//! Every sweep in the crate goes through [`Exec`]. With the `parallel`
//! feature (on by default) `Exec::Parallel` fans out over rayon's global
//! pool; without it, both variants run on the calling thread. Results are
//! always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this value will actually use worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map_range<R, F>(self, n: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    pub fn map_slice<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Like [`Exec::map_slice`], with per-worker scratch state built by `init`.
    pub fn map_slice_init<T, S, R, I, F>(self, items: &[T], init: I, f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        I: Fn() -> S + Send + Sync,
        F: Fn(&mut S, &T) -> R + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map_init(&init, |s, t| f(s, t)).collect();
        }
        let mut state = init();
        items.iter().map(|t| f(&mut state, t)).collect()
    }

    /// First (in input order) `Some` produced by `f`, with per-worker state.
    pub fn find_map_first_init<T, S, R, I, F>(self, items: &[T], init: I, f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        I: Fn() -> S + Send + Sync,
        F: Fn(&mut S, &T) -> Option<R> + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items
                .par_iter()
                .map_init(&init, |s, t| f(s, t))
                .find_map_first(|r| r);
        }
        let mut state = init();
        items.iter().find_map(|t| f(&mut state, t))
    }
}
