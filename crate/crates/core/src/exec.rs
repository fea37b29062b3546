//! Sequential/parallel execution of the search loops.
//!
//! Every helper returns the same answer in both modes: searches pick the
//! first hit in input order, filters keep input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise the
    /// sequential path.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// First `Some` produced by `f` over `items`, in input order.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().find_map_first(f),
            _ => items.iter().find_map(f),
        }
    }

    /// First `Some` produced by `f` over `0..len`, in index order.
    pub fn find_map_first_index<R, F>(self, len: u64, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().find_map_first(f),
            _ => (0..len).find_map(f),
        }
    }

    /// Indices `i` with `keep(&items[i])`, ascending.
    pub fn filter_indices<T, F>(self, items: &[T], keep: F) -> Vec<usize>
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().enumerate().filter(|(_, t)| keep(t)).map(|(i, _)| i).collect(),
            _ => items.iter().enumerate().filter(|(_, t)| keep(t)).map(|(i, _)| i).collect(),
        }
    }

    /// All `f(i)` for `i` in `0..len` that return `Some`, in index order.
    pub fn filter_map_index<R, F>(self, len: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..len).into_par_iter().filter_map(f).collect(),
            _ => (0..len).filter_map(f).collect(),
        }
    }
}
