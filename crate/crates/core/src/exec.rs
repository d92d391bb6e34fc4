//! Execution mode for the data-parallel sweeps.
//!
//! With the `parallel` feature (on by default) `Exec::Parallel` fans work out
//! over rayon's global pool. Without it, `Exec::Parallel` silently runs the
//! sequential path, so callers never need their own `cfg` switches. Output
//! order is always the input order.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether `Parallel` actually runs on a thread pool in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            Exec::Parallel => par_map(items, f),
        }
    }

    pub fn all<T, F>(self, items: &[T], f: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().all(f),
            Exec::Parallel => par_all(items, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().all(f)
}

#[cfg(not(feature = "parallel"))]
fn par_all<T, F>(items: &[T], f: F) -> bool
where
    F: Fn(&T) -> bool,
{
    items.iter().all(f)
}
