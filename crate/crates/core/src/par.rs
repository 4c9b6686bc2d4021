//! Data-parallel helpers. With the `parallel` feature the maps run on the
//! rayon pool; without it they run sequentially. Output order is the index
//! order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) fn map_slice<A, T, F>(items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Whether this build runs the maps in parallel.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
