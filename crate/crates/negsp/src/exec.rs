//! Internal switch between rayon and plain iteration.
//!
//! Results are collected in input order, so both paths are deterministic.

#[cfg(feature = "parallel")]
pub(crate) fn maybe_par_map<T, R>(parallel: bool, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    use rayon::prelude::*;
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn maybe_par_map<T, R>(parallel: bool, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    let _ = parallel;
    items.iter().map(f).collect()
}
