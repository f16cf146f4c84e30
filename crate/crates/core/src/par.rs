//! Data-parallel driver for the exhaustive sweeps.
//!
//! With the default `parallel` feature the work is spread over rayon; without
//! it the same closures run sequentially. Callers are required to merge in a
//! canonical order (every sweep sorts its result), so output is identical in
//! both modes and for any worker count.

/// Maps `f` over `items` and concatenates the results. Ordering of the
/// concatenation follows `items` in both modes.
#[cfg(feature = "parallel")]
pub fn par_flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync,
{
    use rayon::prelude::*;
    let chunks: Vec<Vec<U>> = items.par_iter().map(&f).collect();
    chunks.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> Vec<U>,
{
    seq_flat_map(items, f)
}

/// Sequential reference implementation, always available (the bench suite
/// compares it against the rayon path).
pub fn seq_flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> Vec<U>,
{
    let mut out = Vec::new();
    for it in items {
        out.extend(f(it));
    }
    out
}
