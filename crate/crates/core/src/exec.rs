// Copyright 2026 fermifock Contributors
// SPDX-License-Identifier: Apache-2.0

//! Data-parallel helpers. With the `parallel` feature the hot loops run on the
//! rayon pool; without it every mode falls back to the sequential path.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many work items the parallel path is not worth the fork/join.
pub const PAR_THRESHOLD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

impl ExecMode {
    #[cfg(feature = "parallel")]
    fn parallel_for(self, len: usize) -> bool {
        self == ExecMode::Parallel && len >= PAR_THRESHOLD
    }
}

/// `(0..len).map(f).collect()`, possibly in parallel. Output order is always index order.
pub fn map_indices<T, F>(mode: ExecMode, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.parallel_for(len) {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..len).map(f).collect()
}

/// Same as [`map_indices`] but always eligible for parallelism, for coarse
/// work items (whole circuits, files) where the threshold does not apply.
pub fn map_coarse<I, T, F>(mode: ExecMode, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Visit `data` in consecutive chunks of `chunk` elements; `f` receives the chunk index.
pub fn for_each_chunk_mut<T, F>(mode: ExecMode, data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = data.len().div_ceil(chunk);
    #[cfg(feature = "parallel")]
    if mode.parallel_for(chunks) || (mode.parallel_for(data.len()) && chunks > 1) {
        data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = (mode, chunks);
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = map_indices(ExecMode::Sequential, 1000, |i| i * i);
        let par = map_indices(ExecMode::Parallel, 1000, |i| i * i);
        assert_eq!(seq, par);

        let mut a = vec![0usize; 1000];
        let mut b = vec![0usize; 1000];
        for_each_chunk_mut(ExecMode::Sequential, &mut a, 7, |ci, c| {
            c.iter_mut().enumerate().for_each(|(k, x)| *x = ci * 7 + k)
        });
        for_each_chunk_mut(ExecMode::Parallel, &mut b, 7, |ci, c| {
            c.iter_mut().enumerate().for_each(|(k, x)| *x = ci * 7 + k)
        });
        assert_eq!(a, b);
        assert_eq!(a[999], 999);
    }
}
