//! Parallel execution helpers with a sequential fallback.
//!
//! Every parallel entry point has a `_seq` twin with identical semantics.
//! With the default `parallel` feature the plain names dispatch to rayon;
//! without it they alias the sequential code and rayon is not linked at all.
//! Results are always collected in index order and floating-point reductions
//! are performed sequentially over the collected values, so outputs are
//! byte-identical across thread counts and between the two modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    map_indexed_seq(n, f)
}

pub fn map_indexed_seq<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Map `f` over a slice of items, collecting results in item order.
#[cfg(feature = "parallel")]
pub fn map_items<I: Sync, T: Send>(items: &[I], f: impl Fn(&I) -> T + Sync + Send) -> Vec<T> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<I, T>(items: &[I], f: impl Fn(&I) -> T) -> Vec<T> {
    map_items_seq(items, f)
}

pub fn map_items_seq<I, T>(items: &[I], f: impl Fn(&I) -> T) -> Vec<T> {
    items.iter().map(f).collect()
}

/// Deterministic sum of `f(i)` for i in `0..n`: parallel map, sequential fold.
pub fn sum_indexed(n: usize, f: impl Fn(usize) -> f64 + Sync + Send) -> f64 {
    map_indexed(n, f).iter().sum()
}

pub fn sum_indexed_seq(n: usize, f: impl Fn(usize) -> f64) -> f64 {
    map_indexed_seq(n, f).iter().sum()
}

/// Fill `out[i] = f(i)` with disjoint parallel writes.
#[cfg(feature = "parallel")]
pub fn fill_indexed<T: Send>(out: &mut [T], f: impl Fn(usize) -> T + Sync + Send) {
    out.par_iter_mut().enumerate().for_each(|(i, slot)| *slot = f(i));
}

#[cfg(not(feature = "parallel"))]
pub fn fill_indexed<T>(out: &mut [T], f: impl Fn(usize) -> T) {
    fill_indexed_seq(out, f)
}

pub fn fill_indexed_seq<T>(out: &mut [T], f: impl Fn(usize) -> T) {
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_sums_are_identical() {
        // catches any reduction-order drift between the two paths
        let f = |i: usize| ((i as f64) * 0.731).sin() / (1.0 + i as f64);
        let a = sum_indexed(10_000, f);
        let b = sum_indexed_seq(10_000, f);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn map_preserves_order() {
        let v = map_indexed(100, |i| i * i);
        assert_eq!(v[7], 49);
        assert_eq!(v, map_indexed_seq(100, |i| i * i));
    }
}
