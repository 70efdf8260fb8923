//! Data-parallel map helpers with a sequential fallback.
//!
//! Grid sweeps (transform radii, diagnostic blocks, calibration samples) are
//! embarrassingly parallel. With the `parallel` feature (default) they run on
//! rayon; without it they run sequentially with identical results. Output
//! order always matches input order, so downstream reductions and emitted
//! files are bitwise reproducible either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is enabled.
pub fn maybe_par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
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

/// Always-sequential map, kept as a benchmark baseline.
pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_and_seq_agree_and_preserve_order() {
        let xs: Vec<f64> = (0..257).map(|i| i as f64 * 0.37).collect();
        let a = maybe_par_map(&xs, |x| x.sin() * x.cos());
        let b = seq_map(&xs, |x| x.sin() * x.cos());
        assert_eq!(a, b);
    }
}
