//! Order-preserving data-parallel helpers with a sequential fallback.
//!
//! Results are always collected in input order, so output is identical
//! across execution modes and thread counts.

use crate::config::Execution;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_range<R, F>(execution: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

pub fn map_slice<T, R, F>(execution: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Index of the first item (in input order) satisfying `pred`.
pub fn position_first<T, F>(execution: Execution, items: &[T], pred: F) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().position_first(pred),
        _ => items.iter().position(pred),
    }
}

pub fn is_parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = map_range(Execution::Sequential, 100, |i| i * i);
        let par = map_range(Execution::Parallel, 100, |i| i * i);
        assert_eq!(seq, par);
        let items: Vec<u32> = (0..1000).collect();
        assert_eq!(
            position_first(Execution::Parallel, &items, |&x| x > 500 && x % 7 == 0),
            position_first(Execution::Sequential, &items, |&x| x > 500 && x % 7 == 0)
        );
    }
}
