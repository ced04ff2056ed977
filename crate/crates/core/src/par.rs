//! Data-parallel helpers. With the `parallel` feature these run on the rayon
//! pool; without it, or when [`Parallelism::Sequential`] is requested, they
//! run on the calling thread and produce identical results.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// `items.iter().map(f).collect()`, in parallel when enabled. Output order
/// always matches input order.
pub fn map<T, R, F>(items: &[T], mode: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Folds `0..n` in chunks and merges the partial results with `reduce`.
/// `reduce` must be associative and `identity` its neutral element.
pub fn fold_range<A, F, R>(n: u64, mode: Parallelism, identity: A, fold: F, reduce: R) -> A
where
    A: Clone + Send + Sync,
    F: Fn(&mut A, u64) + Sync + Send,
    R: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        const CHUNK: u64 = 1 << 12;
        let chunks = n.div_ceil(CHUNK);
        return (0..chunks)
            .into_par_iter()
            .map(|k| {
                let mut acc = identity.clone();
                for i in k * CHUNK..((k + 1) * CHUNK).min(n) {
                    fold(&mut acc, i);
                }
                acc
            })
            .reduce(|| identity.clone(), &reduce);
    }
    let _ = (mode, &reduce);
    let mut acc = identity;
    for i in 0..n {
        fold(&mut acc, i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let a = map(&items, Parallelism::Sequential, |x| x * x);
        let b = map(&items, Parallelism::Parallel, |x| x * x);
        assert_eq!(a, b);
        let sum = |mode| fold_range(100_000, mode, 0u64, |acc, i| *acc += i, |a, b| a + b);
        assert_eq!(sum(Parallelism::Sequential), sum(Parallelism::Parallel));
        assert_eq!(sum(Parallelism::Sequential), 99_999 * 100_000 / 2);
    }
}
