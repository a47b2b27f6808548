//! Data-parallel sweeps. With the `parallel` feature the work is spread over
//! a rayon pool; without it every sweep runs on the calling thread.

/// Apply `f` to every item, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

/// Sequential reference implementation of [`map`].
pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Number of items for which `pred` fails, and the first failing index.
pub fn count_failures<T, F>(items: &[T], pred: F) -> (usize, Option<usize>)
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    let ok = map(items, pred);
    let first = ok.iter().position(|x| !x);
    (ok.iter().filter(|x| !**x).count(), first)
}

/// Set the size of the global pool. Has no effect without the `parallel`
/// feature or once the pool is running.
pub fn set_jobs(jobs: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let v: Vec<u64> = (0..1000).collect();
        assert_eq!(map(&v, |x| x * x), map_seq(&v, |x| x * x));
        assert_eq!(count_failures(&v, |x| x % 7 != 3), (143, Some(3)));
    }
}
