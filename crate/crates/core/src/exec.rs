//! Batch mapping over independent work items.
//!
//! With the `parallel` feature the work is spread over rayon's pool; without
//! it everything runs on the calling thread. Output order always matches
//! input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items` using the default worker pool.
#[cfg(feature = "parallel")]
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_batch<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_batch_sequential(items, f)
}

pub fn map_batch_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Like [`map_batch`] with an explicit worker count. `1` runs sequentially.
pub fn map_batch_with_workers<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers <= 1 {
        return map_batch_sequential(items, f);
    }
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => map_batch_sequential(items, f),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_batch_sequential(items, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map_batch_sequential(&xs, |x| x * x);
        assert_eq!(map_batch(&xs, |x| x * x), seq);
        assert_eq!(map_batch_with_workers(&xs, 4, |x| x * x), seq);
        assert_eq!(map_batch_with_workers(&xs, 1, |x| x * x), seq);
    }
}
