//! Execution strategy for batch work.
//!
//! With the `parallel` feature (default) batches run on rayon; without it,
//! or with [`Execution::Sequential`], they run on the calling thread. Output
//! order is always input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Rayon data-parallel; `threads: None` uses the global pool.
    Parallel { threads: Option<usize> },
}

impl Default for Execution {
    fn default() -> Self {
        Execution::Parallel { threads: None }
    }
}

impl Execution {
    pub fn with_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Execution::Sequential,
            t => Execution::Parallel { threads: t },
        }
    }

    /// Applies `f` to every element, returning results in input order.
    pub fn map<A, T, F>(self, items: &[A], f: F) -> Vec<T>
    where
        A: Sync,
        T: Send,
        F: Fn(&A) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel { threads } => parallel_map(items, f, threads),
        }
    }

    pub fn map_range<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let idx: Vec<usize> = (0..count).collect();
        self.map(&idx, |&i| f(i))
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<A, T, F>(items: &[A], f: F, threads: Option<usize>) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let run = || items.par_iter().map(&f).collect();
    match threads {
        None => run(),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<A, T, F>(items: &[A], f: F, _threads: Option<usize>) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    items.iter().map(f).collect()
}
