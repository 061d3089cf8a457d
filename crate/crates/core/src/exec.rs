/// Execution strategy for the data-parallel loops.
///
/// `Parallel` maps onto rayon when the `parallel` feature is compiled in and
/// degrades to the sequential path otherwise, so callers never need their
/// own `cfg` switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).collect()
            }
            _ => items.into_iter().map(f).collect(),
        }
    }

    /// Map then fold with an associative `combine`; `identity` seeds every shard.
    pub fn map_reduce<T, R, F, I, C>(self, items: Vec<T>, f: F, identity: I, combine: C) -> R
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
        I: Fn() -> R + Sync + Send,
        C: Fn(R, R) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.into_par_iter().map(f).reduce(identity, combine)
            }
            _ => items.into_iter().map(f).fold(identity(), combine),
        }
    }
}
